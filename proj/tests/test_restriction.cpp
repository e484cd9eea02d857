#include "chowcheck/checks.hpp"
#include "chowcheck/restriction.hpp"
#include "chowcheck/series.hpp"

#include <gtest/gtest.h>

using namespace chowcheck;

namespace {

Spin7Lattice& lattice() {
    static Spin7Lattice L = spin7_lattice();
    return L;
}

RingPresentation toy_presentation() {
    // Z[x], |x| = 4, module {1, 2x} over Z[x^2]
    auto sig = AlgebraSignature::make({{"x", 4, false}}, Domain::local(2));
    auto x = Polynomial::generator(sig, 0);
    return {"toy", sig, {{"c", x * x}}, {{"1", Polynomial::one(sig)}, {"2x", x.scaled(Scalar(sig->domain(), 2))}}};
}

}  // namespace

TEST(Restriction, Spin7NamedClasses) {
    auto& L = lattice();
    EXPECT_TRUE(L.invariants->is_invariant(L.w8));
    EXPECT_TRUE(L.invariants->is_invariant(L.c6));
    auto rows = rho_image_audit(L.image(), *L.invariants, 0, 8, {{"1", Polynomial::one(L.sig)}, {"w4", L.w4}, {"w8", L.w8}});
    std::map<std::string, MembershipResult> named;
    for (const auto& r : rows)
        for (const auto& [n, m] : r.named) named[n] = m;
    EXPECT_EQ(named["1"].verdict, Membership::Inside);
    EXPECT_EQ(named["w4"].verdict, Membership::InsideAfterScaling);
    EXPECT_EQ(named["w4"].k, 1u);
    EXPECT_EQ(named["w8"].verdict, Membership::InsideAfterScaling);
    EXPECT_EQ(named["w8"].k, 1u);
}

TEST(Restriction, Spin7ImageRanksAndValuations) {
    auto& L = lattice();
    auto series = expand_series("1/((1-t^4)(1-t^8)(1-t^12))", 20);
    for (const auto& r : rho_image_audit(L.image(), *L.invariants, 0, 20)) {
        EXPECT_EQ(BigInt(r.invariant_rank), series[static_cast<std::size_t>(r.degree)]);
        EXPECT_EQ(r.image_rank, r.invariant_rank);
        for (auto v : r.valuations) EXPECT_LE(v, 1u);
        EXPECT_TRUE(r.closed);
    }
    for (const auto& r : rho_image_audit(L.full(), *L.invariants, 0, 20))
        for (auto v : r.valuations) EXPECT_EQ(v, 0u) << r.degree;
}

TEST(Restriction, FeshbachToyAndSpin7) {
    auto toy = toy_presentation();
    auto x = Polynomial::generator(toy.ambient, 0);
    auto v = feshbach_nilpotence(toy, {"2x", x.scaled(Scalar(toy.ambient->domain(), 2))}, 2);
    EXPECT_TRUE(v.nilpotent);
    EXPECT_EQ(v.n, 2u);
    EXPECT_FALSE(feshbach_nilpotence(toy, {"c", x * x}, 2, 8).nilpotent);
    EXPECT_THROW(feshbach_nilpotence(toy, {"x", x}, 2), std::invalid_argument);

    auto& L = lattice();
    auto c2 = feshbach_nilpotence(L.image(), {"c2'", L.w4.scaled(Scalar(L.sig->domain(), 2))}, 2, 8, 28);
    EXPECT_TRUE(c2.nilpotent);
    EXPECT_EQ(c2.n, 2u);
    EXPECT_FALSE(feshbach_nilpotence(L.image(), {"c4", L.w4 * L.w4}, 2, 3, 28).nilpotent);
}

TEST(Restriction, FeshbachConsistency) {
    // a nilpotent in the image mod p forces an invariant outside the image
    auto& L = lattice();
    auto c2 = feshbach_nilpotence(L.image(), {"c2'", L.w4.scaled(Scalar(L.sig->domain(), 2))}, 2, 8, 28);
    ASSERT_TRUE(c2.nilpotent);
    bool outside = false;
    for (const auto& r : rho_image_audit(L.image(), *L.invariants, 0, 12))
        for (const auto& [n, m] : r.basis) outside = outside || m.verdict != Membership::Inside;
    EXPECT_TRUE(outside);
}

TEST(Restriction, SurjectivityCriterion) {
    auto& L = lattice();
    auto good = surjectivity_criterion(L.full(), *L.invariants, 0, 20);
    EXPECT_TRUE(good.injective);
    auto bad = surjectivity_criterion(L.doctored(), *L.invariants, 0, 20);
    EXPECT_FALSE(bad.injective);
    EXPECT_EQ(bad.first_failure, 8);
    // only 1 in degree 0, nothing in positive degrees
    RingPresentation unit{"unit", L.sig, {}, {{"1", Polynomial::one(L.sig)}}};
    EXPECT_TRUE(surjectivity_criterion(unit, *L.invariants, 0, 12).injective);
}

TEST(Restriction, ResKernelSpin7) {
    auto data = spin7_restriction_data(28);
    auto ch = res_kernel(data, {"A'", "lattice"}, 0, 28);
    auto all = res_kernel(data, {"A'", "lattice", "omega"}, 0, 28);
    auto pattern = expand_series("t^6/((1-t^8)(1-t^12)(1-t^16))", 28);
    for (int d = 0; d <= 28; ++d) {
        const auto& k = ch[static_cast<std::size_t>(d)];
        EXPECT_EQ(BigInt(k.generators), pattern[static_cast<std::size_t>(d)]) << d;
        EXPECT_EQ(k.free_rank, 0u);
        EXPECT_EQ(all[static_cast<std::size_t>(d)].generators, 0u) << d;
        // kernel-image duality
        EXPECT_EQ(k.generators + k.image_rank, k.free_sources + k.torsion_sources) << d;
        EXPECT_EQ(all[static_cast<std::size_t>(d)].image_rank, k.free_sources + k.torsion_sources) << d;
    }
    ASSERT_EQ(ch[6].witnesses.size(), 1u);
    EXPECT_EQ(ch[6].witnesses[0], "xi3");
    // c7 is detected by A'
    EXPECT_EQ(ch[14].generators, 1u);
    EXPECT_EQ(ch[14].witnesses[0], "c4*xi3");
    EXPECT_THROW(res_kernel(data, {"nowhere"}, 0, 4), std::invalid_argument);
}

TEST(Restriction, ResKernelMixedTorsion) {
    // Z -> Z/2 by reduction: kernel 2Z, one generator, free
    auto f2 = AlgebraSignature::make({{"y", 2, false}}, Domain::fp(2));
    RestrictionData d{2, {{"T", 2}}, {{"a", 2, false, {{"T", Polynomial::generator(f2, 0)}}}}};
    auto k = res_kernel(d, {"T"}, 2, 2);
    EXPECT_EQ(k[0].generators, 1u);
    EXPECT_EQ(k[0].free_rank, 1u);
    // Z/2 -> Z/2 identity: kernel 0
    RestrictionData e{2, {{"T", 2}}, {{"b", 2, true, {{"T", Polynomial::generator(f2, 0)}}}}};
    EXPECT_EQ(res_kernel(e, {"T"}, 2, 2)[0].generators, 0u);
    // missing image
    RestrictionData m{2, {{"T", 2}}, {{"b", 2, true, {}}}};
    EXPECT_THROW(res_kernel(m, {"T"}, 2, 2), std::invalid_argument);
}

TEST(Restriction, OmegaDetection) {
    Ahss a(spin7_chart(), 3);
    auto od = omega_detection_audit(a, 28);
    EXPECT_TRUE(od.ok());
    EXPECT_TRUE(od.control_vanishes);
    ASSERT_FALSE(od.degrees.empty());
    EXPECT_EQ(od.degrees.front().degree, 6);
}

TEST(Restriction, F4CycleMapScenarios) {
    Ahss a(f4_chart(), 2);
    std::map<int, std::string> idx;
    const auto report = f4_cycle_map_report(a, 48);
    for (const auto& row : report.rows())
        if (row.check == "f4.cycle_map.x8sq_in_image") idx[row.degree] = row.verdict;
    // 3x4 and 3 x4 x36 are the only non-liftable directions through 48
    EXPECT_EQ(idx[0], "index 1");
    EXPECT_EQ(idx[4], "index 3^1");
    EXPECT_EQ(idx[8], "index 1");
    EXPECT_EQ(idx[40], "index 3^1");
    EXPECT_EQ(idx[48], "index 1");
}
