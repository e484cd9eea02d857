#include <chowcheck/dickson.hpp>
#include <chowcheck/group.hpp>
#include <chowcheck/parse.hpp>
#include <chowcheck/steenrod.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace chowcheck;

namespace {

SignaturePtr f2(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    return AlgebraSignature::uniform(names, 1, Domain::fp(2));
}

Polynomial random_poly(std::mt19937& rng, const SignaturePtr& sig, int max_deg) {
    std::uniform_int_distribution<int> coin(0, 1), deg(0, max_deg);
    Polynomial f = Polynomial::zero(sig);
    for (const auto& m : degree_slice(*sig, deg(rng)))
        if (coin(rng)) f += Polynomial::monomial(sig, m, Scalar(sig->domain(), 1));
    return f;
}

}  // namespace

TEST(Derivation, LeibnizByHand) {
    auto sig = f2(2);
    EXPECT_EQ(milnor_q_closed(0, parse_polynomial("x1*x2", sig)), parse_polynomial("x1^2*x2 + x1*x2^2", sig));
    EXPECT_TRUE(milnor_q_closed(0, parse_polynomial("x1^2", sig)).is_zero());
    EXPECT_EQ(milnor_q_closed(1, parse_polynomial("x1", sig)), parse_polynomial("x1^4", sig));
    EXPECT_TRUE(milnor_q_closed(2, Polynomial::one(sig)).is_zero());
}

TEST(Derivation, KoszulSignAtOddPrime) {
    auto sig = AlgebraSignature::make({{"x9", 9, true}, {"x26", 26, false}, {"x21", 21, true}, {"x10", 10, false}},
                                      Domain::fp(3));
    auto spec = DerivationSpec::make(sig, 1, {{"x9", parse_polynomial("x10", sig)}, {"x26", Polynomial::zero(sig)},
                                              {"x21", Polynomial::zero(sig)}, {"x10", Polynomial::zero(sig)}});
    // Q(x9*x21) = Q(x9) x21 - x9 Q(x21)
    EXPECT_EQ(apply_derivation(spec, parse_polynomial("x9*x21", sig)), parse_polynomial("x10*x21", sig));
    EXPECT_THROW(DerivationSpec::make(sig, 2, {}), std::invalid_argument);
    EXPECT_THROW(DerivationSpec::make(sig, 1, {{"x9", parse_polynomial("x26", sig)}}), std::invalid_argument);
    auto partial = DerivationSpec::make(sig, 1, {{"x9", parse_polynomial("x10", sig)}});
    EXPECT_THROW(apply_derivation(partial, parse_polynomial("x26", sig)), std::invalid_argument);
}

TEST(Derivation, SignOnOddPrefix) {
    auto sig = AlgebraSignature::make({{"a", 1, true}, {"b", 1, true}, {"c", 2, false}}, Domain::fp(3));
    auto spec = DerivationSpec::make(sig, 1, {{"a", parse_polynomial("c", sig)}, {"b", parse_polynomial("c", sig)},
                                              {"c", Polynomial::zero(sig)}});
    // D(ab) = c b - a c
    EXPECT_EQ(apply_derivation(spec, parse_polynomial("a*b", sig)), parse_polynomial("b*c - a*c", sig));
    // D^2 = 0 here since D(c) = 0 and D(c b - a c) = c*c - c*c
    EXPECT_TRUE(apply_derivation(spec, apply_derivation(spec, parse_polynomial("a*b", sig))).is_zero());
}

TEST(Squares, Examples) {
    auto sig = f2(2);
    auto x = parse_polynomial("x1", sig);
    EXPECT_EQ(sq(1, x), parse_polynomial("x1^2", sig));
    EXPECT_EQ(sq(2, parse_polynomial("x1^2", sig)), parse_polynomial("x1^4", sig));
    EXPECT_TRUE(sq(3, parse_polynomial("x1*x2", sig)).is_zero());
    EXPECT_EQ(milnor_q_recursive(1, x), parse_polynomial("x1^4", sig));
    EXPECT_THROW(milnor_q_recursive(3, x), std::invalid_argument);
    EXPECT_THROW(sq(1, parse_polynomial("t", AlgebraSignature::uniform({"t"}, 2, Domain::fp(2)))),
                 std::invalid_argument);
}

TEST(Property, ClosedEqualsRecursiveExhaustive) {
    for (int n = 1; n <= 3; ++n) {
        auto sig = f2(n);
        for (int d = 0; d <= 8; ++d)
            for (const auto& m : degree_slice(*sig, d)) {
                auto f = Polynomial::monomial(sig, m, Scalar(Domain::fp(2), 1));
                for (unsigned i = 0; i <= 2; ++i) ASSERT_EQ(milnor_q_closed(i, f), milnor_q_recursive(i, f));
            }
    }
}

TEST(Property, QSquaresToZeroAndCartan) {
    std::mt19937 rng(1);
    auto sig = f2(3);
    for (int trial = 0; trial < 40; ++trial) {
        auto f = random_poly(rng, sig, 5), g = random_poly(rng, sig, 5);
        for (unsigned i = 0; i <= 2; ++i) {
            EXPECT_TRUE(milnor_q_closed(i, milnor_q_closed(i, f)).is_zero());
            EXPECT_EQ(milnor_q_closed(i, f * g), milnor_q_closed(i, f) * g + f * milnor_q_closed(i, g));
            EXPECT_TRUE(milnor_q_closed(i, f * f).is_zero());
        }
        for (unsigned k = 0; k <= 6; ++k) {
            Polynomial rhs = Polynomial::zero(sig);
            for (unsigned a = 0; a <= k; ++a) rhs += sq(a, f) * sq(k - a, g);
            EXPECT_EQ(sq(k, f * g), rhs);
        }
    }
}

TEST(Homology, Complex) {
    GradedComplex cx;
    cx.p = 2;
    cx.dims = {{0, 1}, {1, 2}, {2, 1}};
    cx.maps.emplace(0, FpMatrix::from_rows(2, 1, {{1}, {0}}));
    cx.maps.emplace(1, FpMatrix::from_rows(2, 2, {{0, 1}}));
    auto h = q0_homology(cx, 0, 2);
    EXPECT_EQ(h[0], 0u);
    EXPECT_EQ(h[1], 0u);
    EXPECT_EQ(h[2], 0u);
    cx.maps[1] = FpMatrix::from_rows(2, 2, {{1, 0}});
    EXPECT_THROW(q0_homology(cx, 0, 2), std::runtime_error);
    GradedComplex trivial;
    trivial.dims = {{0, 1}, {3, 2}};
    EXPECT_EQ(q0_homology(trivial, 0, 3)[3], 2u);
}

TEST(Dickson, SmallRanks) {
    auto c1 = build_dickson(1);
    EXPECT_EQ(c1.e, parse_polynomial("z^2 + x1*z", c1.signature));
    EXPECT_EQ(c1.d[0], parse_polynomial("x1", c1.signature));
    auto c2 = build_dickson(2);
    EXPECT_EQ(c2.d[1], parse_polynomial("x1^2+x1*x2+x2^2", c2.signature));
    EXPECT_EQ(c2.d[0], parse_polynomial("x1^2*x2+x1*x2^2", c2.signature));
    auto c3 = build_dickson(3);
    EXPECT_EQ(c3.d[0].degree(), 7);
    EXPECT_EQ(c3.d[1].degree(), 6);
    EXPECT_EQ(c3.d[2].degree(), 4);
    EXPECT_THROW(build_dickson(5), std::invalid_argument);
}

TEST(Dickson, LemmasHold) {
    for (int h = 1; h <= 3; ++h) {
        auto ctx = build_dickson(h);
        auto qd = verify_lemma_qd(ctx);
        for (const auto& c : qd.checks) EXPECT_TRUE(c.holds) << "h=" << h << " " << c.name;
        auto qe = verify_lemma_qe(ctx);
        for (const auto& c : qe.checks) EXPECT_TRUE(c.holds) << "h=" << h << " " << c.name;
    }
    // the wider range i < h fails exactly at i = h - 1
    auto ctx = build_dickson(2);
    auto wide = verify_lemma_qd(ctx, 2);
    for (const auto& c : wide.checks)
        if (!c.holds) EXPECT_EQ(c.name.substr(0, 2), "Q1");
    EXPECT_FALSE(wide.all_hold());
}

TEST(Dickson, MatchesGroupInvariants) {
    for (int h = 2; h <= 3; ++h) {
        auto ctx = build_dickson(h);
        auto action = build_gl(h);
        for (int i = 0; i < h; ++i) {
            int deg = (1 << h) - (1 << i);
            auto inv = invariant_basis(action, deg, Domain::fp(2));
            auto di = parse_polynomial(ctx.d[i].to_string(), action.signature);
            auto coords = coordinates(di, inv.ambient);
            std::vector<Rational> v;
            for (const auto& c : coords) v.push_back(c.to_rational());
            EXPECT_EQ(membership(v, inv).verdict, Membership::Inside) << "h=" << h << " i=" << i;
            EXPECT_TRUE(verify_invariance(action, span(Domain::fp(2), v.size(), {v}, inv.ambient)));
        }
    }
}

TEST(Dickson, AdditiveInZ) {
    // e(z + z') = e(z) + e(z') for h <= 2
    for (int h = 1; h <= 2; ++h) {
        auto ctx = build_dickson(h);
        std::vector<Generator> gens = ctx.signature->generators();
        gens.push_back({"w", 1, false});
        auto big = AlgebraSignature::make(gens, Domain::fp(2));
        auto e = parse_polynomial(ctx.e.to_string(), big);
        std::map<std::string, Polynomial> shift{{"z", parse_polynomial("z+w", big)}, {"w", parse_polynomial("w", big)}};
        for (int i = 1; i <= h; ++i) {
            auto n = "x" + std::to_string(i);
            shift.emplace(n, parse_polynomial(n, big));
        }
        std::map<std::string, Polynomial> swap = shift;
        swap["z"] = parse_polynomial("w", big);
        EXPECT_EQ(substitute(e, shift, big), e + substitute(e, swap, big));
    }
}
