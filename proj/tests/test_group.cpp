#include <chowcheck/group.hpp>
#include <chowcheck/parse.hpp>

#include <gtest/gtest.h>

using namespace chowcheck;

TEST(Group, Orders) {
    EXPECT_EQ(enumerate_group(build_gl(1)).size(), 1u);
    EXPECT_EQ(enumerate_group(build_gl(2)).size(), 6u);
    EXPECT_EQ(enumerate_group(build_gl(3)).size(), 168u);
    EXPECT_EQ(enumerate_group(build_gl(4)).size(), 20160u);
    EXPECT_EQ(enumerate_group(build_weyl_so(3)).size(), 48u);
    EXPECT_EQ(enumerate_group(build_weyl_spin(3)).size(), 48u);
    EXPECT_EQ(enumerate_group(build_weyl_f4()).size(), 1152u);
    EXPECT_THROW(enumerate_group(build_weyl_f4(), 100), std::runtime_error);
    EXPECT_THROW(build_gl(5), std::invalid_argument);
}

TEST(Group, RejectsSingularMatrix) {
    GroupAction a = build_weyl_so(2);
    a.generators.push_back({{1, 1}, {1, 1}});
    EXPECT_THROW(validate(a), std::invalid_argument);
}

TEST(Invariants, SignedPermutationsOverQ) {
    // Q[t1^2, t2^2, t3^2]^{S_3}: degrees 4, 8, 12
    auto ranks = poincare_series(build_weyl_so(3), 12, Domain::rationals());
    EXPECT_EQ(ranks, (std::vector<std::size_t>{1, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 3}));
}

TEST(Invariants, DicksonRanks) {
    // F_2[x1,x2]^{GL_2}: generators in degrees 2, 3
    auto ranks = poincare_series(build_gl(2), 6, Domain::fp(2));
    EXPECT_EQ(ranks, (std::vector<std::size_t>{1, 0, 1, 1, 1, 1, 2}));
}

TEST(Invariants, F4OverQ) {
    // fundamental invariants in topological degrees 4, 12, 16, 24
    auto ranks = poincare_series(build_weyl_f4(), 16, Domain::rationals());
    EXPECT_EQ(ranks[4], 1u);
    EXPECT_EQ(ranks[8], 1u);
    EXPECT_EQ(ranks[12], 2u);
    EXPECT_EQ(ranks[16], 3u);
}

TEST(Invariants, SpinLatticeIntegral) {
    auto a = build_weyl_spin(3);
    auto z = invariant_basis(a, 4, Domain::integers());
    ASSERT_EQ(z.rank(), 1u);
    EXPECT_TRUE(verify_invariance(a, z));
    auto sig = a.signature;
    auto w4 = parse_polynomial("t1^2 + t2^2 + 2*g^2 - 2*g*t1 - 2*g*t2 + t1*t2", sig);
    auto found = z.as_polynomials(sig).front();
    EXPECT_TRUE(found == w4 || found == -w4) << found.to_string();
}

TEST(Invariants, IntegralVsRationalSaturation) {
    auto a = build_weyl_so(2);
    auto z = invariant_basis(a, 4, Domain::integers());
    auto q = invariant_basis(a, 4, Domain::rationals());
    EXPECT_EQ(z.rank(), q.rank());
    EXPECT_TRUE(verify_invariance(a, z));
}

TEST(Subring, Membership) {
    auto sig = AlgebraSignature::uniform({"x", "y"}, 1, Domain::integers());
    auto s1 = parse_polynomial("x + y", sig), s2 = parse_polynomial("x*y", sig);
    EXPECT_TRUE(subring_membership(parse_polynomial("x^2 + y^2", sig), {s1, s2}).inside);
    EXPECT_FALSE(subring_membership(parse_polynomial("x^2", sig), {s1, s2}).inside);
    // x^2 + y^2 + x*y... over Z: (x+y)^2 - xy
    auto sq = parse_polynomial("2*x*y", sig);
    EXPECT_FALSE(subring_membership(parse_polynomial("x*y", sig), {sq}).inside);
    auto rq = sig->with_domain(Domain::rationals());
    EXPECT_TRUE(subring_membership(parse_polynomial("x*y", rq), {parse_polynomial("2*x*y", rq)}).inside);
}
