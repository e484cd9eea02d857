#include <chowcheck/linalg.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace chowcheck;

namespace {

ZRows mul(const ZRows& a, const ZRows& b) {
    ZRows c(a.size(), ZVec(b.front().size(), BigInt(0)));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b.front().size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

}  // namespace

TEST(Fp, RankAndKernel) {
    auto m = FpMatrix::from_rows(3, 3, {{1, 2, 0}, {2, 1, 0}, {0, 0, 1}});
    EXPECT_EQ(rank(m), 2u);  // row2 = 2*row1 mod 3
    auto ker = kernel(m);
    ASSERT_EQ(ker.size(), 1u);
    EXPECT_EQ((ker[0][0] + 2 * ker[0][1]) % 3, 0);
    EXPECT_EQ(ker[0][2], 0);
}

TEST(Q, SolveInSpan) {
    QRows basis{{1, 1, 0}, {0, 1, 1}};
    auto c = solve_in_span(basis, {2, 5, 3});
    ASSERT_TRUE(c);
    EXPECT_EQ((*c)[0], 2);
    EXPECT_EQ((*c)[1], 3);
    EXPECT_FALSE(solve_in_span(basis, {1, 0, 0}));
}

TEST(Z, HermiteAndSaturatedKernel) {
    // kernel of [2 4] over Z is spanned by (-2, 1), not (-4, 2)
    auto ker = integer_kernel({{2, 4}}, 2);
    ASSERT_EQ(ker.size(), 1u);
    EXPECT_EQ(ker[0][0] * ker[0][0], 4);
    EXPECT_EQ(ker[0][1] * ker[0][1], 1);
    auto h = hermite_rows({{2, 0}, {0, 2}, {1, 1}});
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h[0][0] * h[1][1], 2);  // index of the lattice
}

TEST(Membership, ScalingWitness) {
    SubmoduleBasis s = span(Domain::integers(), 2, {{2, 0}, {0, 4}});
    EXPECT_EQ(membership({2, 4}, s, 2).verdict, Membership::Inside);
    auto r = membership({1, 1}, s, 2);
    EXPECT_EQ(r.verdict, Membership::InsideAfterScaling);
    EXPECT_EQ(r.k, 2u);
    EXPECT_EQ(membership({1, 1}, s).verdict, Membership::Outside);
    SubmoduleBasis t = span(Domain::integers(), 2, {{3, 0}});
    EXPECT_EQ(membership({1, 0}, t, 2).verdict, Membership::Outside);
    EXPECT_EQ(membership({0, 1}, t, 2).verdict, Membership::Outside);
    SubmoduleBasis l = span(Domain::local(2), 2, {{3, 0}});
    EXPECT_EQ(membership({1, 0}, l).verdict, Membership::Inside);
}

TEST(Smith, LocalValuations) {
    // diag(2, 12, 0) at p = 2 -> valuations 1, 2 ; at p = 3 -> 0, 1
    ZRows m{{2, 0, 0}, {0, 12, 0}, {0, 0, 0}};
    auto s2 = local_smith(m, 3, 2), s3 = local_smith(m, 3, 3);
    EXPECT_EQ(s2.valuations, (std::vector<unsigned>{1, 2}));
    EXPECT_EQ(s3.valuations, (std::vector<unsigned>{0, 1}));
    ExactMatrix e = ExactMatrix::from_rows(Domain::integers(), {{2, 0}, {0, 12}, {2, 12}});
    auto rep = rank_per_domain(e, 2);
    EXPECT_EQ(rep.rank_q, 2u);
    EXPECT_EQ(rep.rank_fp, 0u);
}

TEST(Property, SmithInvariantUnderUnimodularChange) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int trial = 0; trial < 40; ++trial) {
        ZRows m(4, ZVec(4));
        for (auto& r : m)
            for (auto& x : r) x = d(rng) * (trial % 3 == 0 ? 2 : 1);
        // random elementary operations on both sides
        ZRows u(4, ZVec(4, BigInt(0))), v(4, ZVec(4, BigInt(0)));
        for (int i = 0; i < 4; ++i) u[i][i] = v[i][i] = 1;
        u[0][2] = d(rng);
        u[3][1] = d(rng);
        v[1][0] = d(rng);
        v[2][3] = d(rng);
        ZRows m2 = mul(mul(u, m), v);
        for (unsigned p : {2u, 3u})
            EXPECT_EQ(local_smith(m, 4, p).valuations, local_smith(m2, 4, p).valuations);
        QRows q2;
        for (const auto& r : m2) q2.emplace_back(r.begin(), r.end());
        EXPECT_EQ(rank(q2, 4), local_smith(m2, 4, 5).rank);
    }
}

TEST(Property, IntegerKernelIsSaturated) {
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int trial = 0; trial < 30; ++trial) {
        ZRows m(2, ZVec(4));
        for (auto& r : m)
            for (auto& x : r) x = d(rng) * 2;
        auto ker = integer_kernel(m, 4);
        QRows q;
        for (const auto& r : m) q.emplace_back(r.begin(), r.end());
        EXPECT_EQ(ker.size(), 4 - rank(q, 4));
        for (const auto& k : ker)
            for (const auto& r : m) {
                BigInt s = 0;
                for (int j = 0; j < 4; ++j) s += r[j] * k[j];
                EXPECT_EQ(s, 0);
            }
        // saturation: the kernel lattice has no 2-divisible primitive combinations
        if (!ker.empty()) {
            ZRows kr = ker;
            auto ls = local_smith(kr, 4, 2);
            for (auto v : ls.valuations) EXPECT_EQ(v, 0u);
        }
    }
}
