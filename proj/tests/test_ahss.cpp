#include "chowcheck/ahss.hpp"
#include "chowcheck/builtin.hpp"
#include "chowcheck/series.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace chowcheck;

namespace {

const Chart& spin7() {
    static const Chart c = spin7_chart();
    return c;
}

}  // namespace

TEST(Ahss, NoDifferentialsMeansE2) {
    Chart c = parse_chart("[chart]\np = 2\nwindow = 20\n[generators]\na 4\nb 6\n[classes]\na 4 0\nb 6 1\na^2 8 0\n");
    Ahss a(c, 1);
    for (int t = 0; t >= -6; t -= 2) {
        EXPECT_EQ(a.einf(4, t).free_rank, a.vmonomials(t).size());
        EXPECT_EQ(a.einf(6, t).torsion_dim, a.vmonomials(t).size());
    }
    // collapse equals the chart's own free ranks (torsion too, nothing acts)
    EXPECT_EQ(a.collapse(4).ranks.free_rank, 1u);
    EXPECT_EQ(a.collapse(8).ranks.free_rank, 1u);
    EXPECT_EQ(a.collapse(6).ranks.torsion_count(), 1u);
    EXPECT_EQ(a.collapse(5).ranks, GroupRanks{});
}

TEST(Ahss, ToyChart) {
    Ahss a(builtin_toy().chart, 1);
    // a is not a cycle, 2a is
    auto pa = a.permanent_cycle_check("a");
    EXPECT_FALSE(pa.cycle);
    EXPECT_TRUE(a.permanent_cycle_check("2*a").permanent());
    // b is hit from (6, 0) by d_3(a) = v1 b: killed at (9, -2), alive at (9, 0)
    EXPECT_EQ(a.einf(9, 0).torsion_dim, 1u);
    EXPECT_EQ(a.einf(9, -2).torsion_dim, 0u);
    EXPECT_FALSE(a.permanent_cycle_check("v1*b").nonzero);
    EXPECT_TRUE(a.permanent_cycle_check("b").permanent());
    auto c6 = a.collapse(6).ranks;
    EXPECT_EQ(c6.free_rank, 1u);
    EXPECT_EQ(c6.torsion_count(), 0u);
    auto c9 = a.collapse(9).ranks;
    EXPECT_EQ(c9.free_rank, 0u);
    EXPECT_EQ(c9.torsion_count(), 1u);
    EXPECT_EQ(c9.torsion.at(1), 1u);
}

TEST(Ahss, WindowErrorsAndTruncation) {
    EXPECT_THROW(Ahss(builtin_toy().chart, 4), std::invalid_argument);
    EXPECT_THROW(Ahss(builtin_toy().chart, 0), std::invalid_argument);
    Ahss a(builtin_toy().chart, 1);
    EXPECT_EQ(a.reliable_s(), 13);
    a.cycles(15, 0, 1);
    EXPECT_TRUE(a.truncated().count({15, 0}));
    EXPECT_FALSE(a.collapse(14).reliable);
    EXPECT_THROW(a.permanent_cycle_check("c"), std::invalid_argument);
    EXPECT_THROW(a.permanent_cycle_check("v2*a"), std::invalid_argument);
}

TEST(Ahss, Spin7PermanentCycles) {
    Ahss a(spin7(), 3);
    EXPECT_TRUE(a.permanent_cycle_check("2*w8").permanent());
    EXPECT_TRUE(a.permanent_cycle_check("v1*w8").permanent());
    auto e = a.permanent_cycle_check("w8");
    EXPECT_FALSE(e.permanent());
    EXPECT_FALSE(e.cycle);
}

TEST(Ahss, Spin7CollapseLowDegrees) {
    Ahss a(spin7(), 3);
    auto fr = expand_series("(1+t^4+t^8+t^12)/((1-t^8)(1-t^12)(1-t^16))", 20);
    auto tr = expand_series("(t^6+t^14-t^20)/((1-t^8)(1-t^12)(1-t^14)(1-t^16))", 20);
    for (int n = 0; n <= 20; ++n) {
        auto c = a.collapse(n);
        ASSERT_TRUE(c.reliable);
        EXPECT_EQ(BigInt(c.ranks.free_rank), fr[static_cast<std::size_t>(n)]) << n;
        EXPECT_EQ(BigInt(c.ranks.torsion_count()), tr[static_cast<std::size_t>(n)]) << n;
        for (const auto& [e, k] : c.ranks.torsion) EXPECT_EQ(e, 1u);
    }
}

TEST(AhssProperty, Monotonicity) {
    Ahss a(spin7(), 3);
    for (int s = 0; s <= 24; ++s)
        for (int t = 0; t >= -14; t -= 2) {
            std::size_t prev = SIZE_MAX;
            for (unsigned k = 0; k <= 3; ++k) {
                auto [w, b] = a.page_dims(s, t, k);
                ASSERT_GE(w, b);
                EXPECT_LE(w - b, prev) << s << "," << t << " page " << k;
                prev = w - b;
            }
        }
}

namespace {

struct RandomChart {
    Chart chart;
    unsigned qi;
};

// At most 6 classes, one generator per class, a single Q_i going from
// "source" classes to "sink" classes so that Q_i Q_i = 0.
RandomChart random_chart(std::mt19937& rng, unsigned p, bool torsion_only) {
    const unsigned qi = 1 + rng() % 2;
    const int shift = 2 * (qi == 1 ? static_cast<int>(p) : static_cast<int>(p * p)) - 1;
    const int n = 2 + static_cast<int>(rng() % 5);
    std::ostringstream gens, cls, modp, q;
    struct C {
        std::string name;
        int degree;
        int kind;  // 0 free, 1 torsion, 2 mod p
        bool sink;
    };
    std::vector<C> cs;
    for (int i = 0; i < n; ++i) {
        bool sink = rng() % 2;
        int degree = sink ? 2 + shift + static_cast<int>(rng() % 3) * 2 : 2 + static_cast<int>(rng() % 3) * 2;
        int kind = torsion_only ? 1 + static_cast<int>(rng() % 2) : static_cast<int>(rng() % 3);
        if (p != 2 && kind == 2 && degree % 2) kind = 1;
        std::string name = "g" + std::to_string(i);
        cs.push_back({name, degree, kind, sink});
        gens << name << ' ' << degree << (p != 2 && degree % 2 ? " exterior" : "") << '\n';
        if (kind == 2)
            modp << name << ' ' << degree << '\n';
        else
            cls << name << ' ' << degree << ' ' << kind << '\n';
    }
    for (const auto& s : cs) {
        if (s.sink) continue;
        std::string img;
        for (const auto& t : cs) {
            if (!t.sink || t.degree != s.degree + shift) continue;
            if (s.kind != 2 && t.kind != 1) continue;
            unsigned c = rng() % p;
            if (!c) continue;
            img += (img.empty() ? "" : " + ") + std::to_string(c) + "*" + t.name;
        }
        if (!img.empty()) q << s.name << " -> " << img << '\n';
    }
    std::string text = "[chart]\np = " + std::to_string(p) + "\nwindow = 40\n[generators]\n" + gens.str() + "[classes]\n" +
                       cls.str() + "[modp]\n" + modp.str() + "[q " + std::to_string(qi) + "]\n" + q.str();
    return {parse_chart(text), qi};
}

// E_infinity at (s, t) for a single differential x -> v_i Q_i(x), by hand.
// Per v-monomial m: the torsion cycles are ker Q_i on the torsion classes of
// degree s (v_i-multiplication is injective), and m carries boundaries
// Q_i(integral classes of degree s - shift) exactly when v_i divides m.
std::pair<std::size_t, std::size_t> two_column(const Chart& c, unsigned qi, int s, std::size_t nv, std::size_t divisible) {
    const int shift = c.shift(qi);
    auto deg = [&](int d) {
        std::vector<std::size_t> v;
        for (std::size_t k = 0; k < c.classes.size(); ++k)
            if (c.classes[k].degree == d && c.classes[k].integral()) v.push_back(k);
        return v;
    };
    std::size_t nfree = 0;
    std::vector<std::size_t> tors;
    for (auto k : deg(s)) {
        if (c.classes[k].kind == ClassKind::Free)
            ++nfree;
        else
            tors.push_back(k);
    }
    auto targets = deg(s + shift);
    std::size_t ker = tors.size();
    if (!tors.empty() && !targets.empty()) {
        FpMatrix m(c.p, targets.size(), tors.size());
        for (std::size_t j = 0; j < tors.size(); ++j)
            for (const auto& [u, coef] : c.q_image(qi, tors[j])) {
                auto it = std::find(targets.begin(), targets.end(), u);
                m.set(static_cast<std::size_t>(it - targets.begin()), j, coef);
            }
        ker = tors.size() - rank(m);
    }
    std::size_t im = 0;
    auto sources = deg(s - shift);
    if (!sources.empty() && !tors.empty()) {
        FpMatrix m(c.p, tors.size(), sources.size());
        for (std::size_t j = 0; j < sources.size(); ++j)
            for (const auto& [u, coef] : c.q_image(qi, sources[j])) {
                auto it = std::find(tors.begin(), tors.end(), u);
                m.set(static_cast<std::size_t>(it - tors.begin()), j, coef);
            }
        im = rank(m);
    }
    return {nfree * nv, ker * nv - im * divisible};
}

}  // namespace

TEST(AhssProperty, SingleQOracle) {
    std::mt19937 rng(20240607);
    for (int trial = 0; trial < 150; ++trial) {
        const unsigned p = trial % 3 == 2 ? 3 : 2;
        auto rc = random_chart(rng, p, false);
        Ahss a(rc.chart, rc.qi);
        for (int s = 0; s <= a.reliable_s(); ++s)
            for (int t = 0; t >= -3 * (rc.chart.shift(rc.qi) - 1); t -= 2) {
                auto e = a.einf(s, t);
                const auto& vm = a.vmonomials(t);
                std::size_t divisible = 0;
                for (const auto& m : vm) divisible += m[rc.qi - 1] > 0;
                auto want = two_column(rc.chart, rc.qi, s, vm.size(), divisible);
                ASSERT_EQ(e.free_rank, want.first) << serialize_chart(rc.chart) << s << "," << t;
                ASSERT_EQ(e.torsion_dim, want.second) << serialize_chart(rc.chart) << s << "," << t;
            }
    }
}

TEST(AhssProperty, EulerBookkeeping) {
    // torsion-only charts: each page is an F_p vector space, and the drop in
    // total-degree dimension equals the rank of the differential in plus out
    std::mt19937 rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        auto rc = random_chart(rng, 2, true);
        const unsigned vmax = 2;
        Ahss a(rc.chart, vmax);
        auto dims = [&](int n, unsigned k) {
            std::size_t e = 0, b = 0, bprev = 0;
            for (int s = std::max(n, 0); s <= 20; ++s) {
                auto [w, bb] = a.page_dims(s, n - s, k);
                e += w - bb;
                b += bb;
                if (k) bprev += a.page_dims(s, n - s, k - 1).second;
            }
            return std::make_tuple(e, b - bprev);
        };
        for (unsigned k = 1; k <= vmax; ++k)
            for (int n = -6; n <= 10; ++n) {
                auto [before, nb0] = dims(n, k - 1);
                auto [after, newb] = dims(n, k);
                auto [a1, newb_next] = dims(n + 1, k);
                (void)nb0;
                (void)a1;
                EXPECT_EQ(before - after, newb + newb_next) << serialize_chart(rc.chart) << "n=" << n << " k=" << k;
            }
    }
}
