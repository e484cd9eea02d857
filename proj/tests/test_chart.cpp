#include "chowcheck/builtin.hpp"
#include "chowcheck/series.hpp"

#include <gtest/gtest.h>

using namespace chowcheck;

namespace {

std::vector<BigInt> ints(std::initializer_list<int> xs) {
    std::vector<BigInt> v;
    for (int x : xs) v.emplace_back(x);
    return v;
}

const char* kSmall = R"([chart]
name = small
p = 2
window = 20
# comment line
[generators]
a 4
b 7

[classes]
a 4 0
b 7 1
a^2 8 0

[modp]
a*b 11

[q 1]
a -> b
)";

}  // namespace

TEST(Series, GeometricExpansion) {
    EXPECT_EQ(expand_series("1/(1-t^4)", 12), ints({1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1}));
}

TEST(Series, ThreeFactorProduct) {
    auto c = expand_series("1/((1-t^4)(1-t^8)(1-t^12))", 16);
    EXPECT_EQ(c[0], 1);
    EXPECT_EQ(c[4], 1);
    EXPECT_EQ(c[8], 2);
    EXPECT_EQ(c[12], 3);
    EXPECT_EQ(c[16], 4);
    EXPECT_EQ(c[2], 0);
}

TEST(Series, TwoSidedIdentity) {
    EXPECT_EQ(expand_series("(1+t^4)(1+t^8)/((1-t^8)(1-t^12)(1-t^16))", 40),
              expand_series("1/((1-t^4)(1-t^8)(1-t^12))", 40));
}

TEST(Series, UnicodeMinusAndErrors) {
    EXPECT_EQ(expand_series("1/(1\xE2\x88\x92t^2)", 4), ints({1, 0, 1, 0, 1}));
    EXPECT_THROW(expand_series("1/(2-t)", 3), std::invalid_argument);
    EXPECT_THROW(expand_series("1/(1-t)", -1), std::invalid_argument);
    EXPECT_THROW(parse_series("1/(1-s)"), ParseError);
}

TEST(Series, NonNegativeForBuiltins) {
    for (const auto& id : {"spin7", "f4"}) {
        // expressions only; the charts themselves are not needed here
        std::vector<std::string> exprs;
        if (std::string(id) == "spin7")
            exprs = {"(1+t^4+t^8+t^12)/((1-t^8)(1-t^12)(1-t^16))", "(t^6+t^14-t^20)/((1-t^8)(1-t^12)(1-t^14)(1-t^16))"};
        else
            exprs = {"((1+t^20+t^40)-(t^8+t^20)(1-t^4)(1-t^8))/((1-t^4)(1-t^8)(1-t^36)(1-t^48))"};
        for (const auto& e : exprs)
            for (const auto& c : expand_series(e, 120)) EXPECT_GE(c, 0) << e;
    }
}

TEST(Chart, ParsesSmallChart) {
    Chart c = parse_chart(kSmall);
    EXPECT_EQ(c.name, "small");
    EXPECT_EQ(c.p, 2u);
    ASSERT_EQ(c.classes.size(), 4u);
    EXPECT_EQ(c.classes[c.find("b")].kind, ClassKind::Torsion);
    EXPECT_EQ(c.classes[c.find("a*b")].kind, ClassKind::ModP);
    EXPECT_EQ(c.q_polynomial(1, c.find("a")).to_string(), "b");
    EXPECT_THROW(c.find("zz"), std::invalid_argument);
}

TEST(Chart, RoundTrip) {
    Chart c = parse_chart(kSmall);
    EXPECT_EQ(parse_chart(serialize_chart(c)), c);
}

TEST(Chart, MissingTargetDegreeFailsValidation) {
    // Q_1 must raise degree by 3; a -> a^2 raises it by 4
    std::string bad = R"([chart]
p = 2
window = 20
[generators]
a 4
b 7
[classes]
a 4 0
b 7 1
a^2 8 0
[q 1]
a -> a^2
)";
    try {
        parse_chart(bad);
        FAIL() << "expected a validation error";
    } catch (const ChartError& e) {
        EXPECT_NE(std::string(e.what()).find("a^2"), std::string::npos) << e.what();
    }
}

TEST(Chart, ErrorsCarryLineNumbers) {
    try {
        parse_chart("[chart]\np = 2\nwindow = 9\n[generators]\na 4\n[classes]\na 5 0\n");
        FAIL();
    } catch (const ChartError& e) {
        EXPECT_EQ(e.line(), 7u);
    }
    try {
        parse_chart("[chart]\np = 2\nwindow = 9\n[generators]\na 4\n[classes]\na 4 0\n[q 0]\na -> a +* a\n");
        FAIL();
    } catch (const ChartError& e) {
        EXPECT_EQ(e.line(), 9u);
        EXPECT_GT(e.column(), 0u);
    }
    EXPECT_THROW(parse_chart("[bogus]\n"), ChartError);
    EXPECT_THROW(parse_chart("[chart]\np = 2\n"), ChartError);
    EXPECT_THROW(parse_chart("[chart]\np = 2\nwindow = 9\n[generators]\na 4\n[classes]\na 4 3\n"), ChartError);
}

TEST(Chart, RejectsNonCanonicalNamesAndQSquares) {
    EXPECT_THROW(parse_chart("[chart]\np = 2\nwindow = 20\n[generators]\na 4\nb 2\n[classes]\nb*a 6 0\n"), ChartError);
    // Q_0 of an integral class must vanish
    EXPECT_THROW(parse_chart("[chart]\np = 2\nwindow = 9\n[generators]\na 4\nb 5\n[classes]\na 4 0\nb 5 1\n[q 0]\na -> b\n"),
                 ChartError);
    // Q_0 Q_0 != 0
    EXPECT_THROW(parse_chart("[chart]\np = 2\nwindow = 9\n[generators]\na 3\nb 4\nc 5\n[modp]\na 3\nb 4\nc 5\n[q 0]\na -> b\nb -> c\n"),
                 ChartError);
}

TEST(Builtin, ChartsRoundTrip) {
    for (const auto& id : builtin_ids()) {
        auto b = builtin_chart(id);
        EXPECT_EQ(parse_chart(serialize_chart(b.chart)), b.chart) << id;
    }
}

TEST(Builtin, Spin7QDataIsDerived) {
    const Chart c = spin7_chart(32);
    auto q = [&](unsigned i, const char* cls) { return c.q_polynomial(i, c.find(cls)).to_string(); };
    EXPECT_EQ(q(0, "w6"), "w7");
    EXPECT_EQ(q(0, "w4"), "0");
    EXPECT_EQ(q(1, "w4"), "w7");
    EXPECT_EQ(q(1, "w7"), "0");
    EXPECT_EQ(q(2, "w4"), "w4*w7");
    EXPECT_EQ(q(2, "w8"), "w7*w8");
    EXPECT_EQ(q(2, "w7"), "w7^2");
}

TEST(Builtin, F4Actions) {
    const Chart c = f4_chart(56);
    auto q = [&](unsigned i, const char* cls) { return c.q_polynomial(i, c.find(cls)).to_string(); };
    EXPECT_EQ(q(0, "x8"), "x9");
    EXPECT_EQ(q(0, "x20"), "x21");
    EXPECT_EQ(q(0, "x25"), "x26");
    EXPECT_EQ(q(1, "x4"), "x9");
    EXPECT_EQ(q(1, "x20"), "x25");
    EXPECT_EQ(q(1, "x21"), "x26");
    EXPECT_EQ(q(2, "x4"), "2*x21");
    EXPECT_EQ(q(2, "x9"), "x26");
}

TEST(Builtin, Q0Homology) {
    const Chart s = spin7_chart(24);
    auto h = chart_q0_homology(s, 0, 20);
    auto want = expand_series("(1+t^4)(1+t^8)/((1-t^8)(1-t^12)(1-t^16))", 20);
    for (int d = 0; d <= 20; ++d) EXPECT_EQ(BigInt(h[d]), want[d]) << d;
    // trivial Q_0: homology = all classes
    Chart t = parse_chart(kSmall);
    auto ht = chart_q0_homology(t, 0, 12);
    EXPECT_EQ(ht[4], 1u);
    EXPECT_EQ(ht[11], 1u);
}
