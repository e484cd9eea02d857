#pragma once

// Built-in charts: a toy chart, Spin(7) at p = 2, F_4 at p = 3, together with
// the expected series they are checked against.

#include "chart.hpp"
#include "dickson.hpp"
#include "group.hpp"

#include <string>
#include <vector>

namespace chowcheck {

struct ExpectedSeries {
    std::string id;
    std::string expr;
    std::string provenance;
};

struct BuiltinChart {
    std::string id;
    Chart chart;
    unsigned vmax = 1;
    std::vector<ExpectedSeries> expected;
};

inline const char* toy_chart_text() {
    return R"([chart]
name = toy
p = 2
window = 16

[generators]
a 6
b 9

[classes]
a 6 0
b 9 1

[q 1]
a -> b
)";
}

/// Q_i on the generators w4, w6, w7, w8 of Z/2[w4,w6,w7,w8], obtained by
/// restricting to F_2[z, x1, x2, x3] (w4, w6, w7 -> Dickson classes d2, d1, d0;
/// w8 -> e), applying Q_i(x) = x^{2^{i+1}} there and pulling the answer back.
inline std::map<std::string, Polynomial> spin7_q_images(unsigned i, const SignaturePtr& sig) {
    static const DicksonContext ctx = build_dickson(3);
    const std::vector<std::string> names{"w4", "w6", "w7", "w8"};
    const std::vector<Polynomial> images{ctx.d[2], ctx.d[1], ctx.d[0], ctx.e};
    std::map<std::string, Polynomial> out;
    for (std::size_t g = 0; g < names.size(); ++g) {
        Polynomial qi = milnor_q_closed(i, images[g]);
        auto dec = subring_membership(qi, images);
        if (!dec.inside)
            throw std::logic_error("Q" + std::to_string(i) + "(" + names[g] + ") is not in the image of Z/2[w4,w6,w7,w8]");
        Polynomial f = Polynomial::zero(sig);
        for (std::size_t k = 0; k < dec.exponents.size(); ++k) {
            Scalar c(sig->domain(), dec.witness[k]);
            if (c.is_zero()) continue;
            f += Polynomial::monomial(sig, Monomial(dec.exponents[k], *sig), c);
        }
        // pull back, push forward again: the witness must reproduce Q_i exactly
        if (substitute(f, std::vector<std::optional<Polynomial>>(images.begin(), images.end()), ctx.signature) != qi)
            throw std::logic_error("spin7: pulled-back Q" + std::to_string(i) + "(" + names[g] + ") does not restrict back");
        out.emplace(names[g], f);
    }
    return out;
}

inline Chart spin7_chart(int window = 60, unsigned qmax = 3) {
    Chart c;
    c.name = "spin7";
    c.p = 2;
    c.window = window;
    c.generators = AlgebraSignature::make({{"w4", 4, false}, {"w6", 6, false}, {"w7", 7, false}, {"w8", 8, false}}, Domain::fp(2));
    const auto& sig = c.generators;
    for (int d = 0; d <= window; ++d)
        for (std::uint32_t a = 0; 4 * a <= static_cast<std::uint32_t>(d); ++a)
            for (std::uint32_t b = 0; 4 * a + 6 * b <= static_cast<std::uint32_t>(d); ++b)
                for (std::uint32_t k = 0; 4 * a + 6 * b + 7 * k <= static_cast<std::uint32_t>(d); ++k) {
                    int rest = d - static_cast<int>(4 * a + 6 * b + 7 * k);
                    if (rest % 8) continue;
                    Monomial m({a, b, k, static_cast<std::uint32_t>(rest / 8)}, *sig);
                    ClassKind kind = b % 2 ? ClassKind::ModP : k ? ClassKind::Torsion : ClassKind::Free;
                    c.add_class(m, kind);
                }
    for (unsigned i = 0; i <= qmax; ++i) {
        auto spec = DerivationSpec::make(sig, c.shift(i), spin7_q_images(i, sig));
        for (std::size_t k = 0; k < c.classes.size(); ++k) {
            if (c.classes[k].degree + c.shift(i) > window) continue;
            c.set_q(i, k, apply_derivation(spec, c.class_polynomial(k)));
        }
    }
    validate(c);
    return c;
}

/// Linear model of H^*(BF_4; Z_(3)) and its mod-3 reduction: a module over
/// D = Z_(3)[x36, x48] on
///   x4^a x8^b x20^e (e <= 2), integral except x8 and x20;
///   x26^k {1 (k >= 1), x21, x9, x9 x21}, 3-torsion;
///   x26^k {x20 (k >= 1), x25, x9 x20, x9 x25}, mod-3 only.
/// Q-actions are D-linear and only the listed ones are recorded.
inline Chart f4_chart(int window = 84) {
    Chart c;
    c.name = "f4";
    c.p = 3;
    c.window = window;
    c.generators = AlgebraSignature::make({{"x4", 4, false},
                                           {"x8", 8, false},
                                           {"x9", 9, true},
                                           {"x20", 20, false},
                                           {"x21", 21, true},
                                           {"x25", 25, true},
                                           {"x26", 26, false},
                                           {"x36", 36, false},
                                           {"x48", 48, false}},
                                          Domain::fp(3));
    const auto& sig = c.generators;
    enum { X4, X8, X9, X20, X21, X25, X26, X36, X48 };
    auto mono = [&](std::initializer_list<std::pair<int, std::uint32_t>> es) {
        std::vector<std::uint32_t> e(sig->size(), 0);
        for (auto [g, k] : es) e[static_cast<std::size_t>(g)] = k;
        return Monomial(e, *sig);
    };
    auto poly = [&](const Monomial& m, std::int64_t coef = 1) { return Polynomial::monomial(sig, m, Scalar(sig->domain(), coef)); };

    struct Part {
        Monomial m;
        ClassKind kind;
    };
    std::vector<Part> parts;
    for (std::uint32_t e = 0; e <= 2; ++e)
        for (std::uint32_t b = 0; 20 * e + 8 * b <= static_cast<std::uint32_t>(window); ++b)
            for (std::uint32_t a = 0; 20 * e + 8 * b + 4 * a <= static_cast<std::uint32_t>(window); ++a) {
                bool modp = (a == 0 && b == 1 && e == 0) || (a == 0 && b == 0 && e == 1);
                parts.push_back({mono({{X4, a}, {X8, b}, {X20, e}}), modp ? ClassKind::ModP : ClassKind::Free});
            }
    for (std::uint32_t k = 0; 26 * k <= static_cast<std::uint32_t>(window); ++k) {
        auto T = ClassKind::Torsion, M = ClassKind::ModP;
        if (k >= 1) parts.push_back({mono({{X26, k}}), T});
        parts.push_back({mono({{X26, k}, {X21, 1}}), T});
        parts.push_back({mono({{X26, k}, {X9, 1}}), T});
        parts.push_back({mono({{X26, k}, {X9, 1}, {X21, 1}}), T});
        if (k >= 1) parts.push_back({mono({{X26, k}, {X20, 1}}), M});
        parts.push_back({mono({{X26, k}, {X25, 1}}), M});
        parts.push_back({mono({{X26, k}, {X9, 1}, {X20, 1}}), M});
        parts.push_back({mono({{X26, k}, {X9, 1}, {X25, 1}}), M});
    }
    std::vector<Monomial> dmon;
    for (std::uint32_t a = 0; 36 * a <= static_cast<std::uint32_t>(window); ++a)
        for (std::uint32_t b = 0; 36 * a + 48 * b <= static_cast<std::uint32_t>(window); ++b) dmon.push_back(mono({{X36, a}, {X48, b}}));

    // Q-action on the parts (before multiplying by D)
    std::map<unsigned, std::vector<std::pair<Monomial, Polynomial>>> rules;
    auto rule = [&](unsigned i, const Monomial& s, const Polynomial& t) { rules[i].emplace_back(s, t); };
    rule(0, mono({{X8, 1}}), poly(mono({{X9, 1}})));
    rule(1, mono({{X4, 1}}), poly(mono({{X9, 1}})));
    rule(2, mono({{X4, 1}}), poly(mono({{X21, 1}}), -1));
    for (std::uint32_t k = 0; 26 * k <= static_cast<std::uint32_t>(window); ++k) {
        rule(0, mono({{X26, k}, {X20, 1}}), poly(mono({{X26, k}, {X21, 1}})));
        rule(0, mono({{X26, k}, {X25, 1}}), poly(mono({{X26, k + 1}})));
        rule(0, mono({{X26, k}, {X9, 1}, {X20, 1}}), poly(mono({{X26, k}, {X9, 1}, {X21, 1}}), -1));
        rule(0, mono({{X26, k}, {X9, 1}, {X25, 1}}), poly(mono({{X26, k + 1}, {X9, 1}}), -1));
        rule(1, mono({{X26, k}, {X21, 1}}), poly(mono({{X26, k + 1}})));
        rule(1, mono({{X26, k}, {X9, 1}, {X21, 1}}), poly(mono({{X26, k + 1}, {X9, 1}}), -1));
        rule(1, mono({{X26, k}, {X20, 1}}), poly(mono({{X26, k}, {X25, 1}})));
        rule(1, mono({{X26, k}, {X9, 1}, {X20, 1}}), poly(mono({{X26, k}, {X9, 1}, {X25, 1}}), -1));
        rule(2, mono({{X26, k}, {X9, 1}}), poly(mono({{X26, k + 1}})));
        rule(2, mono({{X26, k}, {X9, 1}, {X21, 1}}), poly(mono({{X26, k + 1}, {X21, 1}})));
    }

    for (const auto& d : dmon)
        for (const auto& pt : parts) {
            Monomial m = multiply_monomials(d, pt.m, *sig)->first;
            if (m.degree <= window) c.add_class(m, pt.kind);
        }
    for (const auto& [i, list] : rules)
        for (const auto& [s, t] : list)
            for (const auto& d : dmon) {
                Monomial m = multiply_monomials(d, s, *sig)->first;
                if (m.degree + c.shift(i) > window) continue;
                c.set_q(i, c.find(monomial_to_string(m, *sig)), poly(d) * t);
            }
    validate(c);
    return c;
}

inline BuiltinChart builtin_toy() {
    return {"toy", parse_chart(toy_chart_text()), 1, {}};
}

inline BuiltinChart builtin_spin7() {
    BuiltinChart b{"spin7", spin7_chart(), 3, {}};
    const std::string den = "((1-t^8)(1-t^12)(1-t^16))";
    b.expected = {
        {"collapse.free", "(1+t^4+t^8+t^12)/" + den, "Spin(7): D{1,2w4,2w8,2w4w8}, D = Z_(2)[c4,c6,c8]"},
        {"collapse.torsion", "(t^6+t^14-t^20)/((1-t^8)(1-t^12)(1-t^14)(1-t^16))",
         "Spin(7): D{v1 w8}/(2 v1 w8) plus Z/2[c4,c6,c7,c8]{c7}"},
        {"q0_homology", "(1+t^4)(1+t^8)/" + den, "Spin(7): Z/2[w4,w6^2,w8]"},
        {"invariants", "1/((1-t^4)(1-t^8)(1-t^12))", "Spin(7): Z_(2)[w4,w8,c6]"},
    };
    return b;
}

inline BuiltinChart builtin_f4() {
    BuiltinChart b{"f4", f4_chart(), 2, {}};
    const std::string den = "((1-t^4)(1-t^8)(1-t^36)(1-t^48))";
    b.expected = {
        {"collapse.free", "((1+t^20+t^40)-(t^8+t^20)(1-t^4)(1-t^8))/" + den, "F4, p=3: D{1,3x4} + D E, D = Z_(3)[x36,x48]"},
        {"collapse.torsion", "t^26/((1-t^26)(1-t^36)(1-t^48))", "F4, p=3: Z/3[x26,x36,x48]{x26}"},
        {"q0_homology", "((1+t^20+t^40)-(t^8+t^20)(1-t^4)(1-t^8))/" + den, "F4, p=3: C'/Tor tensor D"},
        {"invariants.mod3", "(1+t^20+t^40)/" + den, "F4, p=3: D tensor F{1,x20,x20^2}"},
    };
    return b;
}

inline std::vector<std::string> builtin_ids() { return {"toy", "spin7", "f4"}; }

inline BuiltinChart builtin_chart(const std::string& id) {
    if (id == "toy") return builtin_toy();
    if (id == "spin7") return builtin_spin7();
    if (id == "f4") return builtin_f4();
    throw std::invalid_argument("unknown builtin chart '" + id + "'");
}

/// Q_0-homology of the chart's mod-p basis, degree by degree.
inline std::map<int, std::size_t> chart_q0_homology(const Chart& c, int lo, int hi) {
    GradedComplex cx;
    cx.p = c.p;
    cx.shift = 1;
    std::map<int, std::map<std::size_t, std::size_t>> pos;
    for (std::size_t k = 0; k < c.classes.size(); ++k) {
        int d = c.classes[k].degree;
        pos[d][k] = cx.dims[d]++;
    }
    for (int d = 0; d + 1 <= c.window; ++d) {
        if (!cx.dim(d) || !cx.dim(d + 1)) continue;
        FpMatrix m(c.p, cx.dim(d + 1), cx.dim(d));
        for (const auto& [k, j] : pos[d])
            for (const auto& [t, coef] : c.q_image(0, k)) m.set(pos[d + 1].at(t), j, coef);
        cx.maps.emplace(d, std::move(m));
    }
    if (hi >= c.window) throw std::invalid_argument("chart_q0_homology: degree " + std::to_string(hi) + " needs a larger window");
    return differential_homology(cx, lo, hi);
}

}  // namespace chowcheck
