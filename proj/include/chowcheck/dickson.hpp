#pragma once

// Dickson classes from the product of linear forms, and symbolic checks of
// the Q_i action on them.

#include "steenrod.hpp"

#include <string>
#include <vector>

namespace chowcheck {

struct DicksonContext {
    int h = 0;
    SignaturePtr signature;  // F_2[z, x1..xh], all degree 1
    Polynomial e;
    std::vector<Polynomial> d;  // d[i] has degree 2^h - 2^i; polynomials in the x's only
};

inline DicksonContext build_dickson(int h) {
    if (h < 1 || h > 4) throw std::invalid_argument("build_dickson: rank must be in 1..4");
    std::vector<std::string> names{"z"};
    for (int i = 1; i <= h; ++i) names.push_back("x" + std::to_string(i));
    DicksonContext ctx{h, AlgebraSignature::uniform(names, 1, Domain::fp(2)), {}, {}};
    const auto& sig = ctx.signature;
    Polynomial e = Polynomial::one(sig);
    for (unsigned mask = 0; mask < (1u << h); ++mask) {
        Polynomial form = Polynomial::generator(sig, 0);
        for (int i = 0; i < h; ++i)
            if (mask >> i & 1) form += Polynomial::generator(sig, static_cast<std::size_t>(i) + 1);
        e *= form;
    }
    ctx.e = e;
    ctx.d.assign(static_cast<std::size_t>(h), Polynomial::zero(sig));
    for (const auto& [m, c] : e.terms()) {
        const std::uint32_t k = m.exps[0];
        auto rest = m.exps;
        rest[0] = 0;
        if (k == (1u << h)) {
            if (!Monomial(rest, *sig).is_unit()) throw std::logic_error("build_dickson: unexpected top z-monomial");
            continue;
        }
        int i = 0;
        while (i < h && (1u << i) != k) ++i;
        if (i == h) throw std::logic_error("build_dickson: z^" + std::to_string(k) + " appears in e");
        ctx.d[static_cast<std::size_t>(i)] += Polynomial::monomial(sig, Monomial(rest, *sig), c);
    }
    return ctx;
}

struct IdentityCheck {
    std::string name;
    Polynomial lhs, rhs;
    bool holds = false;
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    bool all_hold() const {
        return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.holds; });
    }
};

namespace detail {
inline void add_check(IdentityReport& r, std::string name, Polynomial lhs, Polynomial rhs) {
    bool ok = lhs == rhs;
    r.checks.push_back({std::move(name), std::move(lhs), std::move(rhs), ok});
}
inline std::string dname(int i) { return "d" + std::to_string(i); }
}  // namespace detail

/// Q_{h-1} d_i = d_0 d_i ; Q_{j-1} d_j = d_0 (1 <= j <= h-1) ; Q_i d_j = 0 for
/// i < vanishing_bound, i != j-1.  The bound defaults to h-1; passing a larger
/// value tests the alternative reading of the range.
inline IdentityReport verify_lemma_qd(const DicksonContext& ctx, int vanishing_bound = -1) {
    const int h = ctx.h;
    if (vanishing_bound < 0) vanishing_bound = h - 1;
    IdentityReport r;
    const auto zero = Polynomial::zero(ctx.signature);
    const auto& d = ctx.d;
    for (int i = 0; i < h; ++i)
        detail::add_check(r, "Q" + std::to_string(h - 1) + "(" + detail::dname(i) + ") = d0*" + detail::dname(i),
                          milnor_q_closed(static_cast<unsigned>(h - 1), d[i]), d[0] * d[i]);
    for (int j = 1; j < h; ++j)
        detail::add_check(r, "Q" + std::to_string(j - 1) + "(" + detail::dname(j) + ") = d0",
                          milnor_q_closed(static_cast<unsigned>(j - 1), d[j]), d[0]);
    for (int i = 0; i < vanishing_bound; ++i)
        for (int j = 0; j < h; ++j) {
            if (i == j - 1) continue;
            detail::add_check(r, "Q" + std::to_string(i) + "(" + detail::dname(j) + ") = 0",
                              milnor_q_closed(static_cast<unsigned>(i), d[j]), zero);
        }
    return r;
}

/// Q_{h-1} e = d_0 e and Q_k e = 0 for 0 <= k <= h-2.
inline IdentityReport verify_lemma_qe(const DicksonContext& ctx) {
    IdentityReport r;
    const int h = ctx.h;
    detail::add_check(r, "Q" + std::to_string(h - 1) + "(e) = d0*e", milnor_q_closed(static_cast<unsigned>(h - 1), ctx.e),
                      ctx.d[0] * ctx.e);
    for (int k = 0; k + 2 <= h; ++k)
        detail::add_check(r, "Q" + std::to_string(k) + "(e) = 0", milnor_q_closed(static_cast<unsigned>(k), ctx.e),
                          Polynomial::zero(ctx.signature));
    return r;
}

}  // namespace chowcheck
