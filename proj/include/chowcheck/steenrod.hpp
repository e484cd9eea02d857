#pragma once

// Milnor primitives as odd derivations, Steenrod squares on F_2 algebras with
// degree-1 generators, and homology of a differential given by matrices.

#include "linalg.hpp"
#include "polynomial.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chowcheck {

struct DerivationSpec {
    SignaturePtr signature;
    int shift = 1;
    std::vector<std::optional<Polynomial>> images;  // per generator; nullopt = unknown

    static DerivationSpec make(SignaturePtr sig, int shift, const std::map<std::string, Polynomial>& imgs) {
        DerivationSpec d{sig, shift, std::vector<std::optional<Polynomial>>(sig->size())};
        for (const auto& [name, img] : imgs) d.images.at(sig->index(name)) = img;
        d.validate();
        return d;
    }

    void validate() const {
        if (shift % 2 == 0) throw std::invalid_argument("derivation shift must be odd");
        if (signature->domain().kind != DomainKind::Fp) throw std::invalid_argument("derivations act over F_p");
        if (images.size() != signature->size()) throw std::invalid_argument("derivation image list length mismatch");
        for (std::size_t i = 0; i < images.size(); ++i) {
            const auto& g = signature->generator(i);
            if (signature->domain().p != 2 && !g.exterior && g.degree % 2)
                throw std::invalid_argument("odd-degree polynomial generator " + g.name + " at odd p");
            if (!images[i] || images[i]->is_zero()) continue;
            if (!same_signature(images[i]->signature(), signature))
                throw std::invalid_argument("image of " + g.name + " in wrong signature");
            if (!images[i]->is_homogeneous() || images[i]->degree() != g.degree + shift)
                throw std::invalid_argument("image of " + g.name + " has wrong degree");
        }
    }
};

/// Unique derivation extending the generator images, with
/// D(ab) = D(a) b + (-1)^{|a|} a D(b).
inline Polynomial apply_derivation(const DerivationSpec& spec, const Polynomial& f) {
    const auto& sig = spec.signature;
    if (!same_signature(f.signature(), sig)) throw std::invalid_argument("apply_derivation: signature mismatch");
    const Domain dom = sig->domain();
    const bool signs = dom.p != 2;
    Polynomial out = Polynomial::zero(sig);
    for (const auto& [m, c] : f.terms()) {
        int prefix_degree = 0;
        for (std::size_t j = 0; j < m.exps.size(); ++j) {
            const auto e = m.exps[j];
            if (!e) continue;
            const auto& g = sig->generator(j);
            if (!spec.images[j]) throw std::invalid_argument("derivation has no image for " + g.name);
            const Polynomial& dg = *spec.images[j];
            // m = prefix * g^e * suffix
            std::vector<std::uint32_t> pre(m.exps.size(), 0), mid(m.exps.size(), 0), suf(m.exps.size(), 0);
            for (std::size_t k = 0; k < j; ++k) pre[k] = m.exps[k];
            mid[j] = e - 1;
            for (std::size_t k = j + 1; k < m.exps.size(); ++k) suf[k] = m.exps[k];
            Scalar coef = c * Scalar(dom, static_cast<std::int64_t>(e));
            if (signs && prefix_degree % 2) coef = -coef;
            if (!coef.is_zero() && !dg.is_zero()) {
                Polynomial term = Polynomial::monomial(sig, Monomial(pre, *sig), coef) *
                                  Polynomial::monomial(sig, Monomial(mid, *sig), Scalar(dom, 1)) * dg *
                                  Polynomial::monomial(sig, Monomial(suf, *sig), Scalar(dom, 1));
                out += term;
            }
            prefix_degree += static_cast<int>(e) * g.degree;
        }
    }
    return out;
}

namespace detail {
inline void require_f2_degree_one(const AlgebraSignature& sig, const char* who) {
    if (sig.domain() != Domain::fp(2)) throw std::invalid_argument(std::string(who) + ": domain must be F_2");
    for (const auto& g : sig.generators())
        if (g.degree != 1 || g.exterior)
            throw std::invalid_argument(std::string(who) + ": generator " + g.name + " is not a degree-1 class");
}
}  // namespace detail

/// Q_i on F_2[x_1..x_n], |x_j| = 1, via Q_i(x) = x^{2^{i+1}}.
inline Polynomial milnor_q_closed(unsigned i, const Polynomial& f) {
    const auto& sig = f.signature();
    detail::require_f2_degree_one(*sig, "milnor_q_closed");
    if (i > 20) throw std::invalid_argument("milnor_q_closed: index too large");
    DerivationSpec spec{sig, (1 << (i + 1)) - 1, {}};
    for (std::size_t j = 0; j < sig->size(); ++j)
        spec.images.emplace_back(Polynomial::generator(sig, j).pow(1u << (i + 1)));
    return apply_derivation(spec, f);
}

/// Total square of f: multiplicative extension of x -> x + x^2.  Entry k of the
/// result is Sq^k f.
inline std::vector<Polynomial> total_sq(const Polynomial& f) {
    const auto& sig = f.signature();
    detail::require_f2_degree_one(*sig, "total_sq");
    std::vector<std::vector<Polynomial>> powers(sig->size());
    auto power = [&](std::size_t j, std::uint32_t e) -> const Polynomial& {
        auto& pw = powers[j];
        if (pw.empty()) pw.push_back(Polynomial::one(sig));
        Polynomial x = Polynomial::generator(sig, j);
        while (pw.size() <= e) pw.push_back(pw.back() * (x + x * x));
        return pw[e];
    };
    int top = 0;
    for (const auto& t : f.terms()) top = std::max(top, t.first.degree);
    std::vector<Polynomial> out(static_cast<std::size_t>(top) + 1, Polynomial::zero(sig));
    for (const auto& [m, c] : f.terms()) {
        Polynomial img = Polynomial::constant(sig, c);
        for (std::size_t j = 0; j < m.exps.size(); ++j)
            if (m.exps[j]) img *= power(j, m.exps[j]);
        for (const auto& [mm, cc] : img.terms())
            out[static_cast<std::size_t>(mm.degree - m.degree)] += Polynomial::monomial(sig, mm, cc);
    }
    return out;
}

inline Polynomial sq(unsigned k, const Polynomial& f) {
    auto t = total_sq(f);
    return k < t.size() ? t[k] : Polynomial::zero(f.signature());
}

/// Q_{i+1} = Sq^{2^{i+1}} Q_i + Q_i Sq^{2^{i+1}}, Q_0 = Sq^1, evaluated literally.
inline Polynomial milnor_q_recursive(unsigned i, const Polynomial& f) {
    if (i > 2) throw std::invalid_argument("milnor_q_recursive: index must be <= 2");
    detail::require_f2_degree_one(*f.signature(), "milnor_q_recursive");
    if (i == 0) return sq(1, f);
    const unsigned k = 1u << i;
    return sq(k, milnor_q_recursive(i - 1, f)) + milnor_q_recursive(i - 1, sq(k, f));
}

// ---------------------------------------------------------------------------
// Homology of a graded differential over F_p

/// A graded F_p vector space with a differential of fixed degree: maps[d] is
/// the matrix (dims[d + shift] x dims[d]) of the differential out of degree d.
struct GradedComplex {
    unsigned p = 2;
    int shift = 1;
    std::map<int, std::size_t> dims;
    std::map<int, FpMatrix> maps;

    std::size_t dim(int d) const {
        auto it = dims.find(d);
        return it == dims.end() ? 0 : it->second;
    }
};

inline FpMatrix multiply(const FpMatrix& a, const FpMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("FpMatrix multiply: shape mismatch");
    FpMatrix c(a.p, a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            std::int64_t x = a.at(i, k);
            if (!x) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                c.at(i, j) = static_cast<std::int32_t>((c.at(i, j) + x * b.at(k, j)) % a.p);
        }
    return c;
}

/// Rank of ker/im in each degree from lo to hi.
inline std::map<int, std::size_t> differential_homology(const GradedComplex& cx, int lo, int hi) {
    auto rank_out = [&](int d) -> std::size_t {
        auto it = cx.maps.find(d);
        return it == cx.maps.end() ? 0 : rank(it->second);
    };
    for (const auto& [d, m] : cx.maps) {
        if (m.cols != cx.dim(d) || m.rows != cx.dim(d + cx.shift))
            throw std::invalid_argument("differential matrix out of degree " + std::to_string(d) + " has wrong shape");
        auto next = cx.maps.find(d + cx.shift);
        if (next == cx.maps.end()) continue;
        FpMatrix sq2 = multiply(next->second, m);
        if (std::any_of(sq2.a.begin(), sq2.a.end(), [](std::int32_t x) { return x != 0; }))
            throw std::runtime_error("differential does not square to zero out of degree " + std::to_string(d));
    }
    std::map<int, std::size_t> out;
    for (int d = lo; d <= hi; ++d) out[d] = cx.dim(d) - rank_out(d) - rank_out(d - cx.shift);
    return out;
}

inline std::map<int, std::size_t> q0_homology(const GradedComplex& cx, int lo, int hi) {
    if (cx.shift != 1) throw std::invalid_argument("q0_homology: Q_0 has degree 1");
    return differential_homology(cx, lo, hi);
}

}  // namespace chowcheck
