#pragma once

// Sparse graded polynomials over the exact scalar domains.  Generators carry a
// topological degree and may be exterior (square zero); odd exterior
// generators anticommute.

#include "scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace chowcheck {

struct Generator {
    std::string name;
    int degree = 1;
    bool exterior = false;

    friend bool operator==(const Generator&, const Generator&) = default;
};

class AlgebraSignature;
using SignaturePtr = std::shared_ptr<const AlgebraSignature>;

class AlgebraSignature {
public:
    AlgebraSignature(std::vector<Generator> gens, Domain domain) : gens_(std::move(gens)), domain_(domain) {
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            const auto& g = gens_[i];
            if (g.degree < 1) throw std::invalid_argument("generator " + g.name + " has degree < 1");
            if (g.exterior && domain_.kind != DomainKind::Fp)
                throw std::invalid_argument("exterior generator " + g.name + " requires an F_p domain");
            if (!index_.emplace(g.name, i).second) throw std::invalid_argument("duplicate generator " + g.name);
        }
    }

    static SignaturePtr make(std::vector<Generator> gens, Domain domain) {
        return std::make_shared<const AlgebraSignature>(std::move(gens), domain);
    }

    /// Convenience: polynomial generators all of one degree.
    static SignaturePtr uniform(const std::vector<std::string>& names, int degree, Domain domain) {
        std::vector<Generator> gens;
        for (const auto& n : names) gens.push_back({n, degree, false});
        return make(std::move(gens), domain);
    }

    std::size_t size() const { return gens_.size(); }
    const std::vector<Generator>& generators() const { return gens_; }
    const Generator& generator(std::size_t i) const { return gens_.at(i); }
    const Domain& domain() const { return domain_; }

    std::optional<std::size_t> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t index(const std::string& name) const {
        auto i = find(name);
        if (!i) throw std::invalid_argument("unknown generator " + name);
        return *i;
    }

    /// Same generators over a different coefficient domain.
    SignaturePtr with_domain(Domain d) const { return make(gens_, d); }

    bool has_signs() const {
        if (domain_.kind != DomainKind::Fp || domain_.p == 2) return false;
        return std::any_of(gens_.begin(), gens_.end(), [](const Generator& g) { return g.exterior && g.degree % 2; });
    }

    friend bool operator==(const AlgebraSignature& a, const AlgebraSignature& b) {
        return a.domain_ == b.domain_ && a.gens_ == b.gens_;
    }

private:
    std::vector<Generator> gens_;
    Domain domain_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline bool same_signature(const SignaturePtr& a, const SignaturePtr& b) { return a == b || *a == *b; }

struct Monomial {
    std::vector<std::uint32_t> exps;
    int degree = 0;

    Monomial() = default;
    Monomial(std::vector<std::uint32_t> e, const AlgebraSignature& sig) : exps(std::move(e)) {
        if (exps.size() != sig.size()) throw std::invalid_argument("exponent vector length mismatch");
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (sig.generator(i).exterior && exps[i] > 1)
                throw std::invalid_argument("exterior generator " + sig.generator(i).name + " with exponent > 1");
            degree += static_cast<int>(exps[i]) * sig.generator(i).degree;
        }
    }
    static Monomial unit(const AlgebraSignature& sig) { return Monomial(std::vector<std::uint32_t>(sig.size(), 0), sig); }

    bool is_unit() const { return std::all_of(exps.begin(), exps.end(), [](auto e) { return e == 0; }); }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps == b.exps; }
    /// Graded lexicographic: topological degree first, then larger exponent at smaller index.
    friend bool operator<(const Monomial& a, const Monomial& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        return std::lexicographical_compare(a.exps.begin(), a.exps.end(), b.exps.begin(), b.exps.end());
    }
};

/// Product of two monomials with Koszul sign; nullopt when an exterior square appears.
inline std::optional<std::pair<Monomial, int>> multiply_monomials(const Monomial& a, const Monomial& b,
                                                                 const AlgebraSignature& sig) {
    Monomial r;
    r.exps.resize(a.exps.size());
    r.degree = a.degree + b.degree;
    for (std::size_t i = 0; i < a.exps.size(); ++i) {
        r.exps[i] = a.exps[i] + b.exps[i];
        if (r.exps[i] > 1 && sig.generator(i).exterior) return std::nullopt;
    }
    int sign = 1;
    if (sig.has_signs()) {
        // move each odd exterior factor of b left past the odd exterior factors of a with larger index
        int swaps = 0, odd_in_a_after = 0;
        for (std::size_t k = a.exps.size(); k-- > 0;) {
            const auto& g = sig.generator(k);
            if (!(g.exterior && g.degree % 2)) continue;
            if (b.exps[k]) swaps += odd_in_a_after;
            if (a.exps[k]) ++odd_in_a_after;
        }
        if (swaps % 2) sign = -1;
    }
    return std::make_pair(std::move(r), sign);
}

class Polynomial {
public:
    using Term = std::pair<Monomial, Scalar>;

    Polynomial() = default;
    explicit Polynomial(SignaturePtr sig) : sig_(std::move(sig)) {}

    static Polynomial zero(SignaturePtr sig) { return Polynomial(std::move(sig)); }
    static Polynomial constant(SignaturePtr sig, const Scalar& c) {
        Polynomial p(sig);
        if (!c.is_zero()) p.terms_.emplace_back(Monomial::unit(*sig), c);
        return p;
    }
    static Polynomial constant(SignaturePtr sig, std::int64_t c) {
        Scalar s(sig->domain(), c);
        return constant(std::move(sig), s);
    }
    static Polynomial one(SignaturePtr sig) { return constant(std::move(sig), 1); }
    static Polynomial generator(SignaturePtr sig, std::size_t idx) {
        std::vector<std::uint32_t> e(sig->size(), 0);
        e.at(idx) = 1;
        Polynomial p(sig);
        p.terms_.emplace_back(Monomial(std::move(e), *sig), Scalar(sig->domain(), 1));
        return p;
    }
    static Polynomial generator(SignaturePtr sig, const std::string& name) {
        auto idx = sig->index(name);
        return generator(std::move(sig), idx);
    }
    static Polynomial monomial(SignaturePtr sig, Monomial m, const Scalar& c) {
        Polynomial p(sig);
        if (!c.is_zero()) p.terms_.emplace_back(std::move(m), c);
        return p;
    }
    /// Builds from unsorted terms, merging duplicates and dropping zeros.
    static Polynomial from_terms(SignaturePtr sig, std::vector<Term> terms) {
        Polynomial p(std::move(sig));
        p.terms_ = std::move(terms);
        p.normalize();
        return p;
    }

    const SignaturePtr& signature() const { return sig_; }
    const Domain& domain() const { return sig_->domain(); }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool is_homogeneous() const {
        return std::all_of(terms_.begin(), terms_.end(),
                           [&](const Term& t) { return t.first.degree == terms_.front().first.degree; });
    }
    /// Degree of a homogeneous polynomial; zero has every degree and reports -1.
    int degree() const {
        if (terms_.empty()) return -1;
        if (!is_homogeneous()) throw std::domain_error("degree of a non-homogeneous polynomial");
        return terms_.front().first.degree;
    }

    Scalar coefficient(const Monomial& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const Monomial& key) { return key < t.first; });
        if (it != terms_.end() && it->first == m) return it->second;
        return Scalar(domain(), 0);
    }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        a.check(b);
        Polynomial r(a.sig_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto i = a.terms_.begin(), j = b.terms_.begin();
        while (i != a.terms_.end() && j != b.terms_.end()) {
            if (j->first < i->first) {
                r.terms_.push_back(*i++);
            } else if (i->first < j->first) {
                r.terms_.push_back(*j++);
            } else {
                Scalar c = i->second + j->second;
                if (!c.is_zero()) r.terms_.emplace_back(i->first, c);
                ++i;
                ++j;
            }
        }
        r.terms_.insert(r.terms_.end(), i, a.terms_.end());
        r.terms_.insert(r.terms_.end(), j, b.terms_.end());
        return r;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check(b);
        std::vector<Term> out;
        out.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                auto prod = multiply_monomials(ma, mb, *a.sig_);
                if (!prod) continue;
                Scalar c = ca * cb;
                if (prod->second < 0) c = -c;
                out.emplace_back(std::move(prod->first), std::move(c));
            }
        return from_terms(a.sig_, std::move(out));
    }

    Polynomial scaled(const Scalar& s) const {
        if (s.is_zero()) return zero(sig_);
        Polynomial r = *this;
        for (auto& t : r.terms_) t.second *= s;
        r.normalize();
        return r;
    }
    Polynomial scaled(std::int64_t s) const { return scaled(Scalar(domain(), s)); }

    Polynomial pow(unsigned e) const {
        Polynomial result = one(sig_), base = *this;
        while (e) {
            if (e & 1) result = result * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return result;
    }

    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    /// Homogeneous component of the given degree.
    Polynomial component(int deg) const {
        Polynomial r(sig_);
        for (const auto& t : terms_)
            if (t.first.degree == deg) r.terms_.push_back(t);
        return r;
    }

    /// Same coefficients read in another signature with identical generators (e.g. a domain change).
    Polynomial reinterpret(SignaturePtr target) const {
        if (target->generators() != sig_->generators()) throw std::invalid_argument("reinterpret: generator mismatch");
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) out.emplace_back(m, Scalar(target->domain(), c.to_rational()));
        return from_terms(std::move(target), std::move(out));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (!same_signature(a.sig_, b.sig_)) return false;
        return a.terms_.size() == b.terms_.size() &&
               std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                          [](const Term& x, const Term& y) { return x.first == y.first && x.second == y.second; });
    }

    std::string to_string() const;

private:
    void check(const Polynomial& o) const {
        if (!sig_ || !o.sig_ || !same_signature(sig_, o.sig_))
            throw std::invalid_argument("polynomial signature mismatch");
    }
    void normalize() {
        std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return y.first < x.first; });
        std::vector<Term> merged;
        merged.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!merged.empty() && merged.back().first == t.first)
                merged.back().second += t.second;
            else
                merged.push_back(std::move(t));
        }
        std::erase_if(merged, [](const Term& x) { return x.second.is_zero(); });
        terms_ = std::move(merged);
    }

    SignaturePtr sig_;
    std::vector<Term> terms_;  // strictly decreasing monomial order, nonzero coefficients
};

inline std::string monomial_to_string(const Monomial& m, const AlgebraSignature& sig) {
    std::string s;
    for (std::size_t i = 0; i < m.exps.size(); ++i) {
        if (!m.exps[i]) continue;
        if (!s.empty()) s += '*';
        s += sig.generator(i).name;
        if (m.exps[i] > 1) s += '^' + std::to_string(m.exps[i]);
    }
    return s.empty() ? "1" : s;
}

inline std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational v = c.to_rational();
        bool negative = v < 0;
        if (negative) v = -v;
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        first = false;
        std::string mono = monomial_to_string(m, *sig_);
        if (m.is_unit()) {
            out += v.str();
        } else {
            if (v != 1) out += v.str() + "*";
            out += mono;
        }
    }
    return out;
}

/// All monomials of topological degree n, in decreasing canonical order.
inline std::vector<Monomial> degree_slice(const AlgebraSignature& sig, int n) {
    std::vector<Monomial> out;
    if (n < 0) return out;
    std::vector<std::uint32_t> e(sig.size(), 0);
    auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
        if (i == sig.size()) {
            if (remaining == 0) out.emplace_back(e, sig);
            return;
        }
        const auto& g = sig.generator(i);
        int max_e = remaining / g.degree;
        if (g.exterior) max_e = std::min(max_e, 1);
        for (int k = max_e; k >= 0; --k) {
            e[i] = static_cast<std::uint32_t>(k);
            self(self, i + 1, remaining - k * g.degree);
        }
        e[i] = 0;
    };
    rec(rec, 0, n);
    std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) { return b < a; });
    return out;
}

/// Ring-homomorphism evaluation: generator i of f's signature maps to images[i].
/// Images live in `target`; each must be homogeneous of its generator's degree.
inline Polynomial substitute(const Polynomial& f, const std::vector<std::optional<Polynomial>>& images,
                             const SignaturePtr& target) {
    const auto& sig = *f.signature();
    if (images.size() != sig.size()) throw std::invalid_argument("substitute: image list length mismatch");
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (!images[i]) continue;
        const auto& img = *images[i];
        if (!same_signature(img.signature(), target))
            throw std::invalid_argument("substitute: image of " + sig.generator(i).name + " in wrong signature");
        if (!img.is_zero() && (!img.is_homogeneous() || img.degree() != sig.generator(i).degree))
            throw std::invalid_argument("substitute: image of " + sig.generator(i).name + " has wrong degree");
    }
    std::vector<std::vector<Polynomial>> powers(sig.size());
    auto power = [&](std::size_t i, std::uint32_t e) -> const Polynomial& {
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(Polynomial::one(target));
        while (pw.size() <= e) pw.push_back(pw.back() * *images[i]);
        return pw[e];
    };
    Polynomial result = Polynomial::zero(target);
    for (const auto& [m, c] : f.terms()) {
        Polynomial term = Polynomial::constant(target, Scalar(target->domain(), c.to_rational()));
        for (std::size_t i = 0; i < m.exps.size(); ++i) {
            if (!m.exps[i]) continue;
            if (!images[i]) throw std::invalid_argument("substitute: missing image for " + sig.generator(i).name);
            term = term * power(i, m.exps[i]);
        }
        result += term;
    }
    return result;
}

inline Polynomial substitute(const Polynomial& f, const std::map<std::string, Polynomial>& images,
                             const SignaturePtr& target) {
    std::vector<std::optional<Polynomial>> v(f.signature()->size());
    for (const auto& [name, img] : images) v[f.signature()->index(name)] = img;
    return substitute(f, v, target);
}

/// Coordinates of a homogeneous polynomial against an ordered monomial basis.
inline std::vector<Scalar> coordinates(const Polynomial& f, const std::vector<Monomial>& basis) {
    std::vector<Scalar> v;
    v.reserve(basis.size());
    std::size_t matched = 0;
    for (const auto& m : basis) {
        Scalar c = f.coefficient(m);
        if (!c.is_zero()) ++matched;
        v.push_back(std::move(c));
    }
    if (matched != f.size()) throw std::invalid_argument("coordinates: polynomial has terms outside the basis");
    return v;
}

inline Polynomial from_coordinates(const SignaturePtr& sig, const std::vector<Monomial>& basis,
                                   const std::vector<Scalar>& coords) {
    std::vector<Polynomial::Term> terms;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!coords[i].is_zero()) terms.emplace_back(basis[i], Scalar(sig->domain(), coords[i].to_rational()));
    return Polynomial::from_terms(sig, std::move(terms));
}

}  // namespace chowcheck
