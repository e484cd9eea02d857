#pragma once

// Restriction audits: image modules inside invariant lattices, nilpotence in
// the reduction mod p, injectivity mod p, kernels of restriction maps, and the
// v_1-detection of the degree-6 Griffiths class of BSpin(7).

#include "ahss.hpp"
#include "group.hpp"
#include "parse.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chowcheck {

struct NamedPolynomial {
    std::string name;
    Polynomial poly;
};

namespace detail {

inline void weighted_exponents(const std::vector<int>& degs, int d, const std::function<void(const std::vector<std::uint32_t>&)>& f) {
    std::vector<std::uint32_t> e(degs.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int rem) {
        if (i == degs.size()) {
            if (rem == 0) f(e);
            return;
        }
        for (int k = 0; k * degs[i] <= rem; ++k) {
            e[i] = static_cast<std::uint32_t>(k);
            rec(i + 1, rem - k * degs[i]);
        }
        e[i] = 0;
    };
    if (d >= 0) rec(0, d);
}

inline std::string product_label(const std::vector<std::string>& names, const std::vector<std::uint32_t>& e) {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        if (!s.empty()) s += '*';
        s += names[i];
        if (e[i] > 1) s += '^' + std::to_string(e[i]);
    }
    return s;
}

inline std::string times_label(const std::string& m, const std::string& g) {
    if (m.empty()) return g;
    if (g == "1") return m;
    return m + '*' + g;
}

inline std::vector<Rational> rational_coordinates(const Polynomial& f, const std::vector<Monomial>& basis) {
    std::vector<Rational> v;
    for (const auto& s : coordinates(f, basis)) v.push_back(s.to_rational());
    return v;
}

// Rows with unit denominators at p, scaled to integers.
inline ZRows p_integral_rows(const std::vector<std::vector<Rational>>& rows, unsigned p, const char* who) {
    ZRows out;
    for (const auto& r : rows) {
        BigInt lcm = 1;
        for (const auto& x : r) {
            BigInt den = boost::multiprecision::denominator(x);
            lcm = lcm / gcd_big(lcm, den) * den;
        }
        if (lcm % p == 0) throw std::logic_error(std::string(who) + ": vector is not p-integral");
        ZVec z;
        for (const auto& x : r) z.push_back(BigInt(x * lcm));
        out.push_back(std::move(z));
    }
    return out;
}

}  // namespace detail

/// A module over a polynomial subring, given by module generators, all embedded
/// in an ambient polynomial ring.
struct RingPresentation {
    std::string name;
    SignaturePtr ambient;
    std::vector<NamedPolynomial> subring;
    std::vector<NamedPolynomial> generators;

    void validate() const {
        std::set<std::pair<std::string, int>> seen;
        for (const auto* list : {&subring, &generators})
            for (const auto& g : *list) {
                if (!same_signature(g.poly.signature(), ambient))
                    throw std::invalid_argument(name + ": " + g.name + " is not in the ambient ring");
                if (g.poly.is_zero() || !g.poly.is_homogeneous())
                    throw std::invalid_argument(name + ": " + g.name + " must be nonzero and homogeneous");
            }
        for (const auto& g : generators)
            if (!seen.insert({g.name, g.poly.degree()}).second)
                throw std::invalid_argument(name + ": repeated module generator " + g.name);
        for (const auto& z : subring)
            if (z.poly.degree() < 1) throw std::invalid_argument(name + ": subring generator " + z.name + " has degree 0");
    }

    /// Subring monomials times module generators, in one degree.
    std::vector<NamedPolynomial> spanning(int degree) const {
        std::vector<int> degs;
        std::vector<std::string> names;
        for (const auto& z : subring) {
            degs.push_back(z.poly.degree());
            names.push_back(z.name);
        }
        std::vector<NamedPolynomial> out;
        for (const auto& g : generators) {
            detail::weighted_exponents(degs, degree - g.poly.degree(), [&](const std::vector<std::uint32_t>& e) {
                Polynomial f = g.poly;
                for (std::size_t i = 0; i < e.size(); ++i)
                    if (e[i]) f *= subring[i].poly.pow(e[i]);
                out.push_back({detail::times_label(detail::product_label(names, e), g.name), f});
            });
        }
        return out;
    }

    /// The module in one degree as a lattice (or subspace) in monomial coordinates.
    SubmoduleBasis lattice(int degree) const {
        auto basis = degree_slice(*ambient, degree);
        std::vector<std::vector<Rational>> gens;
        for (const auto& s : spanning(degree)) gens.push_back(detail::rational_coordinates(s.poly, basis));
        return span(ambient->domain(), basis.size(), gens, basis);
    }
};

/// Invariant lattices of a group action, computed on demand per degree.
class InvariantLattice {
public:
    InvariantLattice(GroupAction action, Domain domain)
        : action_(std::move(action)), domain_(domain),
          slices_(std::make_unique<SliceActions>(action_, domain.kind == DomainKind::Fp ? domain.p : 0)) {}

    const SubmoduleBasis& at(int degree) {
        auto it = cache_.find(degree);
        if (it == cache_.end()) it = cache_.emplace(degree, invariant_basis(*slices_, action_, degree, domain_)).first;
        return it->second;
    }
    const GroupAction& action() const { return action_; }
    Domain domain() const { return domain_; }
    SignaturePtr signature() const { return action_.signature->with_domain(domain_); }

    bool is_invariant(const Polynomial& f) const {
        const auto& sig = f.signature();
        for (const auto& M : action_.generators) {
            std::vector<std::optional<Polynomial>> images;
            for (std::size_t j = 0; j < sig->size(); ++j) {
                Polynomial img = Polynomial::zero(sig);
                for (std::size_t i = 0; i < sig->size(); ++i)
                    if (M[i][j]) img += Polynomial::generator(sig, i).scaled(Scalar(sig->domain(), M[i][j]));
                images.emplace_back(img);
            }
            if (substitute(f, images, sig) != f) return false;
        }
        return true;
    }

private:
    GroupAction action_;
    Domain domain_;
    std::unique_ptr<SliceActions> slices_;
    std::map<int, SubmoduleBasis> cache_;
};

// ---------------------------------------------------------------------------
// rho_image_audit

struct RhoDegree {
    int degree = 0;
    std::size_t invariant_rank = 0, image_rank = 0;
    std::vector<unsigned> valuations;  // Smith valuations of the image inside the invariant lattice
    std::vector<std::pair<std::string, MembershipResult>> named;
    std::vector<std::pair<std::string, MembershipResult>> basis;  // invariant basis elements against the image
    bool closed = true;  // subring generators keep the image inside itself
};

namespace detail {

inline std::vector<unsigned> relative_valuations(const SubmoduleBasis& sub, const SubmoduleBasis& lat, unsigned p, const char* who) {
    std::vector<std::vector<Rational>> coords;
    for (const auto& v : sub.vectors) {
        auto c = solve_in_span(lat.vectors, v);
        if (!c) throw std::logic_error(std::string(who) + ": element outside the invariant lattice");
        coords.push_back(*c);
    }
    if (coords.empty()) return {};
    auto sm = local_smith(p_integral_rows(coords, p, who), lat.rank(), p);
    if (sm.rank != sub.rank()) throw std::logic_error(std::string(who) + ": dependent image vectors");
    return sm.valuations;
}

}  // namespace detail

inline std::vector<RhoDegree> rho_image_audit(const RingPresentation& pres, InvariantLattice& inv, int lo, int hi,
                                              const std::vector<NamedPolynomial>& named = {}) {
    pres.validate();
    const Domain dom = inv.domain();
    if (dom.kind != DomainKind::Local) throw std::invalid_argument("rho_image_audit: invariants must be p-local");
    const unsigned p = dom.p;
    auto sig = inv.signature();
    std::vector<RhoDegree> out;
    std::map<int, SubmoduleBasis> images;
    auto image = [&](int d) -> const SubmoduleBasis& {
        auto it = images.find(d);
        if (it != images.end()) return it->second;
        const auto& L = inv.at(d);
        std::vector<std::vector<Rational>> gens;
        for (const auto& s : pres.spanning(d)) gens.push_back(detail::rational_coordinates(s.poly, L.ambient));
        return images.emplace(d, span(dom, L.dimension, gens, L.ambient)).first->second;
    };
    for (int d = lo; d <= hi; ++d) {
        const auto& L = inv.at(d);
        const auto& M = image(d);
        RhoDegree r;
        r.degree = d;
        r.invariant_rank = L.rank();
        r.image_rank = M.rank();
        r.valuations = detail::relative_valuations(M, L, p, "rho_image_audit");
        for (const auto& n : named)
            if (n.poly.degree() == d) r.named.emplace_back(n.name, membership(detail::rational_coordinates(n.poly, L.ambient), M, p));
        auto polys = L.as_polynomials(sig);
        for (std::size_t i = 0; i < L.rank(); ++i) r.basis.emplace_back(polys[i].to_string(), membership(L.vectors[i], M, p));
        for (const auto& z : pres.subring) {
            int d0 = d - z.poly.degree();
            if (d0 < lo) continue;
            const auto& M0 = image(d0);
            for (const auto& f : M0.as_polynomials(sig))
                if (membership(detail::rational_coordinates(f * z.poly, L.ambient), M, p).verdict != Membership::Inside) r.closed = false;
        }
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// feshbach_nilpotence

struct NilpotenceVerdict {
    std::string name;
    bool nilpotent = false;
    unsigned n = 0;  // smallest exponent with y^n = 0 in the presentation mod p
};

/// Bounded search for the smallest n with y^n in p * (module), exponent <= bound
/// and degree <= degree_bound.
inline NilpotenceVerdict feshbach_nilpotence(const RingPresentation& pres, const NamedPolynomial& y, unsigned p,
                                             unsigned exponent_bound = 8, int degree_bound = 1 << 20) {
    pres.validate();
    if (!same_signature(y.poly.signature(), pres.ambient) || !y.poly.is_homogeneous() || y.poly.is_zero())
        throw std::invalid_argument("feshbach_nilpotence: candidate " + y.name + " is not a homogeneous ambient element");
    NilpotenceVerdict v{y.name, false, 0};
    auto in_module = [&](const Polynomial& f) {
        auto M = pres.lattice(f.degree());
        auto c = solve_in_span(M.vectors, detail::rational_coordinates(f, M.ambient));
        if (!c) return std::optional<std::vector<Rational>>{};
        return c;
    };
    {
        auto c = in_module(y.poly);
        bool integral = c && std::all_of(c->begin(), c->end(), [&](const Rational& x) {
                            return boost::multiprecision::denominator(x) % p != 0;
                        });
        if (!integral) throw std::invalid_argument("feshbach_nilpotence: " + y.name + " is not expressible in " + pres.name);
    }
    Polynomial f = y.poly;
    for (unsigned n = 1; n <= exponent_bound; ++n, f *= y.poly) {
        if (f.degree() > degree_bound) break;
        auto c = in_module(f);
        if (!c) throw std::logic_error("feshbach_nilpotence: " + pres.name + " is not closed under products");
        bool zero = std::all_of(c->begin(), c->end(), [&](const Rational& x) { return boost::multiprecision::numerator(x) % p == 0; });
        if (zero) {
            v.nilpotent = true;
            v.n = n;
            return v;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// surjectivity_criterion

struct SurjectivityReport {
    bool injective = true;
    std::optional<int> first_failure;
    std::map<int, std::pair<std::size_t, std::size_t>> ranks;  // degree -> (module rank, rank mod p of the composite)
};

/// Injectivity of (presented module) tensor Z/p -> invariants / p, degree by degree.
inline SurjectivityReport surjectivity_criterion(const RingPresentation& pres, InvariantLattice& inv, int lo, int hi) {
    pres.validate();
    const unsigned p = inv.domain().p;
    if (inv.domain().kind != DomainKind::Local) throw std::invalid_argument("surjectivity_criterion: invariants must be p-local");
    SurjectivityReport rep;
    for (int d = lo; d <= hi; ++d) {
        const auto& L = inv.at(d);
        auto gens = pres.spanning(d);
        std::vector<std::vector<Rational>> coords;
        for (const auto& g : gens) {
            auto c = solve_in_span(L.vectors, detail::rational_coordinates(g.poly, L.ambient));
            if (!c) throw std::logic_error("surjectivity_criterion: " + g.name + " is not invariant");
            coords.push_back(*c);
        }
        std::size_t r = 0;
        if (!coords.empty()) {
            auto z = detail::p_integral_rows(coords, p, "surjectivity_criterion");
            FpMatrix m(p, z.size(), L.rank());
            for (std::size_t i = 0; i < z.size(); ++i)
                for (std::size_t j = 0; j < L.rank(); ++j) m.set(i, j, static_cast<std::int64_t>(BigInt(z[i][j] % p)));
            r = rank(m);
        }
        rep.ranks[d] = {gens.size(), r};
        if (r != gens.size() && rep.injective) {
            rep.injective = false;
            rep.first_failure = d;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// res_kernel

struct RestrictionTarget {
    std::string name;
    unsigned modulus = 0;  // 0: torsion-free target; p: target read mod p
};

struct SourceClass {
    std::string name;
    int degree = 0;
    bool torsion = false;  // order p
    std::map<std::string, Polynomial> images;
};

struct RestrictionData {
    unsigned p = 2;
    std::vector<RestrictionTarget> targets;
    std::vector<SourceClass> sources;
};

struct KernelDegree {
    int degree = 0;
    std::size_t free_sources = 0, torsion_sources = 0;
    std::size_t generators = 0;   // minimal number of generators of the kernel
    std::size_t free_rank = 0;
    std::size_t image_rank = 0;   // Q-rank of the free part plus F_p-rank of the torsion part
    std::vector<std::string> witnesses;
};

inline std::vector<KernelDegree> res_kernel(const RestrictionData& data, const std::vector<std::string>& use, int lo, int hi) {
    const unsigned p = data.p;
    std::vector<const RestrictionTarget*> targets;
    for (const auto& n : use) {
        auto it = std::find_if(data.targets.begin(), data.targets.end(), [&](const RestrictionTarget& t) { return t.name == n; });
        if (it == data.targets.end()) throw std::invalid_argument("res_kernel: unknown target " + n);
        targets.push_back(&*it);
    }
    std::vector<KernelDegree> out;
    for (int d = lo; d <= hi; ++d) {
        std::vector<const SourceClass*> src;
        for (const auto& s : data.sources)
            if (s.degree == d && !s.torsion) src.push_back(&s);
        const std::size_t a = src.size();
        for (const auto& s : data.sources)
            if (s.degree == d && s.torsion) src.push_back(&s);
        const std::size_t n = src.size(), b = n - a;
        KernelDegree kd;
        kd.degree = d;
        kd.free_sources = a;
        kd.torsion_sources = b;
        // target rows: (is mod p, coefficient per source)
        std::vector<std::pair<bool, std::vector<Rational>>> rows;
        for (const auto* t : targets) {
            std::map<std::string, std::vector<Rational>> byterm;
            for (std::size_t j = 0; j < n; ++j) {
                auto it = src[j]->images.find(t->name);
                if (it == src[j]->images.end())
                    throw std::invalid_argument("res_kernel: " + src[j]->name + " has no image in " + t->name);
                if (!t->modulus && src[j]->torsion && !it->second.is_zero())
                    throw std::invalid_argument("res_kernel: torsion class " + src[j]->name + " maps nontrivially to the torsion-free " + t->name);
                for (const auto& [m, c] : it->second.terms()) {
                    auto& row = byterm[monomial_to_string(m, *it->second.signature())];
                    if (row.empty()) row.assign(n, Rational(0));
                    row[j] = c.to_rational();
                }
            }
            for (auto& [k, row] : byterm) rows.emplace_back(t->modulus != 0, std::move(row));
        }
        // integer system in (alpha, beta, slack): integral rows exact, mod-p rows up to p * slack
        std::size_t nmod = 0;
        for (const auto& r : rows) nmod += r.first;
        const std::size_t cols = n + nmod;
        ZRows sys;
        std::size_t slack = n;
        for (const auto& [modp, r] : rows) {
            auto z = detail::p_integral_rows({r}, p, "res_kernel").front();
            z.resize(cols, BigInt(0));
            if (modp) z[slack++] = p;
            sys.push_back(std::move(z));
        }
        ZRows kt;  // kernel lattice projected to the source coordinates
        if (sys.empty()) {
            for (std::size_t j = 0; j < n; ++j) {
                ZVec e(n, BigInt(0));
                e[j] = 1;
                kt.push_back(std::move(e));
            }
        } else {
            for (auto& v : integer_kernel(sys, cols)) {
                v.resize(n);
                kt.push_back(std::move(v));
            }
            if (!kt.empty()) kt = hermite_rows(std::move(kt));
        }
        QRows ktq;
        for (const auto& v : kt) ktq.emplace_back(v.begin(), v.end());
        // p * (torsion coordinates) in the kernel basis, reduced mod p
        FpMatrix P(p, b, kt.size());
        for (std::size_t j = 0; j < b; ++j) {
            QVec e(n, Rational(0));
            e[a + j] = p;
            auto c = solve_in_span(ktq, e);
            if (!c) throw std::logic_error("res_kernel: p times a torsion class is not in the kernel lattice");
            for (std::size_t i = 0; i < c->size(); ++i) {
                if (boost::multiprecision::denominator((*c)[i]) != 1) throw std::logic_error("res_kernel: kernel lattice not saturated");
                P.set(j, i, static_cast<std::int64_t>(BigInt(boost::multiprecision::numerator((*c)[i]) % p)));
            }
        }
        kd.generators = kt.size() - (b ? rank(P) : 0);
        QRows freepart;
        for (const auto& v : kt) freepart.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(a));
        kd.free_rank = freepart.empty() ? 0 : rank(freepart, a);
        for (const auto& v : kt) {
            bool trivial = true;
            for (std::size_t j = 0; j < n; ++j)
                if (j < a ? v[j] != 0 : v[j] % p != 0) trivial = false;
            if (trivial) continue;
            std::string w;
            for (std::size_t j = 0; j < n; ++j) {
                BigInt c = j < a ? v[j] : BigInt(((v[j] % p) + p) % p);
                if (c == 0) continue;
                if (!w.empty()) w += " + ";
                if (c != 1) w += c.str() + "*";
                w += src[j]->name;
            }
            kd.witnesses.push_back(w);
        }
        // image rank by a separate route: free columns over Q, torsion columns mod p
        QRows qfree;
        FpMatrix ftor(p, nmod, b);
        std::size_t mr = 0;
        for (const auto& [modp, r] : rows) {
            if (!modp) qfree.emplace_back(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(a));
            if (modp) {
                for (std::size_t j = 0; j < b; ++j) {
                    Rational x = r[a + j];
                    ftor.set(mr, j, static_cast<std::int64_t>(BigInt(boost::multiprecision::numerator(x) % p)));
                }
                ++mr;
            }
        }
        kd.image_rank = (qfree.empty() ? 0 : rank(qfree, a)) + (b && nmod ? rank(ftor) : 0);
        out.push_back(std::move(kd));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spin(7) data

/// Invariants of the Spin(7) Weyl group on H^*(BT; Z_(2)), with named classes.
struct Spin7Lattice {
    std::shared_ptr<InvariantLattice> invariants;
    SignaturePtr sig;
    Polynomial w4, w8, c6;

    /// Image of the cycle map: D{1, 2w4, 2w8, 2w4w8}, D = Z_(2)[c4, c6, c8].
    RingPresentation image() const { return presentation("CH/Tor", {{"1", one()}, {"2w4", two() * w4}, {"2w8", two() * w8}, {"2w4w8", two() * w4 * w8}}); }
    /// Integral cohomology mod torsion: D{1, w4, w8, w4w8}.
    RingPresentation full() const { return presentation("H/Tor", {{"1", one()}, {"w4", w4}, {"w8", w8}, {"w4w8", w4 * w8}}); }
    /// Negative control: w8 replaced by 2w8 in the presentation of H/Tor.
    RingPresentation doctored() const {
        return presentation("H/Tor doctored", {{"1", one()}, {"w4", w4}, {"2w8", two() * w8}, {"w4w8", w4 * w8}});
    }

private:
    Polynomial one() const { return Polynomial::one(sig); }
    Polynomial two() const { return Polynomial::constant(sig, Scalar(sig->domain(), 2)); }
    RingPresentation presentation(std::string name, std::vector<NamedPolynomial> gens) const {
        return {std::move(name), sig, {{"c4", w4 * w4}, {"c6", c6}, {"c8", w8 * w8}}, std::move(gens)};
    }
};

inline Spin7Lattice spin7_lattice() {
    Spin7Lattice L;
    L.invariants = std::make_shared<InvariantLattice>(build_weyl_spin(3), Domain::local(2));
    L.sig = L.invariants->signature();
    const auto& sig = L.sig;
    L.w4 = parse_polynomial("t1^2 + t2^2 + 2*g^2 - 2*g*t1 - 2*g*t2 + t1*t2", sig);
    // product of four weights of the spin representation; t3 = 2g - t1 - t2
    L.w8 = parse_polynomial("g*(t1 + t2 - g)*(g - t2)*(t1 - g)", sig);
    if (!L.invariants->is_invariant(L.w4) || !L.invariants->is_invariant(L.w8))
        throw std::logic_error("spin7_lattice: w4 or w8 is not invariant");
    // c6: a degree-12 invariant completing w4^3, w4*w8 to a basis over Z_(2)
    const auto& B = L.invariants->at(12);
    auto basis = B.as_polynomials(sig);
    auto coords = [&](const Polynomial& f) {
        auto c = solve_in_span(B.vectors, detail::rational_coordinates(f, B.ambient));
        if (!c) throw std::logic_error("spin7_lattice: degree-12 class is not invariant");
        return *c;
    };
    QRows fixed{coords(L.w4.pow(3)), coords(L.w4 * L.w8)};
    std::vector<Polynomial> candidates = basis;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) candidates.push_back(basis[i] + basis[j]);
    for (const auto& cand : candidates) {
        QRows m = fixed;
        m.push_back(coords(cand));
        auto sm = local_smith(detail::p_integral_rows(m, 2, "spin7_lattice"), 3, 2);
        if (sm.rank == 3 && std::all_of(sm.valuations.begin(), sm.valuations.end(), [](unsigned v) { return v == 0; })) {
            L.c6 = cand;
            return L;
        }
    }
    throw std::logic_error("spin7_lattice: no degree-12 generator found");
}

/// Chow ring classes of BSpin(7) and their restrictions: to the A'-invariants
/// Z/2[c4,c6,c7,c8] (mod 2), to the lattice Z_(2)[w4,w8,c6], and to the
/// Omega-level invariants where xi3 goes to v1*w8.
inline RestrictionData spin7_restriction_data(int window) {
    auto Aprime = AlgebraSignature::make({{"c4", 8, false}, {"c6", 12, false}, {"c7", 14, false}, {"c8", 16, false}}, Domain::fp(2));
    auto lat = AlgebraSignature::make({{"w4", 4, false}, {"w8", 8, false}, {"c6", 12, false}}, Domain::local(2));
    auto omega = AlgebraSignature::make({{"v1", 2, false}, {"w4", 4, false}, {"w8", 8, false}, {"c6", 12, false}}, Domain::fp(2));
    RestrictionData data{2, {{"A'", 2}, {"lattice", 0}, {"omega", 2}}, {}};
    const std::vector<int> ddeg{8, 12, 16};
    const std::vector<std::string> dnames{"c4", "c6", "c8"};
    auto P = [](const SignaturePtr& s, const std::string& text) { return parse_polynomial(text, s); };
    auto mul = [](const std::string& a, const std::string& b) { return b == "1" ? a : a + "*" + b; };
    for (int dm = 0; dm <= window; ++dm)
        detail::weighted_exponents(ddeg, dm, [&](const std::vector<std::uint32_t>& e) {
            const std::string m = detail::product_label(dnames, e);
            const std::string mA = m.empty() ? "1" : m;
            std::string mL = "1";
            {
                std::vector<std::uint32_t> le{2 * e[0], 2 * e[2], e[1]};
                std::string s = detail::product_label({"w4", "w8", "c6"}, le);
                if (!s.empty()) mL = s;
            }
            auto zeroA = Polynomial::zero(Aprime), zeroL = Polynomial::zero(lat), zeroO = Polynomial::zero(omega);
            auto add = [&](const std::string& g, int deg, bool tor, Polynomial a, Polynomial l, Polynomial o) {
                if (dm + deg > window) return;
                data.sources.push_back({detail::times_label(m, g), dm + deg, tor, {{"A'", a}, {"lattice", l}, {"omega", o}}});
            };
            add("1", 0, false, P(Aprime, mA), P(lat, mL), zeroO);
            add("c2'", 4, false, zeroA, P(lat, mul("2*w4", mL)), zeroO);
            add("c4'", 8, false, zeroA, P(lat, mul("2*w8", mL)), zeroO);
            add("c6'", 12, false, zeroA, P(lat, mul("2*w4*w8", mL)), zeroO);
            add("xi3", 6, true, zeroA, zeroL, P(omega, mul("v1*w8", mL)));
            for (int k = 1; dm + 14 * k <= window; ++k) {
                std::string c7 = k == 1 ? "c7" : "c7^" + std::to_string(k);
                add(c7, 14 * k, true, P(Aprime, mul(c7, mA)), zeroL, zeroO);
            }
        });
    return data;
}

// ---------------------------------------------------------------------------
// omega_detection_audit

struct OmegaDegree {
    int degree = 0;           // degree of xi3 * m
    std::size_t count = 0;    // number of monomials m
    std::size_t rank = 0;     // rank mod 2 of {v1 w8 m}
    bool all_nonzero = true;
    bool chart_permanent = true;  // v1 * (w8 m) permanent in the chart, where reliable
    bool chart_checked = false;
};

struct OmegaDetection {
    Ahss::Permanence two_e, v1_e, e;
    std::vector<OmegaDegree> degrees;
    bool control_vanishes = false;  // 2 * v1 w8 = 0 mod 2

    bool ok() const {
        bool good = two_e.permanent() && v1_e.permanent() && !e.permanent() && control_vanishes;
        for (const auto& d : degrees) good = good && d.all_nonzero && d.rank == d.count && d.chart_permanent;
        return good;
    }
};

/// `ahss` must run on the builtin Spin(7) chart.
inline OmegaDetection omega_detection_audit(Ahss& ahss, int window) {
    OmegaDetection out;
    out.two_e = ahss.permanent_cycle_check("2*w8");
    out.v1_e = ahss.permanent_cycle_check("v1*w8");
    out.e = ahss.permanent_cycle_check("w8");
    auto omega = AlgebraSignature::make({{"v1", 2, false}, {"w4", 4, false}, {"w8", 8, false}, {"c6", 12, false}}, Domain::fp(2));
    const auto v1w8 = parse_polynomial("v1*w8", omega);
    out.control_vanishes = (v1w8.scaled(Scalar(omega->domain(), 2))).is_zero();
    const std::vector<int> ddeg{8, 12, 16};
    for (int dm = 0; dm + 6 <= window; ++dm) {
        OmegaDegree od;
        od.degree = dm + 6;
        std::vector<Polynomial> imgs;
        detail::weighted_exponents(ddeg, dm, [&](const std::vector<std::uint32_t>& e) {
            // c4 = w4^2, c8 = w8^2 in the lattice; the chart reads c6 as w6^2
            std::string m = detail::product_label({"w4", "w8", "c6"}, {2 * e[0], 2 * e[2], e[1]});
            Polynomial f = m.empty() ? v1w8 : v1w8 * parse_polynomial(m, omega);
            if (f.is_zero()) od.all_nonzero = false;
            imgs.push_back(f);
            std::vector<std::uint32_t> ce{2 * e[0], 2 * e[1], 0, 2 * e[2] + 1};
            const auto& sig = *ahss.chart().generators;
            std::string cls = monomial_to_string(Monomial(ce, sig), sig);
            int s = 8 + dm;
            if (s <= ahss.reliable_s()) {
                od.chart_checked = true;
                if (!ahss.permanent_cycle_check("v1*" + cls).permanent()) od.chart_permanent = false;
            }
        });
        if (imgs.empty()) continue;
        od.count = imgs.size();
        std::map<std::string, std::size_t> mono;
        for (const auto& f : imgs)
            for (const auto& [m, c] : f.terms()) mono.emplace(monomial_to_string(m, *omega), mono.size());
        FpMatrix M(2, imgs.size(), mono.size());
        for (std::size_t i = 0; i < imgs.size(); ++i)
            for (const auto& [m, c] : imgs[i].terms()) M.set(i, mono.at(monomial_to_string(m, *omega)), c.fp_value());
        od.rank = rank(M);
        out.degrees.push_back(od);
    }
    return out;
}

}  // namespace chowcheck
