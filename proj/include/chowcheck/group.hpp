#pragma once

// Finite groups of matrices acting on the generators of a polynomial algebra,
// and per-degree invariant subspaces computed as kernels of (g - 1).

#include "linalg.hpp"
#include "polynomial.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace chowcheck {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Column j of a generating matrix holds the coordinates of g(x_j).
struct GroupAction {
    std::string name;
    SignaturePtr signature;           // all generators share one degree
    std::vector<IntMatrix> generators;
    unsigned modulus = 0;             // 0: integer matrices; p: matrices over F_p

    std::size_t rank() const { return signature->size(); }
    int generator_degree() const { return signature->generator(0).degree; }
};

namespace detail {

inline IntMatrix identity(std::size_t n) {
    IntMatrix m(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b, unsigned modulus) {
    const std::size_t n = a.size();
    IntMatrix c(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (!a[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    if (modulus)
        for (auto& row : c)
            for (auto& x : row) x = ((x % modulus) + modulus) % modulus;
    return c;
}

inline Rational determinant(const IntMatrix& m) {
    const std::size_t n = m.size();
    QRows a(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            Rational f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

}  // namespace detail

inline void validate(const GroupAction& action) {
    const std::size_t n = action.rank();
    if (n == 0) throw std::invalid_argument("group action on zero generators");
    for (const auto& g : action.signature->generators())
        if (g.degree != action.generator_degree() || g.exterior)
            throw std::invalid_argument("group action generators must be polynomial of one degree");
    for (const auto& m : action.generators) {
        if (m.size() != n) throw std::invalid_argument("generating matrix has wrong size");
        for (const auto& row : m)
            if (row.size() != n) throw std::invalid_argument("generating matrix is not square");
        Rational det = detail::determinant(m);
        bool invertible = action.modulus ? BigInt(boost::multiprecision::numerator(det)) % action.modulus != 0
                                         : (det == 1 || det == -1);
        if (!invertible) throw std::invalid_argument("generating matrix is not invertible over its domain");
    }
}

/// Closure of the generators under multiplication.
inline std::vector<IntMatrix> enumerate_group(const GroupAction& action, std::size_t bound = 1000000) {
    if (bound < 1) throw std::invalid_argument("enumerate_group: bound must be >= 1");
    std::set<IntMatrix> seen;
    std::vector<IntMatrix> elements{detail::identity(action.rank())};
    seen.insert(elements.front());
    for (std::size_t head = 0; head < elements.size(); ++head) {
        for (const auto& g : action.generators) {
            IntMatrix h = detail::multiply(g, elements[head], action.modulus);
            if (seen.insert(h).second) {
                if (elements.size() >= bound)
                    throw std::runtime_error("group closure exceeds bound " + std::to_string(bound));
                elements.push_back(std::move(h));
            }
        }
    }
    return elements;
}

/// Signed permutations acting on Z[t_1..t_k], |t_i| = 2.
inline GroupAction build_weyl_so(int k) {
    if (k < 1) throw std::invalid_argument("build_weyl_so: k >= 1");
    std::vector<std::string> names;
    for (int i = 1; i <= k; ++i) names.push_back("t" + std::to_string(i));
    GroupAction a{"so:" + std::to_string(k), AlgebraSignature::uniform(names, 2, Domain::integers()), {}, 0};
    const auto n = static_cast<std::size_t>(k);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        IntMatrix s = detail::identity(n);
        s[i][i] = s[i + 1][i + 1] = 0;
        s[i][i + 1] = s[i + 1][i] = 1;
        a.generators.push_back(std::move(s));
    }
    IntMatrix neg = detail::identity(n);
    neg[n - 1][n - 1] = -1;
    a.generators.push_back(std::move(neg));
    return a;
}

/// The same signed-permutation group on the Spin weight lattice with basis
/// (t_1, ..., t_{k-1}, g), 2g = t_1 + ... + t_k.
inline GroupAction build_weyl_spin(int k) {
    if (k < 2) throw std::invalid_argument("build_weyl_spin: k >= 2");
    const auto n = static_cast<std::size_t>(k);
    GroupAction so = build_weyl_so(k);
    // B: lattice basis in t-coordinates (columns); B^{-1} in closed form
    QRows B(n, QVec(n, Rational(0))), Binv(n, QVec(n, Rational(0)));
    for (std::size_t i = 0; i + 1 < n; ++i) B[i][i] = 1;
    for (std::size_t i = 0; i < n; ++i) B[i][n - 1] = Rational(1, 2);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Binv[i][i] = 1;
        Binv[i][n - 1] = -1;
    }
    Binv[n - 1][n - 1] = 2;
    std::vector<std::string> names;
    for (int i = 1; i < k; ++i) names.push_back("t" + std::to_string(i));
    names.push_back("g");
    GroupAction a{"spin:" + std::to_string(k), AlgebraSignature::uniform(names, 2, Domain::integers()), {}, 0};
    for (const auto& m : so.generators) {
        IntMatrix out(n, std::vector<std::int64_t>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Rational x = 0;
                for (std::size_t a1 = 0; a1 < n; ++a1)
                    for (std::size_t b1 = 0; b1 < n; ++b1) x += Binv[i][a1] * Rational(m[a1][b1]) * B[b1][j];
                if (boost::multiprecision::denominator(x) != 1)
                    throw std::logic_error("build_weyl_spin: non-integral matrix after base change");
                out[i][j] = static_cast<std::int64_t>(boost::multiprecision::numerator(x));
            }
        a.generators.push_back(std::move(out));
    }
    return a;
}

/// GL_h(F_2) on F_2[x_1..x_h], |x_i| = 1, generated by elementary transvections.
inline GroupAction build_gl(int h, unsigned p = 2) {
    if (p != 2) throw std::invalid_argument("build_gl: only p = 2 is supported");
    if (h < 1 || h > 4) throw std::invalid_argument("build_gl: rank must be in 1..4");
    const auto n = static_cast<std::size_t>(h);
    std::vector<std::string> names;
    for (int i = 1; i <= h; ++i) names.push_back("x" + std::to_string(i));
    GroupAction a{"gl:" + std::to_string(h), AlgebraSignature::uniform(names, 1, Domain::fp(2)), {}, 2};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        IntMatrix up = detail::identity(n), down = detail::identity(n);
        up[i][i + 1] = 1;
        down[i + 1][i] = 1;
        a.generators.push_back(std::move(up));
        a.generators.push_back(std::move(down));
    }
    if (a.generators.empty()) a.generators.push_back(detail::identity(n));
    return a;
}

/// Weyl group of F_4 generated by the simple reflections, written in the basis
/// of simple roots (Bourbaki: e2-e3, e3-e4, e4, (e1-e2-e3-e4)/2).
inline GroupAction build_weyl_f4() {
    const QRows roots = {{0, 1, -1, 0}, {0, 0, 1, -1}, {0, 0, 0, 1},
                         {Rational(1, 2), Rational(-1, 2), Rational(-1, 2), Rational(-1, 2)}};
    auto dot = [](const QVec& a, const QVec& b) {
        Rational s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    GroupAction a{"f4", AlgebraSignature::uniform({"a1", "a2", "a3", "a4"}, 2, Domain::integers()), {}, 0};
    for (std::size_t i = 0; i < 4; ++i) {
        IntMatrix s = detail::identity(4);
        for (std::size_t j = 0; j < 4; ++j) {
            // s_i(a_j) = a_j - <a_j, a_i^vee> a_i
            Rational c = 2 * dot(roots[j], roots[i]) / dot(roots[i], roots[i]);
            if (boost::multiprecision::denominator(c) != 1) throw std::logic_error("F4 Cartan entry not integral");
            s[i][j] -= static_cast<std::int64_t>(boost::multiprecision::numerator(c));
        }
        a.generators.push_back(std::move(s));
    }
    return a;
}

/// Parses a group id of the form so:K, spin:K, gl:H or f4.
inline GroupAction build_group(const std::string& id) {
    auto colon = id.find(':');
    std::string kind = id.substr(0, colon);
    int arg = colon == std::string::npos ? 0 : std::stoi(id.substr(colon + 1));
    if (kind == "so") return build_weyl_so(arg);
    if (kind == "spin") return build_weyl_spin(arg);
    if (kind == "gl") return build_gl(arg);
    if (kind == "f4") return build_weyl_f4();
    throw std::invalid_argument("unknown group '" + id + "'");
}

// ---------------------------------------------------------------------------
// Action on degree slices

/// Matrices of each group generator on the monomial basis of every degree
/// slice, built degree by degree: g(m) = g(m / x_i) * g(x_i).  Columns are
/// sparse; entries are int64 (reduced mod p when a modulus is given).
class SliceActions {
public:
    using Column = std::vector<std::pair<std::uint32_t, std::int64_t>>;

    explicit SliceActions(const GroupAction& action, unsigned modulus = 0)
        : action_(action), modulus_(modulus ? modulus : action.modulus) {
        validate(action_);
    }

    const std::vector<Monomial>& basis(int degree) {
        ensure(degree);
        return slices_.at(degree).basis;
    }
    /// Column j: coordinates of g(basis[j]).
    const std::vector<Column>& columns(std::size_t gen, int degree) {
        ensure(degree);
        return slices_.at(degree).mats.at(gen);
    }

private:
    struct Slice {
        std::vector<Monomial> basis;
        std::map<std::vector<std::uint32_t>, std::uint32_t> index;
        std::vector<std::vector<Column>> mats;  // mats[g][col]
    };

    std::int64_t mul_add(std::int64_t acc, std::int64_t a, std::int64_t b) const {
        std::int64_t prod, sum;
        if (__builtin_mul_overflow(a, b, &prod) || __builtin_add_overflow(acc, prod, &sum))
            throw std::overflow_error("group action coefficients exceed 64 bits");
        return modulus_ ? sum % static_cast<std::int64_t>(modulus_) : sum;
    }

    void ensure(int degree) {
        if (slices_.count(degree)) return;
        const int step = action_.generator_degree();
        const auto& sig = *action_.signature;
        Slice s;
        s.basis = degree_slice(sig, degree);
        for (std::size_t i = 0; i < s.basis.size(); ++i) s.index.emplace(s.basis[i].exps, static_cast<std::uint32_t>(i));
        const std::size_t n = s.basis.size(), k = sig.size();
        s.mats.assign(action_.generators.size(), std::vector<Column>(n));
        if (degree == 0 && n == 1) {
            for (auto& m : s.mats) m[0] = {{0, 1}};
        } else if (n > 0) {
            ensure(degree - step);
            const Slice& prev = slices_.at(degree - step);
            std::vector<std::int64_t> acc(n, 0);
            std::vector<bool> touched(n, false);
            std::vector<std::uint32_t> touched_list;
            for (std::size_t j = 0; j < n; ++j) {
                const auto& e = s.basis[j].exps;
                std::size_t var = 0;
                while (e[var] == 0) ++var;
                auto lower = e;
                --lower[var];
                std::uint32_t jp = prev.index.at(lower);
                for (std::size_t g = 0; g < action_.generators.size(); ++g) {
                    const auto& M = action_.generators[g];
                    for (const auto& [r, val] : prev.mats[g][jp]) {
                        for (std::size_t l = 0; l < k; ++l) {
                            if (M[l][var] == 0) continue;
                            auto up = prev.basis[r].exps;
                            ++up[l];
                            std::uint32_t row = s.index.at(up);
                            if (!touched[row]) {
                                touched[row] = true;
                                touched_list.push_back(row);
                            }
                            acc[row] = mul_add(acc[row], val, M[l][var]);
                        }
                    }
                    std::sort(touched_list.begin(), touched_list.end());
                    Column col;
                    for (auto row : touched_list) {
                        if (acc[row]) col.emplace_back(row, acc[row]);
                        acc[row] = 0;
                        touched[row] = false;
                    }
                    touched_list.clear();
                    s.mats[g][j] = std::move(col);
                }
            }
        }
        slices_.emplace(degree, std::move(s));
    }

    GroupAction action_;
    unsigned modulus_;
    std::map<int, Slice> slices_;
};

/// Invariants in one topological degree: the common kernel of (g - 1) over the
/// generating matrices.  Over Z and Z_(p) this is the saturated lattice.
inline SubmoduleBasis invariant_basis(SliceActions& slices, const GroupAction& action, int degree, Domain domain,
                                      std::size_t max_slice = 4000) {
    if (action.modulus && domain.kind != DomainKind::Fp)
        throw std::invalid_argument("mod-p action requires an F_p domain");
    const auto& basis = slices.basis(degree);
    const std::size_t n = basis.size();
    if (n > max_slice) throw std::runtime_error("degree slice too large (" + std::to_string(n) + " monomials)");
    SubmoduleBasis out{domain, n, basis, {}};
    if (n == 0) return out;
    if (domain.kind == DomainKind::Fp) {
        // progressive intersection keeps the working matrices small
        const auto p = static_cast<std::int64_t>(domain.p);
        auto red = [p](std::int64_t x) { return static_cast<std::int32_t>(((x % p) + p) % p); };
        std::vector<std::vector<std::int32_t>> current;  // basis of the running invariant subspace
        for (std::size_t g = 0; g < action.generators.size(); ++g) {
            const auto& cols = slices.columns(g, degree);
            if (g == 0) {
                FpMatrix A(domain.p, n, n);
                for (std::size_t j = 0; j < n; ++j) {
                    for (const auto& [i, v] : cols[j]) A.at(i, j) = red(v);
                    A.at(j, j) = red(A.at(j, j) - 1);
                }
                current = kernel(std::move(A));
                continue;
            }
            if (current.empty()) break;
            // (g - 1) applied to each running basis vector; kernel in those coordinates
            FpMatrix A(domain.p, n, current.size());
            for (std::size_t c = 0; c < current.size(); ++c) {
                std::vector<std::int64_t> img(n, 0);
                for (std::size_t j = 0; j < n; ++j) {
                    std::int64_t x = current[c][j];
                    if (!x) continue;
                    for (const auto& [i, v] : cols[j]) img[i] += red(v) * x;
                    img[j] -= x;
                }
                for (std::size_t i = 0; i < n; ++i) A.at(i, c) = red(img[i]);
            }
            auto ker = kernel(std::move(A));
            std::vector<std::vector<std::int32_t>> next;
            for (const auto& coeffs : ker) {
                std::vector<std::int64_t> v(n, 0);
                for (std::size_t c = 0; c < current.size(); ++c)
                    if (coeffs[c])
                        for (std::size_t j = 0; j < n; ++j) v[j] += static_cast<std::int64_t>(coeffs[c]) * current[c][j];
                std::vector<std::int32_t> r(n);
                for (std::size_t j = 0; j < n; ++j) r[j] = red(v[j]);
                next.push_back(std::move(r));
            }
            current = std::move(next);
        }
        for (const auto& r : row_basis(domain.p, n, current)) out.vectors.emplace_back(r.begin(), r.end());
        return out;
    }
    // Z, Z_(p), Q: stack all (g - 1) blocks
    ZRows stacked;
    for (std::size_t g = 0; g < action.generators.size(); ++g) {
        const auto& cols = slices.columns(g, degree);
        ZRows block(n, ZVec(n, BigInt(0)));
        for (std::size_t j = 0; j < n; ++j) {
            for (const auto& [i, v] : cols[j]) block[i][j] = v;
            block[j][j] -= 1;
        }
        for (auto& row : block) stacked.push_back(std::move(row));
    }
    if (domain.kind == DomainKind::Rational) {
        QRows q;
        for (const auto& r : stacked) q.emplace_back(r.begin(), r.end());
        QRows ker = kernel(std::move(q), n);
        for (auto& v : ker) {
            ZVec z = primitive(v);
            out.vectors.emplace_back(z.begin(), z.end());
        }
        return out;
    }
    for (const auto& r : integer_kernel(stacked, n)) out.vectors.emplace_back(r.begin(), r.end());
    return out;
}

inline SubmoduleBasis invariant_basis(const GroupAction& action, int degree, Domain domain) {
    SliceActions slices(action, domain.kind == DomainKind::Fp ? domain.p : 0);
    return invariant_basis(slices, action, degree, domain);
}

/// Invariant ranks in degrees 0..max_degree.
inline std::vector<std::size_t> poincare_series(const GroupAction& action, int max_degree, Domain domain) {
    SliceActions slices(action, domain.kind == DomainKind::Fp ? domain.p : 0);
    std::vector<std::size_t> ranks;
    for (int d = 0; d <= max_degree; ++d) ranks.push_back(invariant_basis(slices, action, d, domain).rank());
    return ranks;
}

/// Checks every element of a basis is fixed by every generator.
inline bool verify_invariance(const GroupAction& action, const SubmoduleBasis& basis) {
    SignaturePtr sig = action.signature->with_domain(basis.domain);
    for (const auto& f : basis.as_polynomials(sig)) {
        for (const auto& M : action.generators) {
            std::vector<std::optional<Polynomial>> images;
            for (std::size_t j = 0; j < action.rank(); ++j) {
                Polynomial img = Polynomial::zero(sig);
                for (std::size_t i = 0; i < action.rank(); ++i)
                    if (M[i][j]) img += Polynomial::generator(sig, i).scaled(M[i][j]);
                images.emplace_back(std::move(img));
            }
            if (!(substitute(f, images, sig) == f)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Subring membership

struct SubringDecision {
    bool inside = false;
    std::vector<std::vector<std::uint32_t>> exponents;  // generator-monomials of degree deg f
    std::vector<Rational> witness;                      // coefficients realizing f when inside
};

/// Whether homogeneous f is a polynomial in the given homogeneous generators.
inline SubringDecision subring_membership(const Polynomial& f, const std::vector<Polynomial>& gens,
                                          int degree_bound = 1 << 20) {
    SubringDecision out;
    if (!f.is_homogeneous()) throw std::invalid_argument("subring_membership: f must be homogeneous");
    if (f.is_zero()) {
        out.inside = true;
        return out;
    }
    const int d = f.degree();
    if (d > degree_bound) throw std::invalid_argument("subring_membership: degree above bound");
    std::vector<int> degs;
    for (const auto& g : gens) {
        if (!g.is_homogeneous() || g.is_zero()) throw std::invalid_argument("subring_membership: bad generator");
        degs.push_back(g.degree());
    }
    // enumerate exponent vectors with weighted degree d
    std::vector<std::uint32_t> e(gens.size(), 0);
    auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
        if (i == gens.size()) {
            if (remaining == 0) out.exponents.push_back(e);
            return;
        }
        for (int k = remaining / degs[i]; k >= 0; --k) {
            e[i] = static_cast<std::uint32_t>(k);
            self(self, i + 1, remaining - k * degs[i]);
        }
        e[i] = 0;
    };
    rec(rec, 0, d);
    const auto& sig = f.signature();
    std::vector<Polynomial> products;
    for (const auto& ex : out.exponents) {
        Polynomial p = Polynomial::one(sig);
        for (std::size_t i = 0; i < ex.size(); ++i)
            if (ex[i]) p *= gens[i].pow(ex[i]);
        products.push_back(std::move(p));
    }
    auto ambient = degree_slice(*sig, d);
    std::vector<std::vector<Rational>> cols;
    for (const auto& p : products) {
        std::vector<Rational> v;
        for (const auto& c : coordinates(p, ambient)) v.push_back(c.to_rational());
        cols.push_back(std::move(v));
    }
    std::vector<Rational> target;
    for (const auto& c : coordinates(f, ambient)) target.push_back(c.to_rational());
    const Domain dom = sig->domain();
    // solve sum_k c_k * cols[k] = target over the domain
    if (dom.kind == DomainKind::Fp) {
        const std::size_t n = ambient.size(), m = cols.size();
        FpMatrix A(dom.p, n, m + 1);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < m; ++k) A.set(i, k, Scalar(dom, cols[k][i]).fp_value());
            A.set(i, m, Scalar(dom, target[i]).fp_value());
        }
        auto piv = rref(A);
        out.inside = piv.empty() || piv.back() != m;
        if (out.inside) {
            out.witness.assign(m, Rational(0));
            for (std::size_t r = 0; r < piv.size(); ++r) out.witness[piv[r]] = A.at(r, m);
        }
        return out;
    }
    const std::size_t n = ambient.size(), m = cols.size();
    QRows A(n, QVec(m + 1, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) A[i][k] = cols[k][i];
        A[i][m] = target[i];
    }
    auto piv = rref(A, m + 1);
    bool solvable = piv.empty() || piv.back() != m;
    if (!solvable) return out;
    out.witness.assign(m, Rational(0));
    for (std::size_t r = 0; r < piv.size(); ++r) out.witness[piv[r]] = A[r][m];
    if (dom.kind == DomainKind::Rational) {
        out.inside = true;
        return out;
    }
    // over Z / Z_(p) the solution must be integral / p-integral; dependent
    // generator-monomials make this a lattice question
    std::vector<std::vector<Rational>> gens_q = cols;
    SubmoduleBasis lat = span(dom, n, gens_q);
    auto mres = membership(target, lat, dom.kind == DomainKind::Local ? dom.p : 0);
    out.inside = mres.verdict == Membership::Inside;
    return out;
}

}  // namespace chowcheck
