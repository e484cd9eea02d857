#pragma once

// Exact linear algebra over F_p, Q, Z and Z_(p): row reduction, kernels,
// saturated integer kernels, lattice membership with minimal p-power scaling,
// and local Smith invariants.  Everything is dense; no floating point.

#include "polynomial.hpp"
#include "scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chowcheck {

// ---------------------------------------------------------------------------
// F_p

struct FpMatrix {
    unsigned p = 2;
    std::size_t rows = 0, cols = 0;
    std::vector<std::int32_t> a;

    FpMatrix() = default;
    FpMatrix(unsigned prime, std::size_t r, std::size_t c) : p(prime), rows(r), cols(c), a(r * c, 0) {}

    std::int32_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::int32_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    void set(std::size_t i, std::size_t j, std::int64_t v) {
        v %= static_cast<std::int64_t>(p);
        at(i, j) = static_cast<std::int32_t>(v < 0 ? v + p : v);
    }

    static FpMatrix from_rows(unsigned prime, std::size_t cols, const std::vector<std::vector<std::int32_t>>& rs) {
        FpMatrix m(prime, rs.size(), cols);
        for (std::size_t i = 0; i < rs.size(); ++i) {
            if (rs[i].size() != cols) throw std::invalid_argument("FpMatrix: ragged rows");
            for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rs[i][j]);
        }
        return m;
    }
};

/// In-place reduced row echelon form; returns the pivot column of each nonzero row.
inline std::vector<std::size_t> rref(FpMatrix& m) {
    const auto p = static_cast<std::int32_t>(m.p);
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t piv = r;
        while (piv < m.rows && m.at(piv, c) == 0) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        auto inv = static_cast<std::int32_t>(Scalar::inverse_mod(m.at(r, c), p));
        std::int32_t* row = &m.a[r * m.cols];
        if (inv != 1)
            for (std::size_t j = c; j < m.cols; ++j) row[j] = row[j] * inv % p;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r) continue;
            std::int32_t f = m.at(i, c);
            if (!f) continue;
            std::int32_t* other = &m.a[i * m.cols];
            std::int32_t mult = p - f;
            for (std::size_t j = c; j < m.cols; ++j)
                if (row[j]) other[j] = (other[j] + mult * row[j]) % p;
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(FpMatrix m) { return rref(m).size(); }

/// Basis of the right null space {x : m x = 0}.
inline std::vector<std::vector<std::int32_t>> kernel(FpMatrix m) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<std::int32_t>> basis;
    const auto p = static_cast<std::int32_t>(m.p);
    for (std::size_t free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<std::int32_t> v(m.cols, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            std::int32_t x = m.at(r, free);
            v[pivots[r]] = x ? p - x : 0;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Row space basis in reduced echelon form.
inline std::vector<std::vector<std::int32_t>> row_basis(unsigned p, std::size_t cols,
                                                        const std::vector<std::vector<std::int32_t>>& rows) {
    FpMatrix m = FpMatrix::from_rows(p, cols, rows);
    auto piv = rref(m);
    std::vector<std::vector<std::int32_t>> out;
    for (std::size_t r = 0; r < piv.size(); ++r) out.emplace_back(m.a.begin() + r * cols, m.a.begin() + (r + 1) * cols);
    return out;
}

// ---------------------------------------------------------------------------
// Q

using QVec = std::vector<Rational>;
using QRows = std::vector<QVec>;

inline std::vector<std::size_t> rref(QRows& m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[r]);
        Rational inv = 1 / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (m[r][j] != 0) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(QRows m, std::size_t cols) { return rref(m, cols).size(); }

inline QRows kernel(QRows m, std::size_t cols) {
    auto pivots = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    QRows basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        QVec v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Unique coefficients c with sum_i c_i * basis[i] == v, when v lies in the
/// span of the (linearly independent) basis vectors.
inline std::optional<QVec> solve_in_span(const QRows& basis, const QVec& v) {
    const std::size_t n = v.size(), r = basis.size();
    // columns: basis vectors, then v
    QRows aug(n, QVec(r + 1, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < r; ++j) aug[i][j] = basis[j].at(i);
        aug[i][r] = v[i];
    }
    auto piv = rref(aug, r + 1);
    if (!piv.empty() && piv.back() == r) return std::nullopt;
    if (piv.size() != r) throw std::invalid_argument("solve_in_span: basis vectors are dependent");
    QVec c(r, Rational(0));
    for (std::size_t k = 0; k < piv.size(); ++k) c[piv[k]] = aug[k][r];
    return c;
}

// ---------------------------------------------------------------------------
// Z

using ZVec = std::vector<BigInt>;
using ZRows = std::vector<ZVec>;

inline BigInt gcd_big(BigInt a, BigInt b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        BigInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

/// Scales a rational vector to a primitive integer vector (positive leading entry).
inline ZVec primitive(const QVec& v) {
    BigInt lcm = 1;
    for (const auto& x : v) {
        BigInt d = boost::multiprecision::denominator(x);
        lcm = lcm / gcd_big(lcm, d) * d;
    }
    ZVec out;
    BigInt g = 0;
    for (const auto& x : v) {
        out.push_back(BigInt(x * lcm));
        g = gcd_big(g, out.back());
    }
    if (g == 0) return out;
    bool flip = false;
    for (const auto& x : out)
        if (x != 0) {
            flip = x < 0;
            break;
        }
    for (auto& x : out) {
        x /= g;
        if (flip) x = -x;
    }
    return out;
}

namespace detail {
// row_i <- a*row_i + b*row_j ; row_j <- c*row_i + d*row_j  (ad - bc = +-1)
inline void combine(ZVec& ri, ZVec& rj, const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d) {
    for (std::size_t k = 0; k < ri.size(); ++k) {
        BigInt x = ri[k], y = rj[k];
        ri[k] = a * x + b * y;
        rj[k] = c * x + d * y;
    }
}
inline void ext_gcd(const BigInt& a, const BigInt& b, BigInt& g, BigInt& s, BigInt& t) {
    BigInt old_r = a, r = b, old_s = 1, s1 = 0, old_t = 0, t1 = 1;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s1;
        old_s = s1;
        s1 = tmp;
        tmp = old_t - q * t1;
        old_t = t1;
        t1 = tmp;
    }
    g = old_r;
    s = old_s;
    t = old_t;
    if (g < 0) {
        g = -g;
        s = -s;
        t = -t;
    }
}
}  // namespace detail

/// Row Hermite normal form of the lattice spanned by the given rows (zero rows dropped).
inline ZRows hermite_rows(ZRows m) {
    if (m.empty()) return m;
    const std::size_t cols = m.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            if (m[i][c] == 0) continue;
            if (m[r][c] == 0) {
                std::swap(m[r], m[i]);
                continue;
            }
            BigInt g, s, t;
            detail::ext_gcd(m[r][c], m[i][c], g, s, t);
            BigInt u = -m[i][c] / g, v = m[r][c] / g;
            detail::combine(m[r], m[i], s, t, u, v);
        }
        if (m[r][c] == 0) continue;
        if (m[r][c] < 0)
            for (auto& x : m[r]) x = -x;
        for (std::size_t i = 0; i < r; ++i) {
            BigInt q = m[i][c] / m[r][c];
            if (m[i][c] - q * m[r][c] < 0) q -= 1;
            if (q != 0)
                for (std::size_t k = 0; k < cols; ++k) m[i][k] -= q * m[r][k];
        }
        ++r;
    }
    m.resize(r);
    return m;
}

/// Z-basis (row Hermite form) of the saturated integer kernel {x in Z^n : M x = 0}.
inline ZRows integer_kernel(const ZRows& rows, std::size_t cols) {
    // unimodular row reduction of [M^T | I]; rows whose M^T part vanishes span the kernel
    const std::size_t m = rows.size();
    ZRows aug(cols, ZVec(m + cols, BigInt(0)));
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = 0; j < m; ++j) aug[i][j] = rows[j].at(i);
        aug[i][m + i] = 1;
    }
    // Euclidean elimination with the smallest pivot first keeps the entries small
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < cols; ++c) {
        for (;;) {
            std::size_t best = cols;
            for (std::size_t i = r; i < cols; ++i)
                if (aug[i][c] != 0 && (best == cols || abs(aug[i][c]) < abs(aug[best][c]))) best = i;
            if (best == cols) break;
            std::swap(aug[r], aug[best]);
            bool done = true;
            for (std::size_t i = r + 1; i < cols; ++i) {
                if (aug[i][c] == 0) continue;
                BigInt q = aug[i][c] / aug[r][c];
                for (std::size_t k = c; k < m + cols; ++k)
                    if (aug[r][k] != 0) aug[i][k] -= q * aug[r][k];
                if (aug[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (r < cols && aug[r][c] != 0) ++r;
    }
    ZRows ker;
    for (std::size_t i = r; i < cols; ++i) ker.emplace_back(aug[i].begin() + m, aug[i].end());
    return hermite_rows(std::move(ker));
}

/// Smith invariants of an integer matrix localized at p: the p-valuations of the
/// nonzero elementary divisors, computed exactly in Z/p^K (K large enough that
/// p^K exceeds every torsion order that occurs here).
struct LocalSmith {
    std::size_t rank = 0;               // number of divisors nonzero mod p^K
    std::vector<unsigned> valuations;   // sorted ascending, one per nonzero divisor
};

inline LocalSmith local_smith(const ZRows& rows, std::size_t cols, unsigned p) {
    const unsigned K = p == 2 ? 30 : p == 3 ? 19 : p == 5 ? 13 : 10;
    std::int64_t mod = 1;
    for (unsigned i = 0; i < K; ++i) mod *= p;
    const std::size_t n = rows.size();
    std::vector<std::int64_t> a(n * cols);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            BigInt x = rows[i][j] % mod;
            if (x < 0) x += mod;
            a[i * cols + j] = static_cast<std::int64_t>(x);
        }
    auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& { return a[i * cols + j]; };
    auto val = [&](std::int64_t x) {
        unsigned v = 0;
        while (x % p == 0 && v < K) {
            x /= p;
            ++v;
        }
        return v;
    };
    auto inv_unit = [&](std::int64_t u) {
        // Newton iteration for the inverse of a unit modulo p^K
        std::int64_t x = Scalar::inverse_mod(u % p, p);
        for (unsigned prec = 1; prec < K; prec *= 2) {
            __int128 t = (__int128)u * x % mod;
            t = (2 - t) % mod;
            if (t < 0) t += mod;
            x = static_cast<std::int64_t>((__int128)x * t % mod);
        }
        return x;
    };
    LocalSmith out;
    std::size_t r = 0;
    std::vector<std::size_t> colperm(cols);
    std::iota(colperm.begin(), colperm.end(), 0);
    while (r < n && r < cols) {
        // pivot of minimal valuation in the remaining block
        unsigned best = K;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = r; i < n && best > 0; ++i)
            for (std::size_t j = r; j < cols; ++j) {
                if (at(i, j) == 0) continue;
                unsigned v = val(at(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        if (best == K) break;
        for (std::size_t j = 0; j < cols; ++j) std::swap(at(r, j), at(bi, j));
        for (std::size_t i = 0; i < n; ++i) std::swap(at(i, r), at(i, bj));
        std::int64_t piv = at(r, r), pk = 1;
        for (unsigned k = 0; k < best; ++k) pk *= p;
        std::int64_t unit_inv = inv_unit(piv / pk);
        // clear column r below and row r to the right; every entry is divisible by p^best
        for (std::size_t i = r + 1; i < n; ++i) {
            if (at(i, r) == 0) continue;
            std::int64_t f = static_cast<std::int64_t>((__int128)(at(i, r) / pk) * unit_inv % mod);
            for (std::size_t j = r; j < cols; ++j) {
                __int128 x = at(i, j) - (__int128)f * at(r, j) % mod;
                x %= mod;
                if (x < 0) x += mod;
                at(i, j) = static_cast<std::int64_t>(x);
            }
        }
        for (std::size_t j = r + 1; j < cols; ++j) at(r, j) = 0;
        out.valuations.push_back(best);
        ++r;
    }
    out.rank = out.valuations.size();
    std::sort(out.valuations.begin(), out.valuations.end());
    return out;
}

// ---------------------------------------------------------------------------
// Domain-tagged matrices and submodules

/// Dense exact matrix; entries are stored as rationals and must lie in the domain.
class ExactMatrix {
public:
    ExactMatrix(Domain d, std::size_t rows, std::size_t cols)
        : domain_(d), rows_(rows), cols_(cols), a_(rows * cols, Rational(0)) {}

    static ExactMatrix from_rows(Domain d, const std::vector<std::vector<std::int64_t>>& rs) {
        std::size_t cols = rs.empty() ? 0 : rs.front().size();
        ExactMatrix m(d, rs.size(), cols);
        for (std::size_t i = 0; i < rs.size(); ++i) {
            if (rs[i].size() != cols) throw std::invalid_argument("ExactMatrix: ragged rows");
            for (std::size_t j = 0; j < cols; ++j) m.set(i, j, Scalar(d, rs[i][j]));
        }
        return m;
    }

    const Domain& domain() const { return domain_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Scalar get(std::size_t i, std::size_t j) const { return Scalar(domain_, a_.at(i * cols_ + j)); }
    void set(std::size_t i, std::size_t j, const Scalar& s) {
        if (s.domain() != domain_) throw std::invalid_argument("ExactMatrix: entry domain mismatch");
        a_.at(i * cols_ + j) = s.to_rational();
    }
    const Rational& raw(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    FpMatrix to_fp() const {
        FpMatrix m(domain_.p, rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m.set(i, j, Scalar(domain_, raw(i, j)).fp_value());
        return m;
    }
    QRows to_q() const {
        QRows m(rows_, QVec(cols_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m[i][j] = raw(i, j);
        return m;
    }
    /// Integer rows; rational entries are cleared row-wise by their denominators.
    ZRows to_z() const {
        ZRows m;
        for (const auto& row : to_q()) {
            BigInt lcm = 1;
            for (const auto& x : row) {
                BigInt d = boost::multiprecision::denominator(x);
                lcm = lcm / gcd_big(lcm, d) * d;
            }
            ZVec z;
            for (const auto& x : row) z.push_back(BigInt(x * lcm));
            m.push_back(std::move(z));
        }
        return m;
    }

private:
    Domain domain_;
    std::size_t rows_, cols_;
    std::vector<Rational> a_;
};

/// A submodule of a coordinate module, given by independent spanning vectors
/// (a lattice basis in Hermite form over Z and Z_(p)).  `ambient` optionally
/// names the coordinates.
struct SubmoduleBasis {
    Domain domain;
    std::size_t dimension = 0;
    std::vector<Monomial> ambient;
    std::vector<std::vector<Rational>> vectors;

    std::size_t rank() const { return vectors.size(); }

    std::vector<Polynomial> as_polynomials(const SignaturePtr& sig) const {
        std::vector<Polynomial> out;
        for (const auto& v : vectors) {
            std::vector<Scalar> c;
            for (const auto& x : v) c.emplace_back(sig->domain(), x);
            out.push_back(from_coordinates(sig, ambient, c));
        }
        return out;
    }
};

inline SubmoduleBasis kernel(const ExactMatrix& m) {
    SubmoduleBasis out{m.domain(), m.cols(), {}, {}};
    switch (m.domain().kind) {
    case DomainKind::Fp:
        for (const auto& v : kernel(m.to_fp())) {
            std::vector<Rational> q(v.begin(), v.end());
            out.vectors.push_back(std::move(q));
        }
        break;
    case DomainKind::Rational:
        out.vectors = kernel(m.to_q(), m.cols());
        break;
    case DomainKind::Integer:
    case DomainKind::Local:
        for (const auto& v : integer_kernel(m.to_z(), m.cols())) {
            std::vector<Rational> q(v.begin(), v.end());
            out.vectors.push_back(std::move(q));
        }
        break;
    }
    return out;
}

/// Submodule spanned by arbitrary vectors: reduced to an echelon basis over a
/// field, or to the Hermite basis of the integer span over Z / Z_(p).
inline SubmoduleBasis span(Domain d, std::size_t dimension, const std::vector<std::vector<Rational>>& gens,
                           std::vector<Monomial> ambient = {}) {
    SubmoduleBasis out{d, dimension, std::move(ambient), {}};
    if (gens.empty()) return out;
    switch (d.kind) {
    case DomainKind::Fp: {
        std::vector<std::vector<std::int32_t>> rows;
        for (const auto& g : gens) {
            std::vector<std::int32_t> r;
            for (const auto& x : g) r.push_back(static_cast<std::int32_t>(Scalar(d, x).fp_value()));
            rows.push_back(std::move(r));
        }
        for (const auto& r : row_basis(d.p, dimension, rows)) out.vectors.emplace_back(r.begin(), r.end());
        break;
    }
    case DomainKind::Rational: {
        QRows m = gens;
        auto piv = rref(m, dimension);
        m.resize(piv.size());
        out.vectors = std::move(m);
        break;
    }
    case DomainKind::Integer:
    case DomainKind::Local: {
        ZRows z;
        for (const auto& g : gens) {
            // Z_(p) generators may carry unit denominators; scaling by a unit keeps the span
            ZVec r;
            BigInt lcm = 1;
            for (const auto& x : g) {
                BigInt den = boost::multiprecision::denominator(x);
                if (den != 1 && d.kind == DomainKind::Integer)
                    throw std::invalid_argument("span: non-integral generator over Z");
                lcm = lcm / gcd_big(lcm, den) * den;
            }
            for (const auto& x : g) r.push_back(BigInt(x * lcm));
            z.push_back(std::move(r));
        }
        for (const auto& r : hermite_rows(std::move(z))) out.vectors.emplace_back(r.begin(), r.end());
        break;
    }
    }
    return out;
}

enum class Membership { Inside, Outside, InsideAfterScaling };

struct MembershipResult {
    Membership verdict = Membership::Outside;
    unsigned k = 0;  // minimal p-power with p^k v in the span (InsideAfterScaling), 0 when Inside
};

inline std::string to_string(Membership m) {
    switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Outside: return "outside";
    case Membership::InsideAfterScaling: return "inside-after-scaling";
    }
    return "?";
}

/// Decides v against the span s.  Over Z (with prime p) and Z_(p) the minimal
/// k with p^k v in the span is reported.
inline MembershipResult membership(const std::vector<Rational>& v, const SubmoduleBasis& s, unsigned p = 0) {
    if (v.size() != s.dimension) throw std::invalid_argument("membership: dimension mismatch");
    bool zero = std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
    if (zero) return {Membership::Inside, 0};
    if (s.domain.kind == DomainKind::Fp) {
        std::vector<std::vector<std::int32_t>> rows;
        for (const auto& b : s.vectors) {
            std::vector<std::int32_t> r;
            for (const auto& x : b) r.push_back(static_cast<std::int32_t>(Scalar(s.domain, x).fp_value()));
            rows.push_back(std::move(r));
        }
        std::size_t before = rows.size();
        std::vector<std::int32_t> r;
        for (const auto& x : v) r.push_back(static_cast<std::int32_t>(Scalar(s.domain, x).fp_value()));
        rows.push_back(std::move(r));
        bool inside = rank(FpMatrix::from_rows(s.domain.p, s.dimension, rows)) == before;
        return {inside ? Membership::Inside : Membership::Outside, 0};
    }
    auto coeffs = solve_in_span(s.vectors, v);
    if (!coeffs) return {Membership::Outside, 0};
    if (s.domain.kind == DomainKind::Rational) return {Membership::Inside, 0};
    if (s.domain.kind == DomainKind::Local) p = s.domain.p;
    if (p == 0) {
        bool integral = std::all_of(coeffs->begin(), coeffs->end(),
                                    [](const Rational& c) { return boost::multiprecision::denominator(c) == 1; });
        return {integral ? Membership::Inside : Membership::Outside, 0};
    }
    unsigned k = 0;
    for (const auto& c : *coeffs) {
        BigInt den = boost::multiprecision::denominator(c);
        unsigned vp = 0;
        while (den % p == 0) {
            den /= p;
            ++vp;
        }
        // over Z, a denominator with another prime factor is never cleared by p^k
        if (s.domain.kind == DomainKind::Integer && den != 1) return {Membership::Outside, 0};
        k = std::max(k, vp);
    }
    return {k == 0 ? Membership::Inside : Membership::InsideAfterScaling, k};
}

struct RankReport {
    std::size_t rank_q = 0;
    std::size_t rank_fp = 0;
    std::vector<unsigned> valuations;  // p-valuations of the nonzero elementary divisors, ascending
};

inline RankReport rank_per_domain(const ExactMatrix& m, unsigned p) {
    if (m.domain().kind != DomainKind::Integer) throw std::invalid_argument("rank_per_domain expects an integer matrix");
    RankReport r;
    r.rank_q = rank(m.to_q(), m.cols());
    FpMatrix f(p, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            BigInt x = boost::multiprecision::numerator(m.raw(i, j)) % p;
            f.set(i, j, static_cast<std::int64_t>(x));
        }
    r.rank_fp = rank(f);
    auto ls = local_smith(m.to_z(), m.cols(), p);
    if (ls.rank != r.rank_q) throw std::runtime_error("rank_per_domain: elementary divisor beyond local precision");
    r.valuations = ls.valuations;
    return r;
}

}  // namespace chowcheck
