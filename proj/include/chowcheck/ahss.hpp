#pragma once

// Atiyah-Hirzebruch spectral sequence H^*(X; BP^*) => BP^*(X) driven by a
// chart, with only the differentials d(x) = v_i Q_i(x), applied for
// i = 1..vmax in order.
//
// Bidegree (s, t): s is the cohomological degree, t <= 0 the BP^* degree,
// |v_i| = -2(p^i - 1).  The E_2 term at (s, t) is L = (Z_(p)^F + (Z/p)^T)
// tensor (v-monomials of degree t).  Every differential lands in the torsion
// part and depends only on the reduction mod p, so a page is described by
//   W_k subset L/p   reductions of the d_1..d_k cycles,
//   B_k subset T     boundaries,
// and the cycle group is {x in L : x mod p in W_k}.

#include "chart.hpp"
#include "linalg.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace chowcheck {

using FpRows = std::vector<std::vector<std::int32_t>>;

struct BidegreeSummary {
    int s = 0, t = 0;
    std::size_t free_rank = 0;
    std::size_t torsion_dim = 0;  // dimension over F_p of the torsion part of E_infinity
    bool reliable = true;
};

/// An abelian p-local group: free rank plus cyclic torsion summands Z/p^e.
struct GroupRanks {
    std::size_t free_rank = 0;
    std::map<unsigned, std::size_t> torsion;  // exponent -> number of summands

    std::size_t torsion_count() const {
        std::size_t n = 0;
        for (const auto& [e, c] : torsion) n += c;
        return n;
    }
    GroupRanks& operator+=(const GroupRanks& o) {
        free_rank += o.free_rank;
        for (const auto& [e, c] : o.torsion) torsion[e] += c;
        return *this;
    }
    friend bool operator==(const GroupRanks&, const GroupRanks&) = default;
    std::string to_string() const {
        std::ostringstream out;
        out << "free " << free_rank;
        for (const auto& [e, c] : torsion) out << ", Z/p^" << e << " x" << c;
        return out.str();
    }
};

struct CollapseEntry {
    int degree = 0;  // total (topological) degree n; Chow degree n/2
    GroupRanks ranks;
    bool reliable = true;
};

class Ahss {
public:
    Ahss(const Chart& chart, unsigned vmax, int vdepth = -1) : chart_(chart), vmax_(vmax) {
        validate(chart_);
        if (vmax < 1) throw std::invalid_argument("ahss: vmax must be >= 1");
        if (chart_.shift(vmax) >= chart_.window)
            throw std::invalid_argument("ahss: chart window " + std::to_string(chart_.window) + " too small for v" +
                                        std::to_string(vmax));
        vdepth_ = vdepth >= 0 ? vdepth : vdeg(vmax);
    }

    const Chart& chart() const { return chart_; }
    unsigned vmax() const { return vmax_; }
    int vdeg(unsigned i) const { return chart_.shift(i) - 1; }  // |v_i| = -(2p^i - 2)
    int slack() const { return chart_.shift(vmax_); }
    int reliable_s() const { return chart_.window - slack(); }
    int reliable_collapse() const { return reliable_s() - vdepth_; }
    int vdepth() const { return vdepth_; }
    const std::set<std::pair<int, int>>& truncated() const { return truncated_; }

    /// v-monomials of BP-degree t, as exponent vectors (v_1..v_vmax).
    const std::vector<std::vector<std::uint32_t>>& vmonomials(int t) { return layout(0, t).vmon; }

    BidegreeSummary einf(int s, int t) {
        const auto& L = layout(s, t);
        const auto& W = cycles(s, t, vmax_);
        const auto& B = boundaries(s, t, vmax_);
        std::size_t nf = L.nfree * L.vmon.size();
        std::size_t wt = 0;
        for (const auto& r : W) wt += first_nonzero(r) >= nf;
        return {s, t, nf, wt - B.size(), s <= reliable_s()};
    }

    /// Dimension over F_p of W_k and B_k (page bookkeeping for tests and reports).
    std::pair<std::size_t, std::size_t> page_dims(int s, int t, unsigned k) {
        return {cycles(s, t, k).size(), boundaries(s, t, k).size()};
    }

    /// E_infinity at (s, t) modulo the images of v_1..v_vmax.
    GroupRanks collapse_bidegree(int s, int t) {
        const auto& L = layout(s, t);
        const std::size_t N = L.dim();
        if (N == 0) return {};
        Frame fr = frame(s, t);
        std::vector<ZVec> rel;
        auto add = [&](const ZVec& x) { rel.push_back(x); };
        for (const auto& b : boundaries(s, t, vmax_)) {
            ZVec x(N);
            for (std::size_t j = 0; j < N; ++j) x[j] = b[j];
            add(phi(fr, x, s, t));
        }
        for (unsigned i = 1; i <= vmax_; ++i) {
            int t2 = t + vdeg(i);
            if (t2 > 0 || layout(s, t2).dim() == 0) continue;
            Frame src = frame(s, t2);
            for (const auto& g : generators(src, s, t2)) add(phi(fr, times_v(i, s, t2, g), s, t));
        }
        const std::size_t cols = fr.rank();
        for (std::size_t l = 0; l < fr.tbasis.size(); ++l) {
            ZVec x(cols, BigInt(0));
            x[fr.free_pivots.size() + fr.nonpivots.size() + l] = chart_.p;
            rel.push_back(std::move(x));
        }
        GroupRanks out;
        if (rel.empty()) {
            out.free_rank = cols;
            return out;
        }
        auto sm = local_smith(rel, cols, chart_.p);
        out.free_rank = cols - sm.rank;
        for (auto v : sm.valuations)
            if (v > 0) ++out.torsion[v];
        return out;
    }

    CollapseEntry collapse(int n) {
        CollapseEntry e{n, {}, n <= reliable_collapse()};
        for (int s = std::max(n, 0); s <= n + vdepth_ && s <= chart_.window; ++s) e.ranks += collapse_bidegree(s, n - s);
        return e;
    }

    struct Permanence {
        bool cycle = false;     // survives every implemented differential
        bool nonzero = false;   // nonzero in E_infinity
        bool reliable = true;
        bool permanent() const { return cycle && nonzero; }
    };

    /// Expression: [integer '*'] (v_i['^'e] '*')* class-name, e.g. "2*w8", "v1*w8".
    Permanence permanent_cycle_check(const std::string& expr) {
        std::string rest = expr;
        auto strip = [](std::string s) {
            while (!s.empty() && s.front() == ' ') s.erase(s.begin());
            while (!s.empty() && s.back() == ' ') s.pop_back();
            return s;
        };
        rest = strip(rest);
        BigInt scalar = 1;
        std::vector<std::uint32_t> vexp(vmax_, 0);
        // leading integer
        std::size_t k = 0;
        while (k < rest.size() && std::isdigit(static_cast<unsigned char>(rest[k]))) ++k;
        if (k > 0) {
            if (k >= rest.size() || rest[k] != '*') throw std::invalid_argument("permanent_cycle_check: expected '*' after the scalar");
            scalar = BigInt(rest.substr(0, k));
            rest = strip(rest.substr(k + 1));
        }
        // leading v-factors
        for (;;) {
            if (rest.size() < 2 || rest[0] != 'v' || !std::isdigit(static_cast<unsigned char>(rest[1]))) break;
            std::size_t j = 1;
            while (j < rest.size() && std::isdigit(static_cast<unsigned char>(rest[j]))) ++j;
            unsigned i = static_cast<unsigned>(std::stoul(rest.substr(1, j - 1)));
            std::uint32_t e = 1;
            if (j < rest.size() && rest[j] == '^') {
                std::size_t q = j + 1;
                while (q < rest.size() && std::isdigit(static_cast<unsigned char>(rest[q]))) ++q;
                e = static_cast<std::uint32_t>(std::stoul(rest.substr(j + 1, q - j - 1)));
                j = q;
            }
            if (i < 1 || i > vmax_) throw std::invalid_argument("permanent_cycle_check: v" + std::to_string(i) + " out of range");
            if (j >= rest.size() || rest[j] != '*') break;  // no class after it
            vexp[i - 1] += e;
            rest = strip(rest.substr(j + 1));
        }
        std::size_t cls = chart_.find(rest);
        const auto& c = chart_.classes[cls];
        if (!c.integral()) throw std::invalid_argument("class " + rest + " has no integral lift");
        int t = 0;
        for (unsigned i = 1; i <= vmax_; ++i) t -= static_cast<int>(vexp[i - 1]) * vdeg(i);
        const int s = c.degree;
        const auto& L = layout(s, t);
        std::size_t idx = coord(L, cls, vexp);
        BigInt red = scalar % chart_.p;
        std::vector<std::int32_t> x(L.dim(), 0);
        x[idx] = static_cast<std::int32_t>(red);
        Permanence out;
        out.reliable = s <= reliable_s();
        out.cycle = in_span(cycles(s, t, vmax_), x, chart_.p);
        if (c.kind == ClassKind::Free)
            out.nonzero = scalar != 0;
        else
            out.nonzero = red != 0 && !in_span(boundaries(s, t, vmax_), x, chart_.p);
        return out;
    }

    const FpRows& cycles(int s, int t, unsigned k) {
        auto key = std::make_tuple(s, t, k);
        if (auto it = w_.find(key); it != w_.end()) return it->second;
        const auto& L = layout(s, t);
        const std::size_t N = L.dim();
        FpRows out;
        if (k == 0) {
            for (std::size_t j = 0; j < N; ++j) {
                std::vector<std::int32_t> e(N, 0);
                e[j] = 1;
                out.push_back(std::move(e));
            }
        } else {
            const FpRows prev = cycles(s, t, k - 1);
            const int s2 = s + chart_.shift(k), t2 = t - vdeg(k);
            if (s2 > chart_.window) {
                truncated_.insert({s, t});
                out = prev;
            } else if (prev.empty()) {
            } else {
                const FpRows Bt = boundaries(s2, t2, k - 1);
                const std::size_t N2 = layout(s2, t2).dim();
                // d_k must be well defined on E_k: D(B_{k-1}) inside B_{k-1}
                for (const auto& b : boundaries(s, t, k - 1))
                    if (!in_span(Bt, apply_d(k, s, t, b), chart_.p))
                        throw std::logic_error("ahss: d" + std::to_string(chart_.shift(k)) + " maps a boundary at (" +
                                               std::to_string(s) + "," + std::to_string(t) + ") outside the boundaries");
                FpMatrix M(chart_.p, N2, prev.size() + Bt.size());
                for (std::size_t j = 0; j < prev.size(); ++j) {
                    auto img = apply_d(k, s, t, prev[j]);
                    for (std::size_t r = 0; r < N2; ++r) M.at(r, j) = img[r];
                }
                for (std::size_t j = 0; j < Bt.size(); ++j)
                    for (std::size_t r = 0; r < N2; ++r) M.at(r, prev.size() + j) = Bt[j][r];
                FpRows combos;
                for (const auto& ker : kernel(std::move(M))) {
                    std::vector<std::int32_t> v(N, 0);
                    bool any = false;
                    for (std::size_t j = 0; j < prev.size(); ++j) {
                        if (!ker[j]) continue;
                        any = true;
                        for (std::size_t c = 0; c < N; ++c) v[c] = static_cast<std::int32_t>((v[c] + ker[j] * prev[j][c]) % chart_.p);
                    }
                    if (any) combos.push_back(std::move(v));
                }
                out = combos.empty() ? FpRows{} : row_basis(chart_.p, N, combos);
            }
        }
        return w_.emplace(key, std::move(out)).first->second;
    }

    const FpRows& boundaries(int s, int t, unsigned k) {
        auto key = std::make_tuple(s, t, k);
        if (auto it = b_.find(key); it != b_.end()) return it->second;
        FpRows out;
        if (k > 0) {
            out = boundaries(s, t, k - 1);
            const int s0 = s - chart_.shift(k), t0 = t + vdeg(k);
            if (s0 >= 0 && t0 <= 0 && layout(s0, t0).dim() > 0) {
                const FpRows src = cycles(s0, t0, k - 1);
                const FpRows here = cycles(s, t, k - 1);
                for (const auto& w : src) {
                    auto img = apply_d(k, s0, t0, w);
                    if (!in_span(here, img, chart_.p))
                        throw std::logic_error("ahss: d" + std::to_string(chart_.shift(k)) + " boundary at (" +
                                               std::to_string(s) + "," + std::to_string(t) +
                                               ") is not a cycle of the earlier differentials");
                    out.push_back(std::move(img));
                }
                const std::size_t N = layout(s, t).dim();
                out = out.empty() ? FpRows{} : row_basis(chart_.p, N, out);
            }
        }
        return b_.emplace(key, std::move(out)).first->second;
    }

private:
    struct Layout {
        std::vector<std::size_t> cls;  // free classes first, then torsion
        std::size_t nfree = 0;
        std::map<std::size_t, std::size_t> pos;
        std::vector<std::vector<std::uint32_t>> vmon;
        std::map<std::vector<std::uint32_t>, std::size_t> vidx;
        std::size_t dim() const { return cls.size() * vmon.size(); }
    };

    // Z-basis bookkeeping at one bidegree: W in reduced echelon form with the
    // free coordinates first.
    struct Frame {
        std::vector<std::vector<std::int32_t>> free_rows;  // rows with a free pivot
        std::vector<std::size_t> free_pivots;
        std::vector<std::size_t> nonpivots;                // free coordinates without a pivot
        std::vector<std::vector<std::int32_t>> tbasis;     // basis of W cap T
        std::vector<std::size_t> tpivots;
        std::size_t nfc = 0, dim = 0;
        std::size_t rank() const { return free_pivots.size() + nonpivots.size() + tbasis.size(); }
    };

    const Layout& layout(int s, int t) {
        auto key = std::make_pair(s, t);
        if (auto it = layouts_.find(key); it != layouts_.end()) return it->second;
        Layout L;
        if (s >= 0 && t <= 0 && s <= chart_.window) {
            for (auto kind : {ClassKind::Free, ClassKind::Torsion})
                for (std::size_t c : chart_.in_degree(s))
                    if (chart_.classes[c].kind == kind) L.cls.push_back(c);
            for (std::size_t i = 0; i < L.cls.size(); ++i) {
                L.pos[L.cls[i]] = i;
                if (chart_.classes[L.cls[i]].kind == ClassKind::Free) ++L.nfree;
            }
            std::vector<std::uint32_t> e(vmax_, 0);
            auto rec = [&](auto&& self, unsigned i, int remaining) -> void {
                if (i == 0) {
                    if (remaining == 0) L.vmon.push_back(e);
                    return;
                }
                for (int k = remaining / vdeg(i); k >= 0; --k) {
                    e[i - 1] = static_cast<std::uint32_t>(k);
                    self(self, i - 1, remaining - k * vdeg(i));
                }
                e[i - 1] = 0;
            };
            rec(rec, vmax_, -t);
            for (std::size_t i = 0; i < L.vmon.size(); ++i) L.vidx[L.vmon[i]] = i;
        }
        return layouts_.emplace(key, std::move(L)).first->second;
    }

    std::size_t coord(const Layout& L, std::size_t cls, const std::vector<std::uint32_t>& v) const {
        return L.pos.at(cls) * L.vmon.size() + L.vidx.at(v);
    }

    std::vector<std::int32_t> apply_d(unsigned k, int s, int t, const std::vector<std::int32_t>& x) {
        const Layout& L = layout(s, t);
        const Layout& L2 = layout(s + chart_.shift(k), t - vdeg(k));
        std::vector<std::int64_t> acc(L2.dim(), 0);
        const std::size_t nv = L.vmon.size();
        for (std::size_t idx = 0; idx < x.size(); ++idx) {
            if (!x[idx]) continue;
            std::size_t cls = L.cls[idx / nv];
            auto v = L.vmon[idx % nv];
            ++v[k - 1];
            for (const auto& [tc, coef] : chart_.q_image(k, cls)) acc[coord(L2, tc, v)] += coef * x[idx];
        }
        std::vector<std::int32_t> out(acc.size());
        for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<std::int32_t>(((acc[i] % chart_.p) + chart_.p) % chart_.p);
        return out;
    }

    static bool in_span(const FpRows& rows, const std::vector<std::int32_t>& v, unsigned p) {
        if (std::all_of(v.begin(), v.end(), [](std::int32_t x) { return x == 0; })) return true;
        if (rows.empty()) return false;
        FpRows all = rows;
        all.push_back(v);
        return rank(FpMatrix::from_rows(p, v.size(), all)) == rank(FpMatrix::from_rows(p, v.size(), rows));
    }

    static std::size_t first_nonzero(const std::vector<std::int32_t>& r) {
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i]) return i;
        return r.size();
    }

    Frame frame(int s, int t) {
        const Layout& L = layout(s, t);
        Frame f;
        f.dim = L.dim();
        f.nfc = L.nfree * L.vmon.size();
        const auto& W = cycles(s, t, vmax_);
        FpRows rows = W.empty() ? FpRows{} : row_basis(chart_.p, f.dim, W);
        std::vector<bool> pivot(f.nfc, false);
        for (auto& r : rows) {
            std::size_t pc = first_nonzero(r);
            if (pc < f.nfc) {
                f.free_pivots.push_back(pc);
                pivot[pc] = true;
                f.free_rows.push_back(std::move(r));
            } else {
                f.tpivots.push_back(pc);
                f.tbasis.push_back(std::move(r));
            }
        }
        for (std::size_t k = 0; k < f.nfc; ++k)
            if (!pivot[k]) f.nonpivots.push_back(k);
        return f;
    }

    // Group generators of the cycle group at (s, t), as integer vectors in L.
    std::vector<ZVec> generators(const Frame& f, int, int) const {
        std::vector<ZVec> gens;
        for (const auto& r : f.free_rows) gens.emplace_back(r.begin(), r.end());
        for (std::size_t k : f.nonpivots) {
            ZVec x(f.dim, BigInt(0));
            x[k] = chart_.p;
            gens.push_back(std::move(x));
        }
        for (const auto& r : f.tbasis) gens.emplace_back(r.begin(), r.end());
        return gens;
    }

    ZVec times_v(unsigned i, int s, int t, const ZVec& x) {
        const Layout& L = layout(s, t);
        const Layout& L2 = layout(s, t - vdeg(i));
        ZVec out(L2.dim(), BigInt(0));
        const std::size_t nv = L.vmon.size();
        for (std::size_t idx = 0; idx < x.size(); ++idx) {
            if (x[idx] == 0) continue;
            auto v = L.vmon[idx % nv];
            ++v[i - 1];
            out[coord(L2, L.cls[idx / nv], v)] = x[idx];
        }
        return out;
    }

    // Coordinates of a cycle in the generators of Frame f: (c_i, d_k, tau_l).
    ZVec phi(const Frame& f, const ZVec& x, int s, int t) const {
        const auto p = static_cast<std::int64_t>(chart_.p);
        ZVec out;
        std::vector<BigInt> c;
        for (std::size_t i = 0; i < f.free_pivots.size(); ++i) c.push_back(x[f.free_pivots[i]]);
        out = c;
        for (std::size_t k : f.nonpivots) {
            BigInt v = x[k];
            for (std::size_t i = 0; i < c.size(); ++i) v -= c[i] * f.free_rows[i][k];
            if (v % p != 0)
                throw std::logic_error("ahss: element at (" + std::to_string(s) + "," + std::to_string(t) +
                                       ") is not a cycle (free part)");
            out.push_back(v / p);
        }
        std::vector<std::int64_t> y(f.dim - f.nfc, 0);
        for (std::size_t j = f.nfc; j < f.dim; ++j) {
            BigInt v = x[j];
            for (std::size_t i = 0; i < c.size(); ++i) v -= c[i] * f.free_rows[i][j];
            v %= p;
            if (v < 0) v += p;
            y[j - f.nfc] = static_cast<std::int64_t>(v);
        }
        std::vector<std::int64_t> tau;
        for (std::size_t l = 0; l < f.tbasis.size(); ++l) tau.push_back(y[f.tpivots[l] - f.nfc]);
        for (std::size_t j = f.nfc; j < f.dim; ++j) {
            std::int64_t v = y[j - f.nfc];
            for (std::size_t l = 0; l < f.tbasis.size(); ++l) v -= tau[l] * f.tbasis[l][j];
            if (((v % p) + p) % p != 0)
                throw std::logic_error("ahss: element at (" + std::to_string(s) + "," + std::to_string(t) +
                                       ") is not a cycle (torsion part)");
        }
        for (auto v : tau) out.push_back(v);
        return out;
    }

    Chart chart_;
    unsigned vmax_;
    int vdepth_ = 0;
    std::map<std::pair<int, int>, Layout> layouts_;
    std::map<std::tuple<int, int, unsigned>, FpRows> w_, b_;
    std::set<std::pair<int, int>> truncated_;
};

}  // namespace chowcheck
