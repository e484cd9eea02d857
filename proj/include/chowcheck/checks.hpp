#pragma once

// Verifications packaged as Report rows, shared by the command-line tool and
// the acceptance binary.

#include "builtin.hpp"
#include "dickson.hpp"
#include "group.hpp"
#include "parse.hpp"
#include "report.hpp"
#include "restriction.hpp"
#include "series.hpp"

#include <sstream>

namespace chowcheck {

namespace detail {
inline std::string str(const BigInt& x) {
    std::ostringstream s;
    s << x;
    return s.str();
}
inline std::string join(const std::vector<std::string>& v, const char* sep = ",") {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
    return s;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// dickson

/// which: "all", "qd" or "qe".
inline Report dickson_report(int h, const std::string& which = "all") {
    if (which != "all" && which != "qd" && which != "qe") throw std::invalid_argument("unknown --verify value '" + which + "'");
    auto ctx = build_dickson(h);
    Report r;
    auto emit = [&](const char* tag, const IdentityReport& rep) {
        for (const auto& c : rep.checks) {
            int deg = c.lhs.is_zero() ? (c.rhs.is_zero() ? 0 : c.rhs.degree()) : c.lhs.degree();
            r.add("dickson.h" + std::to_string(h) + "." + tag, deg, c.holds ? "holds" : "fails",
                  c.holds ? c.name : c.name + " lhs=" + c.lhs.to_string(), c.holds);
        }
    };
    if (which != "qe") {
        emit("qd", verify_lemma_qd(ctx));
        // the vanishing clause has two readings; report which one holds
        for (int bound : {h - 1, h}) {
            bool holds = verify_lemma_qd(ctx, bound).all_hold();
            r.add("dickson.h" + std::to_string(h) + ".qd.reading", 0, holds ? "holds" : "fails",
                  "Q_i d_j = 0 for i < " + std::to_string(bound) + ", i != j-1");
        }
    }
    if (which != "qd") emit("qe", verify_lemma_qe(ctx));
    return r;
}

// ---------------------------------------------------------------------------
// Milnor closed form against the Sq-commutator recursion

inline Report milnor_consistency_report(int nvars, int max_degree, unsigned max_i) {
    std::vector<std::string> names;
    for (int i = 1; i <= nvars; ++i) names.push_back("x" + std::to_string(i));
    auto sig = AlgebraSignature::uniform(names, 1, Domain::fp(2));
    Report r;
    for (int d = 0; d <= max_degree; ++d) {
        std::size_t n = 0, bad = 0;
        std::string first;
        for (const auto& m : degree_slice(*sig, d)) {
            auto f = Polynomial::monomial(sig, m, Scalar(Domain::fp(2), 1));
            for (unsigned i = 0; i <= max_i; ++i, ++n)
                if (milnor_q_closed(i, f) != milnor_q_recursive(i, f)) {
                    if (!bad++) first = "Q" + std::to_string(i) + "(" + f.to_string() + ")";
                }
        }
        r.add("milnor.closed_vs_recursive", d, bad ? "mismatch" : "agree",
              bad ? std::to_string(bad) + " mismatches, first " + first : std::to_string(n) + " evaluations", bad == 0);
    }
    return r;
}

// ---------------------------------------------------------------------------
// invariants

/// Expected Poincare series of the invariant ring, when one is known for this
/// group and coefficient domain.
inline std::optional<std::string> expected_invariant_series(const std::string& group, Domain dom) {
    const bool char0 = dom.kind != DomainKind::Fp;
    auto colon = group.find(':');
    std::string kind = group.substr(0, colon);
    int k = colon == std::string::npos ? 0 : std::stoi(group.substr(colon + 1));
    std::string den;
    if ((kind == "so" || kind == "spin") && char0) {
        for (int i = 1; i <= k; ++i) den += "(1-t^" + std::to_string(4 * i) + ")";
        return "1/(" + den + ")";
    }
    if (kind == "gl" && dom == Domain::fp(2)) {
        for (int i = 0; i < k; ++i) den += "(1-t^" + std::to_string((1 << k) - (1 << i)) + ")";
        return "1/(" + den + ")";
    }
    if (kind == "f4" && char0) return "1/((1-t^4)(1-t^12)(1-t^16)(1-t^24))";
    if (kind == "f4" && dom == Domain::fp(3)) return "(1+t^20+t^40)/((1-t^4)(1-t^8)(1-t^36)(1-t^48))";
    return std::nullopt;
}

/// Invariant ranks degree by degree.  For gl:H over F_2 each basis element is
/// also tested for membership in the Dickson subring.
inline Report invariants_report(const std::string& group, Domain dom, int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("--max-degree must be >= 0");
    GroupAction action = build_group(group);
    auto expected = expected_invariant_series(group, dom);
    std::vector<BigInt> want;
    if (expected) want = expand_series(*expected, max_degree);

    std::vector<Polynomial> dickson;
    const bool is_gl = group.rfind("gl:", 0) == 0 && dom == Domain::fp(2);
    if (is_gl) {
        auto ctx = build_dickson(static_cast<int>(action.rank()));
        for (const auto& d : ctx.d) dickson.push_back(parse_polynomial(d.to_string(), action.signature));
    }

    SliceActions slices(action, dom.kind == DomainKind::Fp ? dom.p : 0);
    const std::string id = "invariants." + group + "." + dom.name();
    Report r;
    for (int d = 0; d <= max_degree; ++d) {
        auto basis = invariant_basis(slices, action, d, dom, 20000);
        const std::size_t rank = basis.rank();
        if (expected) {
            bool ok = BigInt(rank) == want[static_cast<std::size_t>(d)];
            r.add(id, d, "rank " + std::to_string(rank), "expected " + detail::str(want[static_cast<std::size_t>(d)]), ok);
        } else {
            r.add(id, d, "rank " + std::to_string(rank), "no reference series", true);
        }
        if (is_gl && rank) {
            auto sig = action.signature;
            std::size_t inside = 0;
            for (const auto& f : basis.as_polynomials(sig)) inside += subring_membership(f, dickson).inside;
            r.add(id + ".dickson_subring", d, inside == rank ? "inside" : "outside",
                  std::to_string(inside) + "/" + std::to_string(rank) + " basis elements", inside == rank);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// series

inline Report series_report(const std::string& expr, int order) {
    auto c = expand_series(expr, order);
    Report r;
    for (int d = 0; d <= order; ++d) r.add("series", d, detail::str(c[static_cast<std::size_t>(d)]), expr);
    return r;
}

// ---------------------------------------------------------------------------
// ahss

inline Chart resolve_chart(const std::string& id_or_path, std::optional<BuiltinChart>* builtin = nullptr) {
    for (const auto& id : builtin_ids())
        if (id == id_or_path) {
            auto b = builtin_chart(id);
            if (builtin) *builtin = b;
            return b.chart;
        }
    return load_chart_file(id_or_path);
}

namespace detail {
inline const ExpectedSeries* find_expected(const std::optional<BuiltinChart>& b, const std::string& id) {
    if (!b) return nullptr;
    for (const auto& e : b->expected)
        if (e.id == id) return &e;
    return nullptr;
}
}  // namespace detail

/// E_infinity collapse ranks in total degrees 0..max_degree (or up to the
/// reliable range when max_degree < 0), compared with the builtin chart's
/// expected series where there is one.  Unreliable degrees are reported and
/// fail only when they were explicitly requested.
inline Report collapse_report(Ahss& a, const std::optional<BuiltinChart>& b, int max_degree = -1) {
    const auto* fr = detail::find_expected(b, "collapse.free");
    const auto* tr = detail::find_expected(b, "collapse.torsion");
    const bool requested = max_degree >= 0;
    const int hi = requested ? max_degree : a.reliable_collapse();
    std::vector<BigInt> wf, wt;
    if (fr) wf = expand_series(fr->expr, hi);
    if (tr) wt = expand_series(tr->expr, hi);
    const std::string id = "ahss." + a.chart().name + ".collapse";
    Report r;
    for (int n = 0; n <= hi; ++n) {
        auto c = a.collapse(n);
        std::string verdict = c.ranks.to_string();
        std::string witness;
        bool ok = c.reliable;
        if (!c.reliable) witness = "beyond reliable range " + std::to_string(a.reliable_collapse());
        if (fr) {
            bool f = BigInt(c.ranks.free_rank) == wf[static_cast<std::size_t>(n)];
            ok = ok && f;
            witness += (witness.empty() ? "" : "; ") + std::string("free expected ") + detail::str(wf[static_cast<std::size_t>(n)]);
        }
        if (tr) {
            bool t = BigInt(c.ranks.torsion_count()) == wt[static_cast<std::size_t>(n)];
            for (const auto& [e, k] : c.ranks.torsion) t = t && e == 1;
            ok = ok && t;
            witness += (witness.empty() ? "" : "; ") + std::string("torsion expected (Z/") + std::to_string(a.chart().p) + ")^" + detail::str(wt[static_cast<std::size_t>(n)]);
        }
        r.add(id, n, verdict, witness, ok);
    }
    return r;
}

/// Nonzero E_infinity bidegrees (s, t) with s <= reliable_s.
inline Report einf_report(Ahss& a) {
    Report r;
    const std::string id = "ahss." + a.chart().name + ".einf";
    for (int s = 0; s <= a.reliable_s(); ++s)
        for (int t = 0; t >= -a.vdepth(); t -= 2) {
            auto e = a.einf(s, t);
            if (!e.free_rank && !e.torsion_dim) continue;
            r.add(id, s, "t=" + std::to_string(t), "free " + std::to_string(e.free_rank) + ", F_p-dim " + std::to_string(e.torsion_dim));
        }
    return r;
}

/// Q_0-homology of the chart basis against the builtin expectation.
inline Report q0_homology_report(const BuiltinChart& b, int hi) {
    auto h = chart_q0_homology(b.chart, 0, hi);
    const ExpectedSeries* q = nullptr;
    for (const auto& e : b.expected)
        if (e.id == "q0_homology") q = &e;
    std::vector<BigInt> want;
    if (q) want = expand_series(q->expr, hi);
    Report r;
    for (int d = 0; d <= hi; ++d) {
        auto it = h.find(d);
        std::size_t got = it == h.end() ? 0 : it->second;
        if (q)
            r.add("chart." + b.id + ".q0_homology", d, "dim " + std::to_string(got),
                  "expected " + detail::str(want[static_cast<std::size_t>(d)]), BigInt(got) == want[static_cast<std::size_t>(d)]);
        else
            r.add("chart." + b.id + ".q0_homology", d, "dim " + std::to_string(got), "");
    }
    return r;
}

inline Report permanence_report(Ahss& a, const std::vector<std::pair<std::string, bool>>& claims) {
    Report r;
    const std::string id = "ahss." + a.chart().name + ".permanent";
    for (const auto& [expr, want] : claims) {
        auto p = a.permanent_cycle_check(expr);
        std::string v = p.permanent() ? "permanent" : (p.cycle ? "cycle, zero in E_inf" : "not a cycle");
        r.add(id, 0, v, expr + (want ? " (expected permanent)" : " (expected not permanent)"), p.reliable && p.permanent() == want);
    }
    return r;
}

/// The two readings of the cycle map for F4 at p = 3, in each even degree:
/// k = number of free classes whose integral lift is not a permanent cycle
/// (only 3 times it is).  If x8^2 is in the image of the cycle map then CH/Tor
/// is exactly D{1,3x4} + E and its 3-index in H/Tor is 3^k; otherwise only the
/// inclusion is known and the index is at least 3^k.  Nothing is asserted.
inline Report f4_cycle_map_report(Ahss& a, int hi) {
    Report r;
    const auto& c = a.chart();
    hi = std::min(hi, a.reliable_s());
    for (int n = 0; n <= hi; n += 2) {
        std::size_t nfree = 0;
        for (auto k : c.in_degree(n)) nfree += c.classes[k].kind == ClassKind::Free;
        if (!nfree) continue;
        const auto& W = a.cycles(n, 0, a.vmax());
        std::size_t lifted = 0;
        if (!W.empty()) {
            FpMatrix M(c.p, W.size(), nfree);
            for (std::size_t i = 0; i < W.size(); ++i)
                for (std::size_t j = 0; j < nfree; ++j) M.set(i, j, W[i][j]);
            lifted = rank(M);
        }
        const std::size_t k = nfree - lifted;
        const std::string idx = k ? "3^" + std::to_string(k) : "1";
        r.add("f4.cycle_map.x8sq_in_image", n, "index " + idx, "rank " + std::to_string(nfree) + ", CH/Tor = D{1,3x4}+E");
        r.add("f4.cycle_map.x8sq_open", n, "index >= " + idx, "rank " + std::to_string(nfree) + ", CH/Tor inside D{1,3x4}+E");
    }
    return r;
}

// ---------------------------------------------------------------------------
// Spin(7) restriction audit

inline Report spin7_rho_report(Spin7Lattice& L, int hi) {
    Report r;
    auto series = expand_series(builtin_spin7().expected[3].expr, hi);
    std::vector<NamedPolynomial> named{{"1", Polynomial::one(L.sig)}, {"w4", L.w4}, {"w8", L.w8}};
    for (const auto& row : rho_image_audit(L.image(), *L.invariants, 0, hi, named)) {
        const auto d = static_cast<std::size_t>(row.degree);
        unsigned vmax = 0;
        for (auto v : row.valuations) vmax = std::max(vmax, v);
        bool ok = BigInt(row.invariant_rank) == series[d] && row.image_rank == row.invariant_rank && vmax <= 1 && row.closed;
        std::vector<std::string> vs;
        for (auto v : row.valuations) vs.push_back(std::to_string(v));
        r.add("rho.image", row.degree, "rank " + std::to_string(row.image_rank) + "/" + std::to_string(row.invariant_rank),
              "valuations [" + detail::join(vs) + "], series " + detail::str(series[d]) + (row.closed ? "" : ", not closed"), ok);
        for (const auto& [n, m] : row.named) {
            bool want_ok = n == "1" ? m.verdict == Membership::Inside : m.verdict == Membership::InsideAfterScaling && m.k == 1;
            r.add("rho.named." + n, row.degree, to_string(m.verdict), "k=" + std::to_string(m.k), want_ok);
        }
    }
    for (const auto& row : rho_image_audit(L.full(), *L.invariants, 0, hi)) {
        bool ok = std::all_of(row.valuations.begin(), row.valuations.end(), [](unsigned v) { return v == 0; }) &&
                  row.image_rank == row.invariant_rank;
        r.add("rho.full_presentation", row.degree, ok ? "saturated" : "not saturated",
              "rank " + std::to_string(row.image_rank) + "/" + std::to_string(row.invariant_rank), ok);
    }
    return r;
}

inline Report spin7_feshbach_report(Spin7Lattice& L, int hi) {
    Report r;
    const auto two = Scalar(L.sig->domain(), 2);
    auto c2 = feshbach_nilpotence(L.image(), {"c2'", L.w4.scaled(two)}, 2, 8, hi);
    r.add("feshbach.nilpotent", 4, c2.nilpotent ? "nilpotent" : "not nilpotent", "c2'=2w4, n=" + std::to_string(c2.n),
          c2.nilpotent && c2.n == 2);
    bool outside = false;
    std::string witness;
    for (const auto& row : rho_image_audit(L.image(), *L.invariants, 0, 12))
        for (const auto& [n, m] : row.basis)
            if (m.verdict != Membership::Inside && !outside) {
                outside = true;
                witness = n + " in degree " + std::to_string(row.degree);
            }
    r.add("feshbach.consistency", 0, outside ? "invariant outside image" : "image closed", witness, !c2.nilpotent || outside);
    auto good = surjectivity_criterion(L.full(), *L.invariants, 0, hi);
    r.add("surjectivity.full", hi, good.injective ? "injective" : "not injective",
          good.first_failure ? "first failure " + std::to_string(*good.first_failure) : "", good.injective);
    auto bad = surjectivity_criterion(L.doctored(), *L.invariants, 0, hi);
    r.add("surjectivity.doctored_control", bad.first_failure.value_or(-1), bad.injective ? "injective" : "not injective",
          "w8 replaced by 2w8", !bad.injective && bad.first_failure == 8);
    return r;
}

inline Report spin7_kernel_report(int hi) {
    Report r;
    auto data = spin7_restriction_data(hi);
    auto ch = res_kernel(data, {"A'", "lattice"}, 0, hi);
    auto all = res_kernel(data, {"A'", "lattice", "omega"}, 0, hi);
    auto pattern = expand_series("t^6/((1-t^8)(1-t^12)(1-t^16))", hi);
    for (int d = 0; d <= hi; ++d) {
        const auto i = static_cast<std::size_t>(d);
        const auto& k = ch[i];
        bool dual = k.generators + k.image_rank == k.free_sources + k.torsion_sources;
        bool ok = BigInt(k.generators) == pattern[i] && k.free_rank == 0 && dual;
        if (d == 6) ok = ok && k.witnesses == std::vector<std::string>{"xi3"};
        r.add("res_kernel.chow_targets", d, "kernel " + std::to_string(k.generators),
              "expected " + detail::str(pattern[i]) + (k.witnesses.empty() ? "" : "; " + detail::join(k.witnesses)), ok);
        r.add("res_kernel.with_omega", d, "kernel " + std::to_string(all[i].generators),
              "image rank " + std::to_string(all[i].image_rank) + " of " + std::to_string(all[i].free_sources + all[i].torsion_sources),
              all[i].generators == 0);
    }
    return r;
}

inline Report spin7_omega_report(Ahss& a, int hi) {
    Report r;
    auto od = omega_detection_audit(a, hi);
    for (const auto& d : od.degrees) {
        bool ok = d.all_nonzero && d.rank == d.count && d.chart_permanent;
        r.add("omega.detection", d.degree, "rank " + std::to_string(d.rank) + "/" + std::to_string(d.count),
              std::string("xi3*m -> v1*w8*m") + (d.chart_checked ? ", permanent in chart" : ""), ok);
    }
    r.add("omega.control", 0, od.control_vanishes ? "2*v1*w8 = 0" : "2*v1*w8 != 0", "mod 2", od.control_vanishes);
    return r;
}

inline Report spin7_audit(int hi = 28) {
    auto L = spin7_lattice();
    Ahss a(spin7_chart(), 3);
    Report r;
    r.append(spin7_rho_report(L, hi));
    r.append(spin7_feshbach_report(L, hi));
    r.append(spin7_kernel_report(hi));
    r.append(spin7_omega_report(a, hi));
    r.append(permanence_report(a, {{"2*w8", true}, {"v1*w8", true}, {"w8", false}}));
    return r;
}

}  // namespace chowcheck
