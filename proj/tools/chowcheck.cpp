#include "chowcheck/checks.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace chowcheck;

namespace {

struct Globals {
    std::string out;
    std::string format = "table";
};

int emit(const Report& r, const Globals& g) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!g.out.empty()) {
        file.open(g.out);
        if (!file) throw std::runtime_error("cannot write " + g.out);
        os = &file;
    }
    if (g.format == "records")
        r.write_records(*os);
    else
        r.write_table(*os);
    if (r.ok()) return 0;
    for (const auto& f : r.failures()) std::cerr << "FAILED: " << f << '\n';
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chowcheck: exact checks on Chow rings of classifying spaces"};
    app.set_help_flag("--help", "print help");  // leaves --h free for dickson
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--out", g.out, "write the report to PATH instead of stdout");
    app.add_option("--format", g.format, "table or records")->check(CLI::IsMember({"table", "records"}));

    int h = 0;
    std::string verify = "all";
    auto* dickson = app.add_subcommand("dickson", "Q_i action on the Dickson classes");
    dickson->add_option("--h", h, "rank, 1..4")->required()->check(CLI::Range(1, 4));
    dickson->add_option("--verify", verify, "all, qd or qe")->check(CLI::IsMember({"all", "qd", "qe"}));

    int nvars = 3, mdeg = 8;
    unsigned qmax = 2;
    auto* milnor = app.add_subcommand("milnor", "closed-form Q_i against the Sq recursion on monomials");
    milnor->add_option("--vars", nvars, "number of degree-one generators")->check(CLI::Range(1, 6));
    milnor->add_option("--max-degree", mdeg)->check(CLI::Range(0, 16));
    milnor->add_option("--qmax", qmax)->check(CLI::Range(0, 2));

    std::string group, domain;
    int max_degree = -1;
    auto* inv = app.add_subcommand("invariants", "invariant ranks of a Weyl or general linear group");
    inv->add_option("--group", group, "so:K, spin:K, gl:H or f4")->required();
    inv->add_option("--domain", domain, "f2, f3, q, z or zlocal:P")->required();
    inv->add_option("--max-degree", max_degree, "default 40 for f4, 24 otherwise");

    std::string chart_id;
    unsigned vmax = 0;
    bool collapse = false, q0 = false;
    std::vector<std::string> permanent;
    auto* ahss = app.add_subcommand("ahss", "Atiyah-Hirzebruch spectral sequence on a chart");
    ahss->add_option("--chart", chart_id, "builtin id (toy, spin7, f4) or chart file")->required();
    ahss->add_option("--vmax", vmax, "highest v_i (default: the builtin's)");
    ahss->add_flag("--collapse", collapse, "E_infinity ranks per total degree");
    ahss->add_option("--max-degree", max_degree, "last total degree for --collapse");
    ahss->add_flag("--q0", q0, "Q_0-homology of the chart basis");
    ahss->add_option("--permanent", permanent, "expression such as 2*w8 or v1*w8");

    bool all = false, rho = false, fesh = false, kern = false, omega = false;
    int window = 28;
    auto* audit = app.add_subcommand("audit", "restriction audit of the Spin(7) data");
    audit->add_option("--chart", chart_id, "spin7 or f4")->required()->check(CLI::IsMember({"spin7", "f4"}));
    audit->add_flag("--all", all);
    audit->add_flag("--rho", rho);
    audit->add_flag("--feshbach", fesh);
    audit->add_flag("--kernel", kern);
    audit->add_flag("--omega", omega);
    audit->add_option("--max-degree", window)->check(CLI::Range(0, 60));

    std::string expr;
    int order = 0;
    auto* series = app.add_subcommand("series", "power series coefficients of a rational function in t");
    series->add_option("--expr", expr)->required();
    series->add_option("--order", order)->required()->check(CLI::Range(0, 100000));

    auto* chart = app.add_subcommand("chart", "print a builtin chart in file format");
    chart->add_option("--chart", chart_id, "builtin id")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        Report r;
        if (*dickson) {
            r = dickson_report(h, verify);
        } else if (*milnor) {
            r = milnor_consistency_report(nvars, mdeg, qmax);
        } else if (*inv) {
            if (max_degree < 0) max_degree = group == "f4" ? 40 : 24;
            r = invariants_report(group, Domain::parse(domain), max_degree);
        } else if (*ahss) {
            std::optional<BuiltinChart> b;
            Chart c = resolve_chart(chart_id, &b);
            if (!vmax) vmax = b ? b->vmax : 1;
            Ahss a(c, vmax);
            if (q0) {
                if (!b) b = BuiltinChart{c.name, c, vmax, {}};
                r.append(q0_homology_report(*b, max_degree >= 0 ? max_degree : c.window - 1));
            }
            for (const auto& e : permanent) {
                auto p = a.permanent_cycle_check(e);
                r.add("ahss." + c.name + ".permanent", 0, p.permanent() ? "permanent" : (p.cycle ? "cycle, zero in E_inf" : "not a cycle"),
                      e + (p.reliable ? "" : " (beyond reliable range)"), p.reliable);
            }
            if (collapse) r.append(collapse_report(a, b, max_degree));
            if (!q0 && !collapse && permanent.empty()) r.append(einf_report(a));
        } else if (*audit) {
            if (chart_id == "f4") {
                Ahss a(f4_chart(), 2);
                return emit(f4_cycle_map_report(a, window > 28 ? window : 48), g);
            }
            if (all) rho = fesh = kern = omega = true;
            if (!(rho || fesh || kern || omega)) throw std::invalid_argument("audit: choose --all or at least one of --rho --feshbach --kernel --omega");
            std::optional<Spin7Lattice> L;
            if (rho || fesh) L = spin7_lattice();
            if (rho) r.append(spin7_rho_report(*L, window));
            if (fesh) r.append(spin7_feshbach_report(*L, window));
            if (kern) r.append(spin7_kernel_report(window));
            if (omega) {
                Ahss a(spin7_chart(), 3);
                r.append(spin7_omega_report(a, window));
                r.append(permanence_report(a, {{"2*w8", true}, {"v1*w8", true}, {"w8", false}}));
            }
        } else if (*series) {
            r = series_report(expr, order);
        } else if (*chart) {
            std::cout << serialize_chart(builtin_chart(chart_id).chart);
            return 0;
        }
        return emit(r, g);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
