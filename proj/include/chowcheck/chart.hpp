#pragma once

// Charts: an additive basis of integral cohomology in a degree window (free
// and p-torsion classes, plus the extra mod-p classes), with Q_i matrices on
// the mod-p basis.  Classes are named by monomials in declared generators.
//
// File format ('#' starts a comment):
//   [chart]        name = ID / p = P / window = N
//   [generators]   name degree [exterior]
//   [classes]      name degree torsion_exponent     (0 = free, 1 = Z/p)
//   [modp]         name degree                      (mod-p classes with no integral lift)
//   [q I]          source -> polynomial in the generators

#include "parse.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chowcheck {

class ChartError : public std::runtime_error {
public:
    ChartError(const std::string& what, std::size_t line, std::size_t column = 0)
        : std::runtime_error("line " + std::to_string(line) + (column ? ", column " + std::to_string(column) : "") +
                             ": " + what),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

enum class ClassKind { Free, Torsion, ModP };

struct ChartClass {
    std::string name;
    Monomial mono;
    int degree = 0;
    ClassKind kind = ClassKind::Free;

    bool integral() const { return kind != ClassKind::ModP; }
    friend bool operator==(const ChartClass& a, const ChartClass& b) {
        return a.name == b.name && a.degree == b.degree && a.kind == b.kind;
    }
};

using SparseVec = std::vector<std::pair<std::size_t, std::int64_t>>;  // (class index, coefficient mod p)

struct Chart {
    std::string name;
    unsigned p = 2;
    int window = 0;
    SignaturePtr generators;  // over F_p
    std::vector<ChartClass> classes;
    std::map<std::string, std::size_t> index;
    std::map<unsigned, std::map<std::size_t, SparseVec>> q;  // q[i][source] = image

    int shift(unsigned i) const {
        int r = 1;
        for (unsigned k = 0; k < i; ++k) r *= static_cast<int>(p);
        return 2 * r - 1;
    }
    unsigned max_q() const { return q.empty() ? 0 : q.rbegin()->first; }

    std::size_t find(const std::string& n) const {
        auto it = index.find(n);
        if (it == index.end()) throw std::invalid_argument("unknown chart class '" + n + "'");
        return it->second;
    }

    std::size_t add_class(const Monomial& m, ClassKind kind) {
        std::string n = monomial_to_string(m, *generators);
        if (m.degree > window) throw std::invalid_argument("class " + n + " lies outside the window");
        if (!index.emplace(n, classes.size()).second) throw std::invalid_argument("duplicate class " + n);
        classes.push_back({n, m, m.degree, kind});
        return classes.size() - 1;
    }

    /// Image of a class under Q_i (empty when not recorded).
    const SparseVec& q_image(unsigned i, std::size_t cls) const {
        static const SparseVec empty;
        auto it = q.find(i);
        if (it == q.end()) return empty;
        auto jt = it->second.find(cls);
        return jt == it->second.end() ? empty : jt->second;
    }

    /// Records Q_i(source) = f, where f is a polynomial in the generators whose
    /// monomials must all be chart classes.
    void set_q(unsigned i, std::size_t source, const Polynomial& f) {
        SparseVec v;
        for (const auto& [m, c] : f.terms()) {
            std::string n = monomial_to_string(m, *generators);
            auto it = index.find(n);
            if (it == index.end())
                throw std::invalid_argument("Q" + std::to_string(i) + "(" + classes[source].name + "): term " + n +
                                            " is not a chart class");
            v.emplace_back(it->second, c.fp_value());
        }
        std::sort(v.begin(), v.end());
        if (v.empty())
            q[i].erase(source);
        else
            q[i][source] = std::move(v);
    }

    Polynomial class_polynomial(std::size_t cls) const {
        return Polynomial::monomial(generators, classes.at(cls).mono, Scalar(generators->domain(), 1));
    }

    Polynomial q_polynomial(unsigned i, std::size_t cls) const {
        Polynomial f = Polynomial::zero(generators);
        for (const auto& [t, c] : q_image(i, cls))
            f += class_polynomial(t).scaled(Scalar(generators->domain(), c));
        return f;
    }

    std::vector<std::size_t> in_degree(int d) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (classes[i].degree == d) out.push_back(i);
        return out;
    }

    friend bool operator==(const Chart& a, const Chart& b) {
        return a.name == b.name && a.p == b.p && a.window == b.window &&
               a.generators->generators() == b.generators->generators() && a.classes == b.classes && a.q == b.q;
    }
};

/// Structural checks: degree shifts, Q_i^2 = 0, integral sources map into torsion.
inline void validate(const Chart& c) {
    for (const auto& [i, block] : c.q) {
        for (const auto& [src, img] : block) {
            const auto& s = c.classes.at(src);
            for (const auto& [t, coef] : img) {
                const auto& tc = c.classes.at(t);
                if (tc.degree != s.degree + c.shift(i))
                    throw std::invalid_argument("Q" + std::to_string(i) + "(" + s.name + ") has a term " + tc.name +
                                                " of degree " + std::to_string(tc.degree) + ", expected " +
                                                std::to_string(s.degree + c.shift(i)));
                if (coef % static_cast<std::int64_t>(c.p) == 0)
                    throw std::invalid_argument("Q" + std::to_string(i) + "(" + s.name + ") has a zero coefficient");
                if (s.integral() && i == 0)
                    throw std::invalid_argument("Q0 of the integral class " + s.name + " must vanish");
                if (s.integral() && tc.kind != ClassKind::Torsion)
                    throw std::invalid_argument("Q" + std::to_string(i) + "(" + s.name + ") leaves the torsion span at " +
                                                tc.name);
            }
            // Q_i Q_i = 0
            std::map<std::size_t, std::int64_t> acc;
            for (const auto& [t, coef] : img)
                for (const auto& [u, c2] : c.q_image(i, t)) acc[u] = (acc[u] + coef * c2) % c.p;
            for (const auto& [u, v] : acc)
                if (v != 0)
                    throw std::invalid_argument("Q" + std::to_string(i) + " squares to a nonzero class on " + s.name);
        }
    }
}

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> w;
    for (std::string x; in >> x;) w.push_back(x);
    return w;
}

inline int to_int(const std::string& s, std::size_t line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ChartError("expected an integer, got '" + s + "'", line);
    }
}

}  // namespace detail

inline Chart parse_chart(const std::string& text) {
    Chart c;
    std::vector<Generator> gens;
    struct Pending {
        std::string name;
        int degree;
        ClassKind kind;
        std::size_t line;
    };
    struct PendingQ {
        unsigned i;
        std::string source, target;
        std::size_t line, column;
    };
    std::vector<Pending> classes;
    std::vector<PendingQ> qs;
    std::string section;
    unsigned qindex = 0;
    bool have_p = false, have_window = false;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = detail::trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ChartError("unterminated section header", lineno);
            auto w = detail::words(line.substr(1, line.size() - 2));
            if (w.empty()) throw ChartError("empty section header", lineno);
            section = w[0];
            if (section == "q") {
                if (w.size() != 2) throw ChartError("expected [q INDEX]", lineno);
                qindex = static_cast<unsigned>(detail::to_int(w[1], lineno));
            } else if (section != "chart" && section != "generators" && section != "classes" && section != "modp") {
                throw ChartError("unknown section '" + section + "'", lineno);
            }
            continue;
        }
        if (section == "chart") {
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ChartError("expected key = value", lineno);
            std::string key = detail::trim(line.substr(0, eq)), val = detail::trim(line.substr(eq + 1));
            if (key == "name")
                c.name = val;
            else if (key == "p") {
                c.p = static_cast<unsigned>(detail::to_int(val, lineno));
                have_p = true;
            } else if (key == "window") {
                c.window = detail::to_int(val, lineno);
                have_window = true;
            } else
                throw ChartError("unknown chart key '" + key + "'", lineno);
        } else if (section == "generators") {
            auto w = detail::words(line);
            if (w.size() < 2 || w.size() > 3 || (w.size() == 3 && w[2] != "exterior"))
                throw ChartError("expected: name degree [exterior]", lineno);
            gens.push_back({w[0], detail::to_int(w[1], lineno), w.size() == 3});
        } else if (section == "classes" || section == "modp") {
            auto w = detail::words(line);
            if (section == "classes" && w.size() != 3) throw ChartError("expected: name degree torsion_exponent", lineno);
            if (section == "modp" && w.size() != 2) throw ChartError("expected: name degree", lineno);
            ClassKind kind = ClassKind::ModP;
            if (section == "classes") {
                int e = detail::to_int(w[2], lineno);
                if (e < 0 || e > 1) throw ChartError("only free (0) and order-p (1) classes are supported", lineno);
                kind = e ? ClassKind::Torsion : ClassKind::Free;
            }
            classes.push_back({w[0], detail::to_int(w[1], lineno), kind, lineno});
        } else if (section == "q") {
            auto arrow = line.find("->");
            if (arrow == std::string::npos) throw ChartError("expected: source -> polynomial", lineno);
            std::size_t col = raw.find("->") + 3;
            qs.push_back({qindex, detail::trim(line.substr(0, arrow)), detail::trim(line.substr(arrow + 2)), lineno, col});
        } else {
            throw ChartError("content outside any section", lineno);
        }
    }
    if (!have_p || !have_window) throw ChartError("[chart] must set p and window", lineno);
    Domain dom;
    try {
        dom = Domain::fp(c.p);
        c.generators = AlgebraSignature::make(gens, dom);
    } catch (const std::exception& e) {
        throw ChartError(e.what(), 1);
    }
    for (const auto& pc : classes) {
        Polynomial f;
        try {
            f = pc.name == "1" ? Polynomial::one(c.generators) : parse_polynomial(pc.name, c.generators);
        } catch (const ParseError& e) {
            throw ChartError(std::string("class name: ") + e.what(), pc.line, e.position() + 1);
        }
        if (f.size() != 1 || !f.terms().front().second.is_one())
            throw ChartError("class name '" + pc.name + "' is not a monomial", pc.line);
        const Monomial& m = f.terms().front().first;
        if (m.degree != pc.degree)
            throw ChartError("class " + pc.name + " has degree " + std::to_string(m.degree) + ", declared " +
                                 std::to_string(pc.degree),
                             pc.line);
        if (monomial_to_string(m, *c.generators) != pc.name)
            throw ChartError("class name '" + pc.name + "' is not in canonical form (" +
                                 monomial_to_string(m, *c.generators) + ")",
                             pc.line);
        try {
            c.add_class(m, pc.kind);
        } catch (const std::exception& e) {
            throw ChartError(e.what(), pc.line);
        }
    }
    for (const auto& pq : qs) {
        auto it = c.index.find(pq.source);
        if (it == c.index.end()) throw ChartError("unknown source class '" + pq.source + "'", pq.line);
        Polynomial f;
        try {
            f = parse_polynomial(pq.target, c.generators);
        } catch (const ParseError& e) {
            throw ChartError(e.what(), pq.line, pq.column + e.position());
        }
        try {
            c.set_q(pq.i, it->second, f);
        } catch (const std::exception& e) {
            throw ChartError(e.what(), pq.line);
        }
    }
    try {
        validate(c);
    } catch (const std::invalid_argument& e) {
        throw ChartError(std::string("validation: ") + e.what(), lineno);
    }
    return c;
}

inline Chart load_chart_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open chart file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_chart(ss.str());
}

inline std::string serialize_chart(const Chart& c) {
    std::ostringstream out;
    out << "[chart]\nname = " << c.name << "\np = " << c.p << "\nwindow = " << c.window << "\n\n[generators]\n";
    for (const auto& g : c.generators->generators())
        out << g.name << ' ' << g.degree << (g.exterior ? " exterior" : "") << '\n';
    // sections may repeat; keeping class order makes the round trip exact
    std::string open;
    for (const auto& k : c.classes) {
        std::string want = k.integral() ? "classes" : "modp";
        if (want != open) {
            out << "\n[" << want << "]\n";
            open = want;
        }
        out << k.name << ' ' << k.degree;
        if (k.integral()) out << ' ' << (k.kind == ClassKind::Torsion ? 1 : 0);
        out << '\n';
    }
    for (const auto& [i, block] : c.q) {
        out << "\n[q " << i << "]\n";
        for (const auto& [src, img] : block) out << c.classes[src].name << " -> " << c.q_polynomial(i, src).to_string() << '\n';
    }
    return out.str();
}

}  // namespace chowcheck
