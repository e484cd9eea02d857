#pragma once

// Rational generating functions in one variable t: numerator / denominator,
// both polynomials, denominator with constant term +-1.

#include "parse.hpp"

#include <string>
#include <vector>

namespace chowcheck {

struct SeriesExpr {
    std::vector<BigInt> numerator;    // coefficient of t^k at index k
    std::vector<BigInt> denominator;  // constant term must be +-1
};

namespace detail {

inline std::vector<BigInt> dense_coefficients(const Polynomial& f) {
    std::vector<BigInt> out;
    for (const auto& [m, c] : f.terms()) {
        auto k = static_cast<std::size_t>(m.degree);
        if (out.size() <= k) out.resize(k + 1, BigInt(0));
        out[k] = BigInt(boost::multiprecision::numerator(c.to_rational()));
    }
    if (out.empty()) out.push_back(0);
    return out;
}

inline std::string normalize_series_text(std::string s) {
    // unicode minus, and juxtaposed groups ")(" read as products
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.compare(i, 3, "\xE2\x88\x92") == 0) {
            out += '-';
            i += 2;
            continue;
        }
        out += s[i];
    }
    std::string r;
    for (std::size_t i = 0; i < out.size(); ++i) {
        r += out[i];
        if (out[i] == ')') {
            std::size_t j = i + 1;
            while (j < out.size() && out[j] == ' ') ++j;
            if (j < out.size() && (out[j] == '(' || std::isalpha(static_cast<unsigned char>(out[j])))) r += '*';
        }
    }
    return r;
}

}  // namespace detail

/// Parses "NUM" or "NUM / DEN"; the split is the last top-level '/' followed by '('.
inline SeriesExpr parse_series(const std::string& text) {
    static const SignaturePtr sig = AlgebraSignature::uniform({"t"}, 1, Domain::integers());
    std::string s = detail::normalize_series_text(text);
    int depth = 0;
    std::size_t split = std::string::npos;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == '/' && depth == 0) {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] == ' ') ++j;
            if (j < s.size() && s[j] == '(') split = i;
        }
    }
    SeriesExpr e;
    if (split == std::string::npos) {
        e.numerator = detail::dense_coefficients(parse_polynomial(s, sig));
        e.denominator = {1};
    } else {
        e.numerator = detail::dense_coefficients(parse_polynomial(s.substr(0, split), sig));
        Polynomial den;
        try {
            den = parse_polynomial(s.substr(split + 1), sig);
        } catch (const ParseError& err) {
            throw ParseError(std::string("denominator: ") + err.what(), split + 1 + err.position());
        }
        e.denominator = detail::dense_coefficients(den);
    }
    if (e.denominator[0] != 1 && e.denominator[0] != -1)
        throw std::invalid_argument("series denominator must have constant term +-1");
    return e;
}

/// Coefficients of t^0 .. t^order.
inline std::vector<BigInt> expand_series(const SeriesExpr& e, int order) {
    if (order < 0) throw std::invalid_argument("expand_series: order must be >= 0");
    const auto n = static_cast<std::size_t>(order) + 1;
    std::vector<BigInt> c(n, BigInt(0));
    const BigInt& d0 = e.denominator[0];
    for (std::size_t k = 0; k < n; ++k) {
        BigInt acc = k < e.numerator.size() ? e.numerator[k] : BigInt(0);
        for (std::size_t j = 1; j <= k && j < e.denominator.size(); ++j) acc -= e.denominator[j] * c[k - j];
        c[k] = acc * d0;  // d0 = +-1 is its own inverse
    }
    return c;
}

inline std::vector<BigInt> expand_series(const std::string& text, int order) {
    return expand_series(parse_series(text), order);
}

}  // namespace chowcheck
