#pragma once

// Exact scalars over F_p, Z, Q and the p-local rationals Z_(p).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chowcheck {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class DomainKind { Fp, Integer, Rational, Local };

struct Domain {
    DomainKind kind = DomainKind::Integer;
    unsigned p = 0;  // prime for Fp and Local, 0 otherwise

    static Domain fp(unsigned prime) { return check_prime({DomainKind::Fp, prime}); }
    static Domain integers() { return {DomainKind::Integer, 0}; }
    static Domain rationals() { return {DomainKind::Rational, 0}; }
    static Domain local(unsigned prime) { return check_prime({DomainKind::Local, prime}); }

    /// f2, f3, ..., z, q, zlocal:P
    static Domain parse(const std::string& s) {
        if (s == "z") return integers();
        if (s == "q") return rationals();
        if (s.size() > 1 && s[0] == 'f' && s.find_first_not_of("0123456789", 1) == std::string::npos)
            return fp(static_cast<unsigned>(std::stoul(s.substr(1))));
        if (s.rfind("zlocal:", 0) == 0 && s.size() > 7 && s.find_first_not_of("0123456789", 7) == std::string::npos)
            return local(static_cast<unsigned>(std::stoul(s.substr(7))));
        throw std::invalid_argument("unknown domain '" + s + "'");
    }

    bool is_field() const { return kind == DomainKind::Fp || kind == DomainKind::Rational; }
    bool is_finite() const { return kind == DomainKind::Fp; }

    std::string name() const {
        switch (kind) {
        case DomainKind::Fp: return "F" + std::to_string(p);
        case DomainKind::Integer: return "Z";
        case DomainKind::Rational: return "Q";
        case DomainKind::Local: return "Z(" + std::to_string(p) + ")";
        }
        return "?";
    }

    friend bool operator==(const Domain&, const Domain&) = default;

private:
    static Domain check_prime(Domain d) {
        if (d.p != 2 && d.p != 3 && d.p != 5 && d.p != 7)
            throw std::invalid_argument("unsupported prime " + std::to_string(d.p));
        return d;
    }
};

/// p-adic valuation of a nonzero integer.
inline unsigned valuation(BigInt n, unsigned p) {
    if (n == 0) throw std::domain_error("valuation of zero");
    unsigned v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

/// An exact element of one of the coefficient domains.  F_p values are kept
/// reduced in [0, p); Z_(p) values are rationals whose denominator is prime to p.
class Scalar {
public:
    Scalar() = default;
    explicit Scalar(Domain d) : domain_(d) {}
    Scalar(Domain d, std::int64_t v) : domain_(d) {
        if (d.kind == DomainKind::Fp)
            small_ = reduce(v, d.p);
        else
            big_ = v;
    }
    Scalar(Domain d, const Rational& v) : domain_(d) {
        switch (d.kind) {
        case DomainKind::Fp: {
            BigInt num = boost::multiprecision::numerator(v);
            BigInt den = boost::multiprecision::denominator(v);
            if (den % d.p == 0) throw std::domain_error("denominator divisible by p in " + d.name());
            auto n = static_cast<std::int64_t>(BigInt(((num % d.p) + d.p) % d.p));
            auto m = static_cast<std::int64_t>(BigInt(den % d.p));
            small_ = reduce(n * inverse_mod(m, d.p), d.p);
            break;
        }
        case DomainKind::Integer:
            if (boost::multiprecision::denominator(v) != 1)
                throw std::domain_error("non-integral value in Z");
            big_ = v;
            break;
        case DomainKind::Local:
            if (boost::multiprecision::denominator(v) % d.p == 0)
                throw std::domain_error("denominator divisible by " + std::to_string(d.p) + " in " + d.name());
            big_ = v;
            break;
        case DomainKind::Rational: big_ = v; break;
        }
    }

    const Domain& domain() const { return domain_; }

    bool is_zero() const { return domain_.kind == DomainKind::Fp ? small_ == 0 : big_ == 0; }
    bool is_one() const { return domain_.kind == DomainKind::Fp ? small_ == 1 : big_ == 1; }

    /// Value as a rational; F_p values map to their representative in [0, p).
    Rational to_rational() const {
        return domain_.kind == DomainKind::Fp ? Rational(small_) : big_;
    }
    std::int64_t fp_value() const { return small_; }

    Scalar operator-() const {
        Scalar r(domain_);
        if (domain_.kind == DomainKind::Fp)
            r.small_ = small_ == 0 ? 0 : static_cast<std::int64_t>(domain_.p) - small_;
        else
            r.big_ = -big_;
        return r;
    }

    Scalar& operator+=(const Scalar& o) {
        check(o);
        if (domain_.kind == DomainKind::Fp) {
            small_ += o.small_;
            if (small_ >= static_cast<std::int64_t>(domain_.p)) small_ -= domain_.p;
        } else {
            big_ += o.big_;
        }
        return *this;
    }
    Scalar& operator-=(const Scalar& o) { return *this += -o; }
    Scalar& operator*=(const Scalar& o) {
        check(o);
        if (domain_.kind == DomainKind::Fp)
            small_ = (small_ * o.small_) % domain_.p;
        else
            big_ *= o.big_;
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }

    /// Division; throws if the result leaves the domain (e.g. 1/2 in Z_(2)).
    Scalar divided_by(const Scalar& o) const {
        check(o);
        if (o.is_zero()) throw std::domain_error("division by zero");
        if (domain_.kind == DomainKind::Fp) {
            Scalar r(domain_);
            r.small_ = (small_ * inverse_mod(o.small_, domain_.p)) % domain_.p;
            return r;
        }
        return Scalar(domain_, Rational(big_ / o.big_));
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.domain_ != b.domain_) return false;
        return a.domain_.kind == DomainKind::Fp ? a.small_ == b.small_ : a.big_ == b.big_;
    }

    std::string to_string() const {
        if (domain_.kind == DomainKind::Fp) return std::to_string(small_);
        return big_.str();
    }

    static std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
        a = reduce(a, p);
        if (a == 0) throw std::domain_error("no inverse of 0 mod p");
        std::int64_t r = 1, base = a, e = p - 2;
        while (e > 0) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return r;
    }

private:
    static std::int64_t reduce(std::int64_t v, std::int64_t p) {
        v %= p;
        return v < 0 ? v + p : v;
    }
    void check(const Scalar& o) const {
        if (o.domain_ != domain_)
            throw std::invalid_argument("scalar domain mismatch: " + domain_.name() + " vs " + o.domain_.name());
    }

    Domain domain_{};
    std::int64_t small_ = 0;
    Rational big_{0};
};

}  // namespace chowcheck
