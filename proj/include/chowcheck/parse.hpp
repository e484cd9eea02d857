#pragma once

// Text form of polynomials:
//   expr   := term (('+'|'-') term)*      (a leading sign is accepted)
//   term   := coeff ('*' factor)* | factor ('*' factor)*
//   factor := name ('^' uint)? | '(' expr ')' ('^' uint)?
//   coeff  := int ('/' uint)?
// Whitespace is ignored.

#include "polynomial.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chowcheck {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " at position " + std::to_string(pos)), position_(pos) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

namespace detail {

class PolyParser {
public:
    PolyParser(std::string_view text, SignaturePtr sig) : text_(text), sig_(std::move(sig)) {}

    Polynomial parse() {
        skip();
        Polynomial p = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Polynomial expr() {
        bool negate = false;
        if (eat('-'))
            negate = true;
        else
            eat('+');
        Polynomial acc = term();
        if (negate) acc = -acc;
        for (;;) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                break;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = Polynomial::one(sig_);
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            acc = Polynomial::constant(sig_, coeff());
        } else {
            acc = factor();
        }
        while (eat('*')) acc *= factor();
        return acc;
    }

    Scalar coeff() {
        BigInt num = uint_literal();
        BigInt den = 1;
        if (eat('/')) {
            den = uint_literal();
            if (den == 0) fail("zero denominator");
        }
        try {
            return Scalar(sig_->domain(), Rational(num, den));
        } catch (const std::domain_error& e) {
            fail(e.what());
        }
    }

    BigInt uint_literal() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an unsigned integer");
        return BigInt(std::string(text_.substr(start, pos_ - start)));
    }

    Polynomial factor() {
        if (eat('(')) {
            Polynomial inner = expr();
            if (!eat(')')) fail("expected ')'");
            return power(inner);
        }
        skip();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
        }
        if (start == pos_) fail("expected a generator name, number or '('");
        std::string name(text_.substr(start, pos_ - start));
        auto idx = sig_->find(name);
        if (!idx) {
            pos_ = start;
            fail("unknown generator '" + name + "'");
        }
        return power(Polynomial::generator(sig_, *idx));
    }

    Polynomial power(const Polynomial& base) {
        if (!eat('^')) return base;
        BigInt e = uint_literal();
        if (e > 4096) fail("exponent too large");
        return base.pow(static_cast<unsigned>(e));
    }

    std::string_view text_;
    SignaturePtr sig_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text, const SignaturePtr& sig) {
    return detail::PolyParser(text, sig).parse();
}

}  // namespace chowcheck
