#pragma once

// Recursive-descent parser for the shared expression grammar
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' signed-int)?
//   atom   := integer | identifier | '(' expr ')'
// parameterized by an Ops policy that builds values.

#include "qaction/errors.hpp"

#include <gmpxx.h>

#include <cctype>
#include <string>

namespace qa {

template <class Ops>
class ExprParser {
public:
    using Value = typename Ops::Value;

    ExprParser(const std::string& text, const Ops& ops) : s_(text), ops_(ops) {}

    Value parse() {
        skip();
        if (pos_ == s_.size()) throw SyntaxError("empty expression", pos_);
        Value v = expr();
        skip();
        if (pos_ != s_.size()) throw SyntaxError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return v;
    }

private:
    const std::string& s_;
    const Ops& ops_;
    std::size_t pos_ = 0;

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Value expr() {
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        Value v = term();
        if (neg) v = ops_.neg(v);
        while (true) {
            if (eat('+'))
                v = ops_.add(v, term());
            else if (eat('-'))
                v = ops_.sub(v, term());
            else
                return v;
        }
    }

    Value term() {
        Value v = factor();
        while (true) {
            skip();
            std::size_t at = pos_;
            if (eat('*')) {
                v = ops_.mul(v, factor());
            } else if (eat('/')) {
                v = ops_.div(v, factor(), at);
            } else {
                return v;
            }
        }
    }

    Value factor() {
        Value v = atom();
        skip();
        std::size_t at = pos_;
        if (eat('^')) {
            skip();
            bool neg = false;
            if (eat('-'))
                neg = true;
            else
                eat('+');
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) throw SyntaxError("expected integer exponent", pos_);
            if (pos_ - start > 6) throw SyntaxError("exponent too large", start);
            int k = std::stoi(s_.substr(start, pos_ - start));
            v = ops_.power(v, neg ? -k : k, at);
        }
        return v;
    }

    Value atom() {
        skip();
        if (pos_ == s_.size()) throw SyntaxError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Value v = expr();
            if (!eat(')')) throw SyntaxError("expected ')'", pos_);
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return ops_.number(mpq_class(mpz_class(s_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            return ops_.identifier(s_.substr(start, pos_ - start), start);
        }
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }
};

}  // namespace qa
