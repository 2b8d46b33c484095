/*
   Copyright 2026 The extalg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Small expression language for scenario files:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | 'i' | 'pi' | 'e' | 'z' | 't' | name
//            | 'exp' '(' expr ')' | '(' expr ')'
// z is the point coordinate, t its real part; other names refer to
// previously defined elements.

#ifndef EXTALG_EXPR_HPP
#define EXTALG_EXPR_HPP

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <utility>

#include "algebra_core.hpp"

namespace extalg::expr {

/// Values of named elements visible to an expression, per point.
using Environment = std::map<std::string, Element>;

using Node = std::function<cplx(std::size_t point)>;

class Parser {
   public:
    Parser(std::string src, const CharacterSpace* space, const Environment* env)
        : src_(std::move(src)), space_(space), env_(env) {}

    Node parse() {
        Node n = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return n;
    }

   private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("expression '" + src_ + "' at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Node parse_expr() {
        Node lhs = parse_term();
        while (true) {
            if (eat('+')) {
                Node rhs = parse_term();
                lhs = [lhs, rhs](std::size_t p) { return lhs(p) + rhs(p); };
            } else if (eat('-')) {
                Node rhs = parse_term();
                lhs = [lhs, rhs](std::size_t p) { return lhs(p) - rhs(p); };
            } else {
                return lhs;
            }
        }
    }

    Node parse_term() {
        Node lhs = parse_unary();
        while (true) {
            if (eat('*')) {
                Node rhs = parse_unary();
                lhs = [lhs, rhs](std::size_t p) { return lhs(p) * rhs(p); };
            } else if (eat('/')) {
                Node rhs = parse_unary();
                lhs = [lhs, rhs, this](std::size_t p) {
                    const cplx d = rhs(p);
                    if (d == cplx{}) throw ParseError("division by zero in '" + src_ + "'");
                    return lhs(p) / d;
                };
            } else {
                return lhs;
            }
        }
    }

    Node parse_unary() {
        if (eat('-')) {
            Node x = parse_unary();
            return [x](std::size_t p) { return -x(p); };
        }
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    Node parse_power() {
        Node base = parse_primary();
        if (!eat('^')) return base;
        const bool neg = eat('-');
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (start == pos_) fail("exponent must be an integer literal");
        const long k = std::strtol(src_.substr(start, pos_ - start).c_str(), nullptr, 10);
        if (k > 64) fail("exponent too large");
        const int e = static_cast<int>(neg ? -k : k);
        return [base, e, this](std::size_t p) {
            cplx b = base(p);
            if (e < 0) {
                if (b == cplx{}) throw ParseError("negative power of zero in '" + src_ + "'");
                b = 1.0 / b;
            }
            cplx r = 1.0;
            for (int j = 0; j < std::abs(e); ++j) r *= b;
            return r;
        };
    }

    Node parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return [v](std::size_t) { return cplx(v, 0.0); };
        }
        if (eat('(')) {
            Node inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            const std::string name = src_.substr(start, pos_ - start);
            if (name == "exp") {
                if (!eat('(')) fail("expected '(' after exp");
                Node inner = parse_expr();
                if (!eat(')')) fail("expected ')'");
                return [inner](std::size_t p) { return std::exp(inner(p)); };
            }
            if (name == "i") return [](std::size_t) { return cplx(0.0, 1.0); };
            if (name == "pi") return [](std::size_t) { return cplx(std::numbers::pi, 0.0); };
            if (name == "e") return [](std::size_t) { return cplx(std::numbers::e, 0.0); };
            if (name == "z" || name == "t") {
                if (!space_ || !space_->has_coords()) fail("'" + name + "' needs a space with coordinates");
                const CharacterSpace* sp = space_;
                if (name == "z") return [sp](std::size_t p) { return sp->coord(p); };
                return [sp](std::size_t p) { return cplx(sp->coord(p).real(), 0.0); };
            }
            if (env_) {
                auto it = env_->find(name);
                if (it != env_->end()) {
                    const Element* el = &it->second;
                    return [el](std::size_t p) { return (*el)[p]; };
                }
            }
            fail("unknown name '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string src_;
    std::size_t pos_ = 0;
    const CharacterSpace* space_;
    const Environment* env_;
};

/// Evaluates `src` at every point of `space`.
inline Element evaluate(const std::string& src, const CharacterSpace& space, const Environment& env = {}) {
    Parser parser(src, &space, &env);
    const Node n = parser.parse();
    std::vector<cplx> v(space.size());
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = n(p);
    try {
        return Element(space, std::move(v));
    } catch (const InvalidElement& e) {
        throw ParseError("expression '" + src + "' is not finite everywhere");
    }
}

/// Evaluates a constant expression (no coordinates or names).
inline cplx evaluate_constant(const std::string& src) {
    Parser parser(src, nullptr, nullptr);
    const Node n = parser.parse();
    const cplx v = n(0);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw ParseError("expression '" + src + "' is not finite");
    return v;
}

}  // namespace extalg::expr

#endif  // EXTALG_EXPR_HPP
