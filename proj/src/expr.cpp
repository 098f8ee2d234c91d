#include "pucci/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "pucci/errors.hpp"

namespace pucci {
namespace {

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression error at position " + std::to_string(pos) + ": " + what +
                          " in '" + text + "'");
    }

    void skip() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip();
        return pos < text.size() ? text[pos] : '\0';
    }

    ExprFn expr() {
        ExprFn lhs = term();
        for (;;) {
            if (eat('+')) {
                ExprFn rhs = term();
                lhs = [lhs, rhs](double x, double y, double t) {
                    return lhs(x, y, t) + rhs(x, y, t);
                };
            } else if (eat('-')) {
                ExprFn rhs = term();
                lhs = [lhs, rhs](double x, double y, double t) {
                    return lhs(x, y, t) - rhs(x, y, t);
                };
            } else {
                return lhs;
            }
        }
    }

    ExprFn term() {
        ExprFn lhs = power();
        for (;;) {
            if (eat('*')) {
                ExprFn rhs = power();
                lhs = [lhs, rhs](double x, double y, double t) {
                    return lhs(x, y, t) * rhs(x, y, t);
                };
            } else if (eat('/')) {
                ExprFn rhs = power();
                lhs = [lhs, rhs](double x, double y, double t) {
                    return lhs(x, y, t) / rhs(x, y, t);
                };
            } else {
                return lhs;
            }
        }
    }

    ExprFn power() {
        ExprFn base = unary();
        if (eat('^')) {
            ExprFn exp = power();  // right associative
            return [base, exp](double x, double y, double t) {
                return std::pow(base(x, y, t), exp(x, y, t));
            };
        }
        return base;
    }

    ExprFn unary() {
        if (eat('-')) {
            ExprFn inner = unary();
            return [inner](double x, double y, double t) { return -inner(x, y, t); };
        }
        return primary();
    }

    ExprFn primary() {
        skip();
        if (pos >= text.size()) fail("unexpected end of input");
        const char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(text.c_str() + pos, &end);
            if (end == text.c_str() + pos) fail("bad number");
            pos = static_cast<std::size_t>(end - text.c_str());
            return [v](double, double, double) { return v; };
        }
        if (c == '(') {
            ++pos;
            ExprFn inner = expr();
            if (!eat(')')) fail("missing ')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            const std::string name = text.substr(start, pos - start);
            if (name == "x") return [](double x, double, double) { return x; };
            if (name == "y") return [](double, double y, double) { return y; };
            if (name == "t") return [](double, double, double t) { return t; };
            if (name == "pi") return [](double, double, double) { return 3.14159265358979323846; };
            if (name == "e") return [](double, double, double) { return 2.71828182845904523536; };
            if (!eat('(')) fail("unknown name '" + name + "'");
            std::vector<ExprFn> args;
            if (peek() != ')') {
                args.push_back(expr());
                while (eat(',')) args.push_back(expr());
            }
            if (!eat(')')) fail("missing ')' after arguments of " + name);
            auto need = [&](std::size_t k) {
                if (args.size() != k)
                    fail(name + " takes " + std::to_string(k) + " argument(s), got " +
                         std::to_string(args.size()));
            };
            if (name == "sin") {
                need(1);
                auto a = args[0];
                return [a](double x, double y, double t) { return std::sin(a(x, y, t)); };
            }
            if (name == "cos") {
                need(1);
                auto a = args[0];
                return [a](double x, double y, double t) { return std::cos(a(x, y, t)); };
            }
            if (name == "exp") {
                need(1);
                auto a = args[0];
                return [a](double x, double y, double t) { return std::exp(a(x, y, t)); };
            }
            if (name == "log") {
                need(1);
                auto a = args[0];
                return [a](double x, double y, double t) { return std::log(a(x, y, t)); };
            }
            if (name == "sqrt") {
                need(1);
                auto a = args[0];
                return [a](double x, double y, double t) { return std::sqrt(a(x, y, t)); };
            }
            if (name == "abs") {
                need(1);
                auto a = args[0];
                return [a](double x, double y, double t) { return std::fabs(a(x, y, t)); };
            }
            if (name == "min") {
                need(2);
                auto a = args[0], b = args[1];
                return [a, b](double x, double y, double t) {
                    return std::min(a(x, y, t), b(x, y, t));
                };
            }
            if (name == "max") {
                need(2);
                auto a = args[0], b = args[1];
                return [a, b](double x, double y, double t) {
                    return std::max(a(x, y, t), b(x, y, t));
                };
            }
            if (name == "pow") {
                need(2);
                auto a = args[0], b = args[1];
                return [a, b](double x, double y, double t) {
                    return std::pow(a(x, y, t), b(x, y, t));
                };
            }
            fail("unknown function '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

ExprFn parse_expression(const std::string& text) {
    Parser p(text);
    ExprFn fn = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return fn;
}

ScalarField make_expr_field(const std::string& text) {
    ScalarField f;
    f.label = text;
    ExprFn fn = parse_expression(text);
    f.sample = [fn](std::array<double, 3> x, double t) { return fn(x[0], x[1], t); };
    return f;
}

}  // namespace pucci
