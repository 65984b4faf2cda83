#include <cctype>
#include <stdexcept>

#include "qmclose/polynomial.hpp"

namespace qmclose {

namespace {

// expr   := term (('+'|'-') term)*
// term   := factor ('*' factor)*
// factor := atom ('^' uint)?
// atom   := '(' expr ')' | '-' factor | rational | var
struct Parser {
    const std::string& s;
    size_t pos = 0;
    const std::vector<std::string>& vars;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("parse error at position " + std::to_string(pos) + ": " + what);
    }

    Polynomial expr() {
        Polynomial r = term();
        for (;;) {
            skip();
            if (eat('+'))
                r = r + term();
            else if (eat('-'))
                r = r - term();
            else
                return r;
        }
    }

    Polynomial term() {
        Polynomial r = factor();
        for (;;) {
            skip();
            if (eat('*'))
                r = r * factor();
            else
                return r;
        }
    }

    Polynomial factor() {
        Polynomial base = atom();
        skip();
        if (eat('^')) {
            skip();
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected exponent");
            return base.pow(static_cast<unsigned>(std::stoul(s.substr(start, pos - start))));
        }
        return base;
    }

    Polynomial atom() {
        skip();
        if (eat('(')) {
            Polynomial r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (pos < s.size() && s[pos] == '-') {
            ++pos;
            return -factor();
        }
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            std::string numpart = s.substr(start, pos - start);
            if (eat('/')) {
                skip();
                size_t ds = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (pos == ds) fail("expected denominator");
                return Polynomial::constant(
                    vars, Rational(BigInt::from_string(numpart), BigInt::from_string(s.substr(ds, pos - ds))));
            }
            return Polynomial::constant(vars, Rational(BigInt::from_string(numpart), BigInt(1)));
        }
        if (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            for (size_t i = 0; i < vars.size(); ++i)
                if (vars[i] == name) return Polynomial::variable(vars, i);
            fail("unknown variable '" + name + "'");
        }
        fail("expected atom");
    }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
    Parser p{text, 0, vars};
    Polynomial r = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return r;
}

}  // namespace qmclose
