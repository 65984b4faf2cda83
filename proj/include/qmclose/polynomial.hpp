#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmclose/rational.hpp"

namespace qmclose {

// Exponent vector, one entry per ambient variable.
struct Monomial {
    std::vector<int> exps;

    int degree() const {
        int d = 0;
        for (int e : exps) d += e;
        return d;
    }
    bool operator==(const Monomial& o) const { return exps == o.exps; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }
};

// Graded lexicographic: compare total degree first, then exponents left
// to right.  Fixed globally so bases and certificates are reproducible.
struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.exps < b.exps;
    }
};

using VariableAssignment = std::map<std::string, double>;

// Sparse multivariate polynomial over exact rationals.
class Polynomial {
  public:
    using TermMap = std::map<Monomial, Rational, GradedLexLess>;

    Polynomial() = default;
    explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}
    static Polynomial constant(std::vector<std::string> vars, const Rational& c);
    static Polynomial variable(std::vector<std::string> vars, size_t index);
    static Polynomial monomial_term(std::vector<std::string> vars, Monomial m, const Rational& c);

    const std::vector<std::string>& vars() const { return vars_; }
    size_t nvars() const { return vars_.size(); }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    int degree() const;  // -1 for the zero polynomial

    Rational coeff(const Monomial& m) const;
    void set_coeff(const Monomial& m, const Rational& c);
    void add_term(const Monomial& m, const Rational& c);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scale(const Rational& c) const;

    bool operator==(const Polynomial& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // p with var := value, expressed over the remaining variables.
    Polynomial substitute(const std::string& var, const Rational& value) const;

    double evaluate(const VariableAssignment& point) const;
    Rational evaluate_exact(const std::vector<Rational>& point) const;

    Polynomial pow(unsigned e) const;
    std::string to_string() const;

  private:
    std::vector<std::string> vars_;
    TermMap terms_;

    void require_same_vars(const Polynomial& o) const;
};

// All monomials in nvars variables of total degree <= maxdeg, graded lex
// ascending; count = C(nvars+maxdeg, maxdeg).
std::vector<Monomial> monomial_basis(int nvars, int maxdeg);

// (1 + x_1^2 + ... + x_n^2)^e, expanded.
Polynomial perturber(const std::vector<std::string>& vars, int e);

unsigned long long binomial(unsigned n, unsigned k);

// Restricted infix grammar: + - * ^, integer/rational literals, variable
// names, parentheses, unary minus.
Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars);

}  // namespace qmclose
