#include "qmclose/polynomial.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace qmclose {

Polynomial Polynomial::constant(std::vector<std::string> vars, const Rational& c) {
    Polynomial p(std::move(vars));
    if (!c.is_zero()) p.terms_[Monomial{std::vector<int>(p.nvars(), 0)}] = c;
    return p;
}

Polynomial Polynomial::variable(std::vector<std::string> vars, size_t index) {
    if (index >= vars.size()) throw std::invalid_argument("variable index out of range");
    Polynomial p(std::move(vars));
    Monomial m{std::vector<int>(p.nvars(), 0)};
    m.exps[index] = 1;
    p.terms_[m] = Rational(1);
    return p;
}

Polynomial Polynomial::monomial_term(std::vector<std::string> vars, Monomial m, const Rational& c) {
    Polynomial p(std::move(vars));
    if (m.exps.size() != p.nvars()) throw std::invalid_argument("monomial arity mismatch");
    if (!c.is_zero()) p.terms_[std::move(m)] = c;
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

int Polynomial::degree() const {
    if (terms_.empty()) return -1;
    return terms_.rbegin()->first.degree();
}

Rational Polynomial::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational() : it->second;
}

void Polynomial::set_coeff(const Monomial& m, const Rational& c) {
    if (m.exps.size() != nvars()) throw std::invalid_argument("monomial arity mismatch");
    if (c.is_zero())
        terms_.erase(m);
    else
        terms_[m] = c;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (m.exps.size() != nvars()) throw std::invalid_argument("monomial arity mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_[m] = c;
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

void Polynomial::require_same_vars(const Polynomial& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("polynomial variable sets differ");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    require_same_vars(o);
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    require_same_vars(o);
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(vars_);
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    require_same_vars(o);
    Polynomial r(vars_);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m = ma;
            for (size_t i = 0; i < m.exps.size(); ++i) m.exps[i] += mb.exps[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::scale(const Rational& c) const {
    Polynomial r(vars_);
    if (c.is_zero()) return r;
    for (const auto& [m, cc] : terms_) r.terms_[m] = cc * c;
    return r;
}

Polynomial Polynomial::substitute(const std::string& var, const Rational& value) const {
    auto it = std::find(vars_.begin(), vars_.end(), var);
    if (it == vars_.end()) throw std::invalid_argument("unknown variable: " + var);
    size_t idx = static_cast<size_t>(it - vars_.begin());
    std::vector<std::string> rest = vars_;
    rest.erase(rest.begin() + static_cast<long>(idx));
    Polynomial r(rest);
    for (const auto& [m, c] : terms_) {
        Monomial rm;
        rm.exps = m.exps;
        rm.exps.erase(rm.exps.begin() + static_cast<long>(idx));
        r.add_term(rm, c * value.pow(static_cast<unsigned>(m.exps[idx])));
    }
    return r;
}

double Polynomial::evaluate(const VariableAssignment& point) const {
    std::vector<double> vals(nvars());
    for (size_t i = 0; i < nvars(); ++i) {
        auto it = point.find(vars_[i]);
        if (it == point.end()) throw std::invalid_argument("assignment misses variable " + vars_[i]);
        vals[i] = it->second;
    }
    double acc = 0;
    for (const auto& [m, c] : terms_) {
        double t = c.to_double();
        for (size_t i = 0; i < vals.size(); ++i)
            for (int e = 0; e < m.exps[i]; ++e) t *= vals[i];
        acc += t;
    }
    return acc;
}

Rational Polynomial::evaluate_exact(const std::vector<Rational>& point) const {
    if (point.size() != nvars()) throw std::invalid_argument("assignment arity mismatch");
    Rational acc;
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (size_t i = 0; i < point.size(); ++i)
            t *= point[i].pow(static_cast<unsigned>(m.exps[i]));
        acc += t;
    }
    return acc;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial r = Polynomial::constant(vars_, Rational(1));
    Polynomial base = *this;
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Print leading term last in map order reversed (highest degree first).
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational a = c.abs();
        if (first) {
            if (c.sign() < 0) os << "-";
            first = false;
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        bool unit = a == Rational(1);
        bool constant_term = m.degree() == 0;
        if (!unit || constant_term) os << a.to_string();
        bool any = false;
        for (size_t i = 0; i < vars_.size(); ++i) {
            if (m.exps[i] == 0) continue;
            if (any || !unit) os << "*";
            os << vars_[i];
            if (m.exps[i] > 1) os << "^" << m.exps[i];
            any = true;
        }
        first = false;
    }
    return os.str();
}

unsigned long long binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned long long r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<Monomial> monomial_basis(int nvars, int maxdeg) {
    if (nvars < 0 || maxdeg < 0) throw std::invalid_argument("monomial_basis: bad arguments");
    std::vector<Monomial> out;
    Monomial cur{std::vector<int>(static_cast<size_t>(nvars), 0)};
    // Enumerate by total degree, then lexicographically within a degree.
    for (int d = 0; d <= maxdeg; ++d) {
        std::vector<Monomial> level;
        std::vector<int> e(static_cast<size_t>(nvars), 0);
        // Recursive enumeration without recursion: odometer over exponents
        // summing to d.
        if (nvars == 0) {
            if (d == 0) out.push_back(Monomial{{}});
            continue;
        }
        std::function<void(size_t, int)> rec = [&](size_t i, int rem) {
            if (i + 1 == static_cast<size_t>(nvars)) {
                e[i] = rem;
                level.push_back(Monomial{e});
                return;
            }
            for (int v = rem; v >= 0; --v) {
                e[i] = v;
                rec(i + 1, rem - v);
            }
        };
        rec(0, d);
        std::sort(level.begin(), level.end(), [](const Monomial& a, const Monomial& b) { return a.exps < b.exps; });
        for (auto& m : level) out.push_back(std::move(m));
    }
    return out;
}

Polynomial perturber(const std::vector<std::string>& vars, int e) {
    if (e < 1) throw std::invalid_argument("perturber: e must be >= 1");
    Polynomial g = Polynomial::constant(vars, Rational(1));
    for (size_t i = 0; i < vars.size(); ++i) {
        Polynomial xi = Polynomial::variable(vars, i);
        g = g + xi * xi;
    }
    return g.pow(static_cast<unsigned>(e));
}

}  // namespace qmclose
