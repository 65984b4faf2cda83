#include "qmclose/instances.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace qmclose {

namespace {

std::vector<std::string> xvars(int n) {
    std::vector<std::string> v;
    for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
    return v;
}

Polynomial coordinate_product(const std::vector<std::string>& vars, int upto) {
    Polynomial p = Polynomial::constant(vars, Rational(1));
    for (int i = 0; i < upto; ++i) p = p * Polynomial::variable(vars, static_cast<size_t>(i));
    return p;
}

}  // namespace

QuadraticModuleSpec instance_ball(int n) {
    if (n < 1) throw std::invalid_argument("ball: need n >= 1");
    QuadraticModuleSpec M;
    M.vars = xvars(n);
    M.kind = ModuleKind::quadratic_module;
    M.name = "ball:" + std::to_string(n);
    Polynomial g = Polynomial::constant(M.vars, Rational(1));
    for (int i = 0; i < n; ++i) {
        Polynomial xi = Polynomial::variable(M.vars, static_cast<size_t>(i));
        g = g - xi * xi;
    }
    M.generators.push_back(g);
    return M;
}

QuadraticModuleSpec instance_3_3(int n, const Rational& c) {
    if (n < 2) throw std::invalid_argument("example_3_3: need n >= 2");
    if (c.sign() <= 0) throw std::invalid_argument("example_3_3: c must be positive");
    QuadraticModuleSpec M;
    M.vars = xvars(n);
    M.kind = ModuleKind::quadratic_module;
    M.name = "example_3_3:" + std::to_string(n) + ":" + c.to_string();
    for (int i = 0; i < n; ++i)
        M.generators.push_back(Polynomial::variable(M.vars, static_cast<size_t>(i)) -
                               Polynomial::constant(M.vars, Rational(1)));
    M.generators.push_back(Polynomial::constant(M.vars, c) - coordinate_product(M.vars, n));
    return M;
}

QuadraticModuleSpec instance_3_4(int n, const Rational& c) {
    if (n < 2) throw std::invalid_argument("example_3_4: need n >= 2");
    if (c.sign() <= 0) throw std::invalid_argument("example_3_4: c must be positive");
    QuadraticModuleSpec M;
    M.vars = xvars(n);
    M.kind = ModuleKind::quadratic_module;
    M.name = "example_3_4:" + std::to_string(n) + ":" + c.to_string();
    for (int i = 0; i < n; ++i)
        M.generators.push_back(Polynomial::constant(M.vars, Rational(1)) -
                               Polynomial::variable(M.vars, static_cast<size_t>(i)));
    M.generators.push_back(coordinate_product(M.vars, n) - Polynomial::constant(M.vars, c));
    // x1*xn^2, x1*x2*xn^2, ..., x1*...*x_{n-1}*xn^2
    Polynomial xn = Polynomial::variable(M.vars, static_cast<size_t>(n - 1));
    for (int k = 1; k <= n - 1; ++k)
        M.generators.push_back(coordinate_product(M.vars, k) * xn * xn);
    return M;
}

namespace {

QuadraticModuleSpec strip_preordering(const Polynomial& gen, const std::string& name) {
    QuadraticModuleSpec M;
    M.vars = gen.vars();
    M.kind = ModuleKind::preordering;
    M.name = name;
    M.generators.push_back(gen);
    return M;
}

}  // namespace

QuadraticModuleSpec instance_4_2() {
    std::vector<std::string> vars = {"x", "y"};
    Polynomial x = Polynomial::variable(vars, 0), y = Polynomial::variable(vars, 1);
    Polynomial one = Polynomial::constant(vars, Rational(1));
    return strip_preordering((one - x) * x * y * y, "example_4_2");
}

QuadraticModuleSpec instance_4_2_n() {
    std::vector<std::string> vars = {"x", "y"};
    Polynomial x = Polynomial::variable(vars, 0);
    Polynomial one = Polynomial::constant(vars, Rational(1));
    return strip_preordering((one - x) * x, "example_4_2_n");
}

QuadraticModuleSpec instance_couex() {
    std::vector<std::string> vars = {"x", "y"};
    Polynomial x = Polynomial::variable(vars, 0);
    Polynomial one = Polynomial::constant(vars, Rational(1));
    return strip_preordering((one - x) * x * x * x, "couex");
}

QuadraticModuleSpec instance_couex_m() {
    std::vector<std::string> vars = {"x", "y"};
    Polynomial x = Polynomial::variable(vars, 0), y = Polynomial::variable(vars, 1);
    Polynomial one = Polynomial::constant(vars, Rational(1));
    return strip_preordering((one - x) * x * x * x * y * y, "couex_m");
}

QuadraticModuleSpec get_instance(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    std::string name = parts[0];
    if (name.rfind("example_", 0) == 0) name = name.substr(8);

    auto want_args = [&](size_t k) {
        if (parts.size() != k + 1)
            throw std::invalid_argument("instance " + name + ": expected " + std::to_string(k) +
                                        " argument(s)");
    };
    auto int_arg = [&](size_t i) { return std::stoi(parts[i]); };
    auto rat_arg = [&](size_t i) { return Rational::from_string(parts[i]); };

    if (name == "ball") {
        want_args(1);
        return instance_ball(int_arg(1));
    }
    if (name == "3_3") {
        want_args(2);
        return instance_3_3(int_arg(1), rat_arg(2));
    }
    if (name == "3_4") {
        want_args(2);
        return instance_3_4(int_arg(1), rat_arg(2));
    }
    if (name == "4_2") {
        want_args(0);
        return instance_4_2();
    }
    if (name == "4_2_n") {
        want_args(0);
        return instance_4_2_n();
    }
    if (name == "couex") {
        want_args(0);
        return instance_couex();
    }
    if (name == "couex_m") {
        want_args(0);
        return instance_couex_m();
    }
    throw std::invalid_argument("unknown instance: " + text);
}

std::vector<std::string> instance_names() {
    return {"ball:<n>",        "example_3_3:<n>:<c>", "example_3_4:<n>:<c>", "example_4_2",
            "example_4_2_n",   "couex",               "couex_m"};
}

std::vector<std::vector<double>> sample_k_points(const QuadraticModuleSpec& M, int count,
                                                 uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    size_t n = M.vars.size();

    // Instance-aware sampling boxes; the hyperbola-corner module with c = 1
    // cuts out the single point (1,...,1).
    double lo = -2.0, hi = 2.0;
    bool corner = false;
    if (M.name.rfind("ball", 0) == 0) {
        lo = -1.0;
        hi = 1.0;
    } else if (M.name.rfind("example_3_3", 0) == 0) {
        lo = 1.0;
        hi = 3.0;
        Polynomial last = M.generators.back();  // c - prod x_i
        Monomial zero{std::vector<int>(n, 0)};
        if (last.coeff(zero) == Rational(1)) corner = true;
    } else if (M.name.rfind("example_3_4", 0) == 0) {
        lo = 0.0;
        hi = 1.0;
    } else if (!M.name.empty() && (M.name[0] == 'e' || M.name == "couex" || M.name == "couex_m" ||
                                   M.name.rfind("example_4_2", 0) == 0)) {
        lo = -1.0;
        hi = 2.0;
    }

    std::vector<std::vector<double>> pts;
    int guard = 0;
    while (static_cast<int>(pts.size()) < count && guard < 200000) {
        ++guard;
        std::vector<double> p(n);
        if (corner) {
            for (auto& v : p) v = 1.0;
        } else {
            for (auto& v : p) v = lo + (hi - lo) * unit();
        }
        bool ok = true;
        VariableAssignment assign;
        for (size_t i = 0; i < n; ++i) assign[M.vars[i]] = p[i];
        for (const auto& g : M.generators)
            if (g.evaluate(assign) < 0) {
                ok = false;
                break;
            }
        if (ok) pts.push_back(std::move(p));
    }
    if (static_cast<int>(pts.size()) < count)
        throw std::runtime_error("sample_k_points: rejection sampling failed for " + M.name);
    return pts;
}

}  // namespace qmclose
