#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qmclose/json_io.hpp"
#include "qmclose/polynomial.hpp"

using namespace qmclose;

namespace {

const std::vector<std::string> kXY = {"x", "y"};

Polynomial random_poly(std::mt19937_64& rng, const std::vector<std::string>& vars, int maxdeg,
                       int terms) {
    Polynomial p(vars);
    for (int t = 0; t < terms; ++t) {
        Monomial m{std::vector<int>(vars.size(), 0)};
        int deg = static_cast<int>(rng() % (maxdeg + 1));
        for (int d = 0; d < deg; ++d) m.exps[rng() % vars.size()] += 1;
        long long num = static_cast<long long>(rng() % 41) - 20;
        long long den = 1 + static_cast<long long>(rng() % 6);
        p.add_term(m, Rational(num, den));
    }
    return p;
}

}  // namespace

TEST_CASE("difference of squares") {
    Polynomial x = Polynomial::variable({"x"}, 0);
    Polynomial one = Polynomial::constant({"x"}, Rational(1));
    Polynomial prod = (x + one) * (x - one);
    CHECK(prod == x * x - one);
    CHECK(prod.to_string() == "x^2 - 1");
}

TEST_CASE("multiplication by zero annihilates") {
    std::mt19937_64 rng(3);
    Polynomial p = random_poly(rng, kXY, 4, 6);
    Polynomial zero(kXY);
    CHECK((p * zero).is_zero());
    CHECK(p.scale(Rational(0)).is_zero());
}

TEST_CASE("x^2(1-x) + x(1-x)^2 collapses to x(1-x)") {
    std::vector<std::string> vars = {"x"};
    Polynomial x = Polynomial::variable(vars, 0);
    Polynomial one = Polynomial::constant(vars, Rational(1));
    Polynomial lhs = x * x * (one - x) + x * (one - x) * (one - x);
    CHECK(lhs == x * (one - x));
}

TEST_CASE("variable set mismatch is an error") {
    Polynomial p = Polynomial::variable({"x"}, 0);
    Polynomial q = Polynomial::variable({"x", "y"}, 0);
    CHECK_THROWS_AS(p + q, std::invalid_argument);
    CHECK_THROWS_AS(p * q, std::invalid_argument);
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 40; ++it) {
        Polynomial a = random_poly(rng, kXY, 3, 4);
        Polynomial b = random_poly(rng, kXY, 3, 4);
        Polynomial c = random_poly(rng, kXY, 3, 4);
        CHECK(a * (b * c) == (a * b) * c);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        if (!a.is_zero() && !b.is_zero()) CHECK((a * b).degree() == a.degree() + b.degree());
    }
}

TEST_CASE("substitution examples") {
    std::vector<std::string> vars = {"x1", "x2"};
    Polynomial x1 = Polynomial::variable(vars, 0);
    Polynomial x2 = Polynomial::variable(vars, 1);
    Polynomial p = x1 * x2 * x2;
    Polynomial s = p.substitute("x1", Rational(2));
    CHECK(s.vars() == std::vector<std::string>{"x2"});
    Polynomial expect = Polynomial::variable({"x2"}, 0);
    expect = expect * expect;
    CHECK(s == expect.scale(Rational(2)));

    Polynomial q = Polynomial::constant(vars, Rational(1)) - x1;
    CHECK(q.substitute("x1", Rational(1)).is_zero());
    CHECK_THROWS_AS(q.substitute("z", Rational(1)), std::invalid_argument);
}

TEST_CASE("zero fiber of the product instance leaves a negative constant") {
    // lambda * x2 - c at lambda = 0 is the negative constant -c.
    std::vector<std::string> vars = {"x1", "x2"};
    Polynomial gen = Polynomial::variable(vars, 0) * Polynomial::variable(vars, 1) -
                     Polynomial::constant(vars, Rational(1, 4));
    Polynomial fiber = gen.substitute("x1", Rational(0));
    CHECK(fiber.degree() == 0);
    CHECK(fiber.coeff(Monomial{{0}}) == Rational(-1, 4));
}

TEST_CASE("substitution is a ring homomorphism") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 30; ++it) {
        Polynomial p = random_poly(rng, kXY, 3, 4);
        Polynomial q = random_poly(rng, kXY, 3, 4);
        Rational a(static_cast<long long>(rng() % 11) - 5, 1 + static_cast<long long>(rng() % 4));
        std::string v = rng() % 2 ? "x" : "y";
        CHECK((p * q).substitute(v, a) == p.substitute(v, a) * q.substitute(v, a));
        CHECK((p + q).substitute(v, a) == p.substitute(v, a) + q.substitute(v, a));
    }
}

TEST_CASE("monomial basis counts and order") {
    auto b21 = monomial_basis(2, 1);
    REQUIRE(b21.size() == 3);
    CHECK(b21[0].exps == std::vector<int>{0, 0});
    CHECK(b21[1].exps == std::vector<int>{0, 1});
    CHECK(b21[2].exps == std::vector<int>{1, 0});

    auto b14 = monomial_basis(1, 4);
    REQUIRE(b14.size() == 5);
    for (int d = 0; d <= 4; ++d) CHECK(b14[static_cast<size_t>(d)].exps[0] == d);

    CHECK(monomial_basis(3, 2).size() == 10);  // C(5,2)
    CHECK(monomial_basis(4, 3).size() == binomial(7, 3));

    // Graded-lex: degrees ascend, ties broken lexicographically.
    auto b = monomial_basis(3, 3);
    GradedLexLess less;
    for (size_t i = 1; i < b.size(); ++i) CHECK(less(b[i - 1], b[i]));
}

TEST_CASE("perturber expansion") {
    CHECK(perturber({"x"}, 1).to_string() == "x^2 + 1");
    CHECK(perturber({"x", "y"}, 1).to_string() == "x^2 + y^2 + 1");
    Polynomial g12 = perturber({"x"}, 2);
    Polynomial x = Polynomial::variable({"x"}, 0);
    Polynomial one = Polynomial::constant({"x"}, Rational(1));
    CHECK(g12 == x.pow(4) + (x * x).scale(Rational(2)) + one);
    // deg(perturber(n, e)) = 2e, the degree margin the construction needs.
    for (int e = 1; e <= 4; ++e) CHECK(perturber({"x", "y"}, e).degree() == 2 * e);
}

TEST_CASE("evaluation matches exact evaluation") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 30; ++it) {
        Polynomial p = random_poly(rng, kXY, 4, 6);
        Rational ax(static_cast<long long>(rng() % 9) - 4, 1 + static_cast<long long>(rng() % 3));
        Rational ay(static_cast<long long>(rng() % 9) - 4, 1 + static_cast<long long>(rng() % 3));
        double approx = p.evaluate({{"x", ax.to_double()}, {"y", ay.to_double()}});
        double exact = p.evaluate_exact({ax, ay}).to_double();
        CHECK(approx == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("polynomial json round trip is bit exact") {
    std::mt19937_64 rng(37);
    for (int it = 0; it < 20; ++it) {
        Polynomial p = random_poly(rng, kXY, 5, 8);
        Json j = to_json(p);
        CHECK(polynomial_from_json(j) == p);
    }
    // Large coefficients fall back to strings and still round-trip.
    Polynomial big(kXY);
    big.add_term(Monomial{{1, 1}}, Rational(BigInt::from_string("123456789123456789123456789"),
                                            BigInt::from_string("987654321987654321")));
    CHECK(polynomial_from_json(to_json(big)) == big);
}

TEST_CASE("infix parser handles the restricted grammar") {
    std::vector<std::string> vars = {"x1", "x2"};
    Polynomial p = parse_polynomial("1 - x1", vars);
    CHECK(p == Polynomial::constant(vars, Rational(1)) - Polynomial::variable(vars, 0));
    Polynomial q = parse_polynomial("x1^2*x2 - 3/2*x2 + (x1 - x2)^2", vars);
    Polynomial x1 = Polynomial::variable(vars, 0), x2 = Polynomial::variable(vars, 1);
    CHECK(q == x1 * x1 * x2 - x2.scale(Rational(3, 2)) + (x1 - x2) * (x1 - x2));
    CHECK(parse_polynomial("-x1", vars) == -x1);
    CHECK_THROWS_AS(parse_polynomial("z + 1", vars), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("x1 +", vars), std::invalid_argument);
}
