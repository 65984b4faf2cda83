#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qmclose/rational.hpp"

using namespace qmclose;

TEST_CASE("bigint basics") {
    CHECK(BigInt(0).is_zero());
    CHECK(BigInt(0).to_string() == "0");
    CHECK(BigInt(-12345).to_string() == "-12345");
    CHECK((BigInt(1000000000LL) * BigInt(1000000000LL)).to_string() == "1000000000000000000");
    CHECK(BigInt::from_string("-000123").to_string() == "-123");
    CHECK(BigInt::from_string("123456789012345678901234567890").to_string() ==
          "123456789012345678901234567890");
}

TEST_CASE("bigint divmod property on random values") {
    std::mt19937_64 rng(42);
    for (int it = 0; it < 500; ++it) {
        long long a = static_cast<long long>(rng() % 2000000000) - 1000000000;
        long long b = static_cast<long long>(rng() % 100000) - 50000;
        if (b == 0) b = 7;
        BigInt A(a), B(b), q, r;
        BigInt::divmod(A, B, q, r);
        CHECK(q * B + r == A);
        CHECK(r.abs() < B.abs());
        // C semantics: remainder has the dividend's sign.
        if (!r.is_zero()) CHECK(r.is_negative() == A.is_negative());
    }
}

TEST_CASE("bigint divmod on wide values") {
    BigInt a = BigInt::from_string("123456789012345678901234567890123456789");
    BigInt b = BigInt::from_string("987654321987654321");
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    CHECK(q * b + r == a);
    CHECK(r >= BigInt(0));
    CHECK(r < b);
    CHECK(BigInt::gcd(a * b, b) == b);
}

TEST_CASE("bigint comparison and int64 bounds") {
    CHECK(BigInt(-5) < BigInt(3));
    CHECK(BigInt(3) < BigInt(5));
    CHECK(BigInt(-5) < BigInt(-3));
    long long v = 0;
    CHECK(BigInt::from_string("9223372036854775807").fits_int64(&v));
    CHECK(v == 9223372036854775807LL);
    CHECK(!BigInt::from_string("9223372036854775808").fits_int64(&v));
    CHECK(BigInt::from_string("-9223372036854775808").fits_int64(&v));
    CHECK(v == INT64_MIN);
}

TEST_CASE("rational arithmetic is normalized") {
    Rational r(6, 4);
    CHECK(r.num() == BigInt(3));
    CHECK(r.den() == BigInt(2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(1, 3) * Rational(3, 7)) == Rational(1, 7));
    CHECK((Rational(1, 3) - Rational(1, 3)).is_zero());
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(1, -2) < Rational(0));
    CHECK(Rational(2, 3).pow(3) == Rational(8, 27));
    CHECK(Rational::from_string("-7/21") == Rational(-1, 3));
}

TEST_CASE("random field axioms") {
    std::mt19937_64 rng(7);
    auto rnd = [&]() {
        long long n = static_cast<long long>(rng() % 2001) - 1000;
        long long d = 1 + static_cast<long long>(rng() % 50);
        return Rational(n, d);
    };
    for (int i = 0; i < 200; ++i) {
        Rational a = rnd(), b = rnd(), c = rnd();
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a + (b + c) == (a + b) + c);
        CHECK(a * (b * c) == (a * b) * c);
        if (!b.is_zero()) CHECK(a / b * b == a);
    }
}

TEST_CASE("exact double conversion round-trips") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        double x = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 100.0;
        Rational r = Rational::from_double_exact(x);
        CHECK(r.to_double() == x);
    }
    CHECK(Rational::from_double_exact(0.5) == Rational(1, 2));
    CHECK(Rational::from_double_exact(-0.25) == Rational(-1, 4));
}

TEST_CASE("continued fraction rationalization") {
    Rational r;
    REQUIRE(Rational::rationalize(0.5, 1000000, &r));
    CHECK(r == Rational(1, 2));
    REQUIRE(Rational::rationalize(1.0 / 3.0, 1000000, &r));
    CHECK(r == Rational(1, 3));
    REQUIRE(Rational::rationalize(-2.0 / 7.0, 1000000, &r));
    CHECK(r == Rational(-2, 7));
    // Solver-noise snapping: a value within 1e-9 of 1/2 recovers 1/2.
    REQUIRE(Rational::rationalize(0.5 + 1e-9, 1000000, &r));
    CHECK(r == Rational(1, 2));
    // Denominator cap respected.
    REQUIRE(Rational::rationalize(3.14159265358979, 1000, &r));
    long long den = 0;
    REQUIRE(r.den().fits_int64(&den));
    CHECK(den <= 1000);
    CHECK(std::abs(r.to_double() - 3.14159265358979) < 1e-5);
    CHECK(!Rational::rationalize(std::numeric_limits<double>::infinity(), 10, &r));
}

TEST_CASE("rational string round trip") {
    Rational r(BigInt::from_string("123456789012345678901"), BigInt::from_string("3333333333333333"));
    Rational back = Rational::from_string(r.to_string());
    CHECK(back == r);
}
