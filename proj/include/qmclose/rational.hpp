#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmclose {

// Arbitrary-precision signed integer, sign-magnitude, base 10^9 limbs
// (little endian).  Sized for certificate arithmetic, not number theory.
class BigInt {
  public:
    BigInt() = default;
    BigInt(long long v);
    static BigInt from_string(const std::string& s);

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return neg_; }
    int sign() const { return limbs_.empty() ? 0 : (neg_ ? -1 : 1); }

    BigInt operator-() const;
    BigInt operator+(const BigInt& o) const;
    BigInt operator-(const BigInt& o) const;
    BigInt operator*(const BigInt& o) const;
    // Truncated division (C semantics: quotient rounds toward zero).
    BigInt operator/(const BigInt& o) const;
    BigInt operator%(const BigInt& o) const;
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

    bool operator==(const BigInt& o) const { return neg_ == o.neg_ && limbs_ == o.limbs_; }
    bool operator!=(const BigInt& o) const { return !(*this == o); }
    bool operator<(const BigInt& o) const;
    bool operator<=(const BigInt& o) const { return *this < o || *this == o; }
    bool operator>(const BigInt& o) const { return o < *this; }
    bool operator>=(const BigInt& o) const { return o <= *this; }

    static BigInt gcd(BigInt a, BigInt b);
    BigInt abs() const;

    std::string to_string() const;
    double to_double() const;
    // True when the value fits in int64 (then *out = value).
    bool fits_int64(long long* out) const;

  private:
    static constexpr uint32_t kBase = 1000000000u;
    std::vector<uint32_t> limbs_;
    bool neg_ = false;

    void trim();
    static int cmp_abs(const BigInt& a, const BigInt& b);
    static BigInt add_abs(const BigInt& a, const BigInt& b);
    static BigInt sub_abs(const BigInt& a, const BigInt& b);  // |a| >= |b|
    static BigInt mul_small(const BigInt& a, uint32_t m);
};

// Exact rational, always normalized: gcd(num,den)=1, den > 0.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d);
    Rational(BigInt n, BigInt d);

    static Rational from_string(const std::string& s);  // "p/q" or "p"
    // Exact value of the double (every finite double is rational).
    static Rational from_double_exact(double x);
    // Best continued-fraction approximation with denominator <= max_den.
    // Returns false when x is not finite.
    static bool rationalize(double x, long long max_den, Rational* out);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    Rational operator-() const;
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    Rational abs() const { return sign() < 0 ? -*this : *this; }
    Rational pow(unsigned e) const;

    double to_double() const;
    std::string to_string() const;  // "p/q", or "p" when q = 1

  private:
    BigInt num_, den_;
    void normalize();
};

}  // namespace qmclose
