#include "qmclose/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace qmclose {

BigInt::BigInt(long long v) {
    if (v < 0) { neg_ = true; }
    unsigned long long a = neg_ ? -static_cast<unsigned long long>(v) : static_cast<unsigned long long>(v);
    while (a > 0) {
        limbs_.push_back(static_cast<uint32_t>(a % kBase));
        a /= kBase;
    }
}

BigInt BigInt::from_string(const std::string& s) {
    BigInt r;
    size_t start = 0;
    if (start < s.size() && (s[start] == '+' || s[start] == '-')) {
        r.neg_ = s[start] == '-';
        ++start;
    }
    if (start >= s.size()) throw std::invalid_argument("BigInt: empty string");
    for (size_t i = start; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
    for (size_t end = s.size(); end > start;) {
        size_t begin = end >= start + 9 ? end - 9 : start;
        r.limbs_.push_back(static_cast<uint32_t>(std::strtoul(s.substr(begin, end - begin).c_str(), nullptr, 10)));
        end = begin;
    }
    r.trim();
    return r;
}

void BigInt::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) neg_ = false;
}

int BigInt::cmp_abs(const BigInt& a, const BigInt& b) {
    if (a.limbs_.size() != b.limbs_.size())
        return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (size_t i = a.limbs_.size(); i-- > 0;)
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    return 0;
}

BigInt BigInt::add_abs(const BigInt& a, const BigInt& b) {
    BigInt r;
    uint32_t carry = 0;
    size_t n = std::max(a.limbs_.size(), b.limbs_.size());
    r.limbs_.reserve(n + 1);
    for (size_t i = 0; i < n || carry; ++i) {
        uint64_t s = carry;
        if (i < a.limbs_.size()) s += a.limbs_[i];
        if (i < b.limbs_.size()) s += b.limbs_[i];
        r.limbs_.push_back(static_cast<uint32_t>(s % kBase));
        carry = static_cast<uint32_t>(s / kBase);
    }
    return r;
}

BigInt BigInt::sub_abs(const BigInt& a, const BigInt& b) {
    BigInt r;
    int64_t borrow = 0;
    r.limbs_.reserve(a.limbs_.size());
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
        int64_t d = static_cast<int64_t>(a.limbs_[i]) - borrow - (i < b.limbs_.size() ? b.limbs_[i] : 0);
        if (d < 0) { d += kBase; borrow = 1; } else { borrow = 0; }
        r.limbs_.push_back(static_cast<uint32_t>(d));
    }
    r.trim();
    return r;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    if (!r.limbs_.empty()) r.neg_ = !r.neg_;
    return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
    if (neg_ == o.neg_) {
        BigInt r = add_abs(*this, o);
        r.neg_ = neg_ && !r.limbs_.empty();
        return r;
    }
    int c = cmp_abs(*this, o);
    if (c == 0) return BigInt();
    BigInt r = c > 0 ? sub_abs(*this, o) : sub_abs(o, *this);
    r.neg_ = (c > 0 ? neg_ : o.neg_) && !r.limbs_.empty();
    return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
    if (is_zero() || o.is_zero()) return BigInt();
    BigInt r;
    r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < o.limbs_.size() || carry; ++j) {
            uint64_t cur = r.limbs_[i + j] + carry;
            if (j < o.limbs_.size())
                cur += static_cast<uint64_t>(limbs_[i]) * o.limbs_[j];
            r.limbs_[i + j] = static_cast<uint32_t>(cur % kBase);
            carry = cur / kBase;
        }
    }
    r.neg_ = neg_ != o.neg_;
    r.trim();
    return r;
}

BigInt BigInt::mul_small(const BigInt& a, uint32_t m) {
    BigInt r;
    uint64_t carry = 0;
    r.limbs_.reserve(a.limbs_.size() + 1);
    for (size_t i = 0; i < a.limbs_.size() || carry; ++i) {
        uint64_t cur = carry;
        if (i < a.limbs_.size()) cur += static_cast<uint64_t>(a.limbs_[i]) * m;
        r.limbs_.push_back(static_cast<uint32_t>(cur % kBase));
        carry = cur / kBase;
    }
    r.trim();
    return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
    if (cmp_abs(a, b) < 0) {
        q = BigInt();
        r = a;
        return;
    }
    // Schoolbook long division; the quotient limb is found by binary search,
    // which avoids the normalization fuss of the classic estimate.
    BigInt rem;
    BigInt quot;
    quot.limbs_.assign(a.limbs_.size(), 0);
    BigInt babs = b.abs();
    for (size_t i = a.limbs_.size(); i-- > 0;) {
        rem.limbs_.insert(rem.limbs_.begin(), a.limbs_[i]);
        rem.trim();
        uint32_t lo = 0, hi = kBase - 1, digit = 0;
        while (lo <= hi) {
            uint32_t mid = lo + (hi - lo) / 2;
            if (cmp_abs(mul_small(babs, mid), rem) <= 0) {
                digit = mid;
                if (mid == kBase - 1) break;
                lo = mid + 1;
            } else {
                if (mid == 0) break;
                hi = mid - 1;
            }
        }
        quot.limbs_[i] = digit;
        if (digit) rem = sub_abs(rem, mul_small(babs, digit));
    }
    quot.trim();
    quot.neg_ = (a.neg_ != b.neg_) && !quot.limbs_.empty();
    rem.neg_ = a.neg_ && !rem.limbs_.empty();
    q = quot;
    r = rem;
}

BigInt BigInt::operator/(const BigInt& o) const {
    BigInt q, r;
    divmod(*this, o, q, r);
    return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
    BigInt q, r;
    divmod(*this, o, q, r);
    return r;
}

bool BigInt::operator<(const BigInt& o) const {
    if (neg_ != o.neg_) return neg_;
    int c = cmp_abs(*this, o);
    return neg_ ? c > 0 : c < 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.neg_ = false;
    b.neg_ = false;
    while (!b.is_zero()) {
        BigInt q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
    }
    return a;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    r.neg_ = false;
    return r;
}

std::string BigInt::to_string() const {
    if (limbs_.empty()) return "0";
    std::string s = neg_ ? "-" : "";
    s += std::to_string(limbs_.back());
    char buf[10];
    for (size_t i = limbs_.size() - 1; i-- > 0;) {
        std::snprintf(buf, sizeof buf, "%09u", limbs_[i]);
        s += buf;
    }
    return s;
}

double BigInt::to_double() const {
    double v = 0;
    for (size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
    return neg_ ? -v : v;
}

bool BigInt::fits_int64(long long* out) const {
    // |int64 max| has 19 digits; three limbs may already overflow.
    if (limbs_.size() > 3) return false;
    unsigned long long v = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
        if (v > (~0ull - limbs_[i]) / kBase) return false;
        v = v * kBase + limbs_[i];
    }
    if (neg_) {
        if (v > 9223372036854775808ull) return false;
        *out = v == 9223372036854775808ull ? INT64_MIN : -static_cast<long long>(v);
    } else {
        if (v > 9223372036854775807ull) return false;
        *out = static_cast<long long>(v);
    }
    return true;
}

// ---------------------------------------------------------------------------

Rational::Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }
Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

void Rational::normalize() {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (den_.is_negative()) { num_ = -num_; den_ = -den_; }
    if (num_.is_zero()) { den_ = BigInt(1); return; }
    BigInt g = BigInt::gcd(num_, den_);
    if (g != BigInt(1)) { num_ = num_ / g; den_ = den_ / g; }
}

Rational Rational::from_string(const std::string& s) {
    size_t slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt::from_string(s), BigInt(1));
    return Rational(BigInt::from_string(s.substr(0, slash)), BigInt::from_string(s.substr(slash + 1)));
}

Rational Rational::from_double_exact(double x) {
    if (!std::isfinite(x)) throw std::domain_error("Rational: non-finite double");
    if (x == 0.0) return Rational();
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    // 53 doublings make the mantissa integral.
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    BigInt num(mant), den(1);
    BigInt two(2);
    for (int i = 0; i < exp; ++i) num = num * two;
    for (int i = 0; i < -exp; ++i) den = den * two;
    return Rational(std::move(num), std::move(den));
}

bool Rational::rationalize(double x, long long max_den, Rational* out) {
    if (!std::isfinite(x)) return false;
    bool neg = x < 0;
    double v = std::fabs(x);
    // Continued fraction convergents p/q until the denominator cap.
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(frac);
        if (fl > 9e17) break;
        long long a = static_cast<long long>(fl);
        if (q1 > 0 && a > (max_den - q0) / q1) break;  // q2 would exceed cap
        long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double rem = frac - fl;
        if (rem < 1e-18 || q1 >= max_den) break;
        frac = 1.0 / rem;
    }
    if (q1 == 0) return false;
    *out = Rational(neg ? -p1 : p1, q1);
    return true;
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(num_ * o.den_, den_ * o.num_);
}

bool Rational::operator<(const Rational& o) const {
    return num_ * o.den_ < o.num_ * den_;
}

Rational Rational::pow(unsigned e) const {
    Rational r(1);
    Rational base = *this;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

double Rational::to_double() const {
    // Scale both sides down so the limb-wise conversion stays in range.
    std::string n = num_.abs().to_string(), d = den_.to_string();
    if (n.size() > 300 || d.size() > 300) {
        long diff = static_cast<long>(n.size()) - static_cast<long>(d.size());
        double lead_n = std::strtod(n.substr(0, 17).c_str(), nullptr);
        double lead_d = std::strtod(d.substr(0, 17).c_str(), nullptr);
        double v = lead_n / lead_d * std::pow(10.0, static_cast<double>(diff));
        return num_.is_negative() ? -v : v;
    }
    return num_.to_double() / den_.to_double();
}

std::string Rational::to_string() const {
    if (den_ == BigInt(1)) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

}  // namespace qmclose
