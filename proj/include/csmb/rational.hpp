#ifndef CSMB_RATIONAL_HPP
#define CSMB_RATIONAL_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "csmb/bigint.hpp"

namespace csmb {

// Exact rational on BigInt, always stored reduced with positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}
    Rational(int v) : num_(v), den_(1) {}
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    // accepts "p", "-p", "p/q"
    static Rational fromString(std::string_view s) {
        auto slash = s.find('/');
        if (slash == std::string_view::npos) return Rational(BigInt::fromString(s));
        return Rational(BigInt::fromString(s.substr(0, slash)), BigInt::fromString(s.substr(slash + 1)));
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool isZero() const { return num_.isZero(); }
    bool isInteger() const { return den_.isOne(); }
    int sign() const { return num_.sign(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.isZero()) throw std::domain_error("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational operator-() const { Rational r = *this; r.num_ = -r.num_; return r; }
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (a.num_ * b.den_) < (b.num_ * a.den_);
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    Rational pow(int e) const {
        if (e < 0) return Rational(1) / pow(-e);
        Rational r(1), base = *this;
        while (e) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    double toDouble() const {
        // scale so the integer division keeps ~19 significant digits
        int shift = den_.bitLength() - num_.bitLength() + 64;
        if (shift < 0) shift = 0;
        BigInt q = (num_.abs() << shift) / den_;
        double d = q.toDouble() * std::ldexp(1.0, -shift);
        return num_.isNegative() ? -d : d;
    }
    long double toLongDouble() const {
        int shift = den_.bitLength() - num_.bitLength() + 96;
        if (shift < 0) shift = 0;
        BigInt q = (num_.abs() << shift) / den_;
        long double d = q.toLongDouble() * std::ldexp(1.0L, -shift);
        return num_.isNegative() ? -d : d;
    }

    // exact: every double is a dyadic rational
    static Rational fromDouble(double v) {
        if (!std::isfinite(v)) throw std::domain_error("Rational: non-finite double");
        int exp = 0;
        double m = std::frexp(v, &exp); // v = m * 2^exp, |m| in [0.5, 1)
        long long mi = static_cast<long long>(std::ldexp(m, 53));
        exp -= 53;
        Rational r{BigInt(mi)};
        if (exp >= 0) return Rational(r.num_ << exp, BigInt(1));
        return Rational(r.num_, BigInt(1) << (-exp));
    }

    std::string toString() const {
        if (den_.isOne()) return num_.toString();
        return num_.toString() + "/" + den_.toString();
    }

    size_t hash() const { return num_.hash() * 31 + den_.hash(); }

private:
    void normalize() {
        if (den_.isZero()) throw std::domain_error("Rational: zero denominator");
        if (den_.isNegative()) { num_ = -num_; den_ = -den_; }
        if (num_.isZero()) { den_ = BigInt(1); return; }
        BigInt g = BigInt::gcd(num_, den_);
        if (!g.isOne()) { num_ = num_ / g; den_ = den_ / g; }
    }

    BigInt num_, den_;
};

// Gaussian rational: exact complex number with rational real/imaginary parts.
struct GaussianRational {
    Rational re, im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long long r) : re(r) {}

    static GaussianRational i() { return {Rational(0), Rational(1)}; }

    bool isZero() const { return re.isZero() && im.isZero(); }
    bool isReal() const { return im.isZero(); }
    GaussianRational conj() const { return {re, -im}; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational& operator+=(const GaussianRational& o) { *this = *this + o; return *this; }
    GaussianRational& operator-=(const GaussianRational& o) { *this = *this - o; return *this; }
    GaussianRational& operator*=(const GaussianRational& o) { *this = *this * o; return *this; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    std::string toString() const { return re.toString() + (im.isZero() ? "" : ("+" + im.toString() + "i")); }
};

} // namespace csmb

#endif
