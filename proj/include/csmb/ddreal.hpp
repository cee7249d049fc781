#ifndef CSMB_DDREAL_HPP
#define CSMB_DDREAL_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace csmb {

// Double-double scalar: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
// giving ~106 significand bits (~31 decimal digits) at hardware speed.
// Used where plain double cannot resolve ill-conditioned solves and where
// couplings spread over many orders of magnitude.
struct DDReal {
    double hi = 0.0, lo = 0.0;

    constexpr DDReal() = default;
    constexpr DDReal(double h) : hi(h), lo(0.0) {}
    constexpr DDReal(double h, double l) : hi(h), lo(l) {}
    constexpr DDReal(int v) : hi(v), lo(0.0) {}
    constexpr DDReal(long long v) : hi(static_cast<double>(v)), lo(0.0) {
        // long long may exceed 53 bits; recover the residue exactly
        lo = static_cast<double>(v - static_cast<long long>(hi));
    }

    explicit operator double() const { return hi; }

    static DDReal twoSum(double a, double b) {
        double s = a + b;
        double bb = s - a;
        double err = (a - (s - bb)) + (b - bb);
        return {s, err};
    }
    static DDReal quickTwoSum(double a, double b) {
        double s = a + b;
        return {s, b - (s - a)};
    }
    static DDReal twoProd(double a, double b) {
        double p = a * b;
        return {p, std::fma(a, b, -p)};
    }

    friend DDReal operator+(const DDReal& a, const DDReal& b) {
        DDReal s = twoSum(a.hi, b.hi);
        s.lo += a.lo + b.lo;
        return quickTwoSum(s.hi, s.lo);
    }
    friend DDReal operator-(const DDReal& a, const DDReal& b) {
        DDReal s = twoSum(a.hi, -b.hi);
        s.lo += a.lo - b.lo;
        return quickTwoSum(s.hi, s.lo);
    }
    friend DDReal operator*(const DDReal& a, const DDReal& b) {
        DDReal p = twoProd(a.hi, b.hi);
        p.lo += a.hi * b.lo + a.lo * b.hi;
        return quickTwoSum(p.hi, p.lo);
    }
    friend DDReal operator/(const DDReal& a, const DDReal& b) {
        double q1 = a.hi / b.hi;
        DDReal r = a - b * DDReal(q1);
        double q2 = r.hi / b.hi;
        r = r - b * DDReal(q2);
        double q3 = r.hi / b.hi;
        DDReal q = quickTwoSum(q1, q2);
        return q + DDReal(q3);
    }
    DDReal operator-() const { return {-hi, -lo}; }
    DDReal& operator+=(const DDReal& o) { *this = *this + o; return *this; }
    DDReal& operator-=(const DDReal& o) { *this = *this - o; return *this; }
    DDReal& operator*=(const DDReal& o) { *this = *this * o; return *this; }
    DDReal& operator/=(const DDReal& o) { *this = *this / o; return *this; }

    friend bool operator==(const DDReal& a, const DDReal& b) { return a.hi == b.hi && a.lo == b.lo; }
    friend bool operator!=(const DDReal& a, const DDReal& b) { return !(a == b); }
    friend bool operator<(const DDReal& a, const DDReal& b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
    friend bool operator>(const DDReal& a, const DDReal& b) { return b < a; }
    friend bool operator<=(const DDReal& a, const DDReal& b) { return !(b < a); }
    friend bool operator>=(const DDReal& a, const DDReal& b) { return !(a < b); }
};

inline DDReal abs(const DDReal& a) { return a.hi < 0 || (a.hi == 0 && a.lo < 0) ? -a : a; }
inline DDReal fabs(const DDReal& a) { return abs(a); }

inline DDReal sqrt(const DDReal& a) {
    if (a.hi == 0) return DDReal(0);
    double x = std::sqrt(a.hi);
    // one Newton step in dd: x' = x + (a - x^2) / (2x)
    DDReal x2 = DDReal::twoProd(x, x);
    DDReal diff = a - x2;
    return DDReal(x) + diff / DDReal(2 * x);
}

inline DDReal exp(const DDReal& a) {
    // reduce: a = k*ln2 + r with |r| <= ln2/2, exp(r) by Taylor
    constexpr double ln2hi = 6.93147180559945286e-01;
    constexpr double ln2lo = 2.31904681384629956e-17;
    if (a.hi > 709.0) return DDReal(std::numeric_limits<double>::infinity());
    if (a.hi < -745.0) return DDReal(0.0);
    double k = std::floor(a.hi / ln2hi + 0.5);
    DDReal r = a - DDReal(ln2hi, ln2lo) * DDReal(k);
    DDReal term(1.0), sum(1.0);
    for (int i = 1; i <= 21; ++i) {
        term = term * r / DDReal(static_cast<double>(i));
        sum += term;
        if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
    }
    double scale = std::ldexp(1.0, static_cast<int>(k));
    return DDReal(sum.hi * scale, sum.lo * scale);
}

inline DDReal expm1(const DDReal& a) {
    if (std::fabs(a.hi) > 0.4) return exp(a) - DDReal(1.0);
    DDReal term = a, sum = a;
    for (int i = 2; i <= 24; ++i) {
        term = term * a / DDReal(static_cast<double>(i));
        sum += term;
        if (std::fabs(term.hi) < 1e-36 * std::fabs(sum.hi)) break;
    }
    return sum;
}

inline DDReal log(const DDReal& a) {
    // Newton on exp: x' = x + a*exp(-x) - 1
    double x = std::log(a.hi);
    DDReal xd(x);
    for (int it = 0; it < 2; ++it) xd = xd + a * exp(-xd) - DDReal(1.0);
    return xd;
}

inline DDReal pow(const DDReal& a, int e) {
    if (e < 0) return DDReal(1.0) / pow(a, -e);
    DDReal r(1.0), base = a;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline bool isfinite(const DDReal& a) { return std::isfinite(a.hi); }
inline double to_double(const DDReal& a) { return a.hi; }
inline std::string to_string(const DDReal& a) { return std::to_string(a.hi); }

} // namespace csmb

#endif
