#ifndef CSMB_SCALAR_HPP
#define CSMB_SCALAR_HPP

#include <cmath>
#include <limits>

#include "csmb/ddreal.hpp"
#include "csmb/rational.hpp"

namespace csmb {

// Uniform bridge between the floating scalar types (double, long double,
// DDReal) and the exact layer.

template <typename R>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static double fromDouble(double v) { return v; }
    static double fromInt(long long v) { return static_cast<double>(v); }
    static double toDouble(double v) { return v; }
    static double fromRational(const Rational& q) { return q.toDouble(); }
    static constexpr double epsilon() { return std::numeric_limits<double>::epsilon(); }
    static const char* name() { return "f64"; }
};

template <>
struct ScalarTraits<long double> {
    static long double fromDouble(double v) { return v; }
    static long double fromInt(long long v) { return static_cast<long double>(v); }
    static double toDouble(long double v) { return static_cast<double>(v); }
    static long double fromRational(const Rational& q) { return q.toLongDouble(); }
    static constexpr long double epsilon() { return std::numeric_limits<long double>::epsilon(); }
    static const char* name() { return "f80"; }
};

template <>
struct ScalarTraits<DDReal> {
    static DDReal fromDouble(double v) { return DDReal(v); }
    static DDReal fromInt(long long v) { return DDReal(v); }
    static double toDouble(const DDReal& v) { return v.hi; }
    static DDReal fromRational(const Rational& q) {
        double hi = q.toDouble();
        double lo = (q - Rational::fromDouble(hi)).toDouble();
        return DDReal::quickTwoSum(hi, lo);
    }
    static constexpr DDReal epsilon() { return DDReal(4.93038065763132e-32); } // 2^-104
    static const char* name() { return "dd"; }
};

template <>
struct ScalarTraits<Rational> {
    static Rational fromDouble(double v) { return Rational::fromDouble(v); }
    static Rational fromInt(long long v) { return Rational(v); }
    static double toDouble(const Rational& q) { return q.toDouble(); }
    static const Rational& fromRational(const Rational& q) { return q; }
    static Rational epsilon() { return Rational(0); }
    static const char* name() { return "exact"; }
};

// exact: a DDReal is the sum of two dyadic rationals
inline Rational toRational(const DDReal& v) {
    return Rational::fromDouble(v.hi) + Rational::fromDouble(v.lo);
}
inline Rational toRational(double v) { return Rational::fromDouble(v); }

// uniform exact rationalization across scalar types (long double is narrowed
// to double first: its extra bits exceed what the dyadic conversion covers)
inline Rational toRationalScalar(double v) { return Rational::fromDouble(v); }
inline Rational toRationalScalar(long double v) { return Rational::fromDouble(static_cast<double>(v)); }
inline Rational toRationalScalar(const DDReal& v) { return toRational(v); }
inline Rational toRationalScalar(const Rational& v) { return v; }

} // namespace csmb

#endif
