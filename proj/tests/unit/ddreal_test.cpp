#include "doctest.h"

#include <cmath>
#include <quadmath.h>

#include "csmb/ddreal.hpp"
#include "csmb/scalar.hpp"

using csmb::DDReal;

namespace {
// reference arithmetic in quad precision
double relerr(const DDReal& got, __float128 want) {
    __float128 g = static_cast<__float128>(got.hi) + static_cast<__float128>(got.lo);
    __float128 d = g - want;
    if (want == 0) return std::fabs(static_cast<double>(d));
    double r = static_cast<double>(d / want);
    return std::fabs(r);
}
} // namespace

TEST_SUITE("ddreal") {

TEST_CASE("basic arithmetic hits ~30 digits") {
    DDReal a = DDReal(1.0) / DDReal(3.0);
    __float128 qa = static_cast<__float128>(1) / 3;
    CHECK(relerr(a, qa) < 1e-31);

    DDReal b = a * a;
    CHECK(relerr(b, qa * qa) < 1e-30);

    DDReal c = DDReal(1e16) + DDReal(1.0) - DDReal(1e16);
    CHECK(c.hi == 1.0);

    uint64_t s = 42;
    auto rnd = [&s]() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(s >> 11) / 9007199254740992.0 * 2.0 - 1.0;
    };
    for (int i = 0; i < 500; ++i) {
        double x = rnd() * 100, y = rnd() * 100;
        if (y == 0) continue;
        __float128 qx = x, qy = y;
        CHECK(relerr(DDReal(x) + DDReal(y), qx + qy) < 1e-30);
        CHECK(relerr(DDReal(x) * DDReal(y), qx * qy) < 1e-30);
        CHECK(relerr(DDReal(x) / DDReal(y), qx / qy) < 1e-30);
    }
}

TEST_CASE("sqrt and exp") {
    CHECK(relerr(sqrt(DDReal(2.0)), sqrtq(__float128(2))) < 1e-30);
    CHECK(relerr(exp(DDReal(1.0)), expq(__float128(1))) < 1e-29);
    CHECK(relerr(exp(DDReal(-10.5)), expq(__float128(-10.5))) < 1e-29);
    CHECK(relerr(exp(DDReal(0.0)), __float128(1)) < 1e-31);
    // expm1 keeps accuracy for small arguments
    CHECK(relerr(expm1(DDReal(1e-8)), expm1q(__float128(1e-8))) < 1e-28);
    CHECK(relerr(expm1(DDReal(-0.3)), expm1q(__float128(-0.3))) < 1e-28);
    CHECK(relerr(log(DDReal(7.25)), logq(__float128(7.25))) < 1e-29);
}

TEST_CASE("pow and comparisons") {
    CHECK(relerr(pow(DDReal(3.0), 7), __float128(2187)) < 1e-31);
    CHECK(DDReal(1.0) < DDReal(1.0) + DDReal(1e-25));
    CHECK(abs(DDReal(-2.5)).hi == 2.5);
}

TEST_CASE("rational bridge is exact") {
    using csmb::Rational;
    DDReal v = DDReal(1.0) / DDReal(3.0);
    Rational r = csmb::toRational(v);
    // r equals hi + lo exactly
    CHECK(csmb::ScalarTraits<DDReal>::fromRational(r) == v);
    Rational third(1, 3);
    DDReal back = csmb::ScalarTraits<DDReal>::fromRational(third);
    CHECK(relerr(back, static_cast<__float128>(1) / 3) < 1e-31);
}

} // TEST_SUITE
