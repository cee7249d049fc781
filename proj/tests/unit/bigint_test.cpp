#include "doctest.h"

#include <cstdint>
#include <cmath>

#include "csmb/bigint.hpp"

using csmb::BigInt;

namespace {
uint64_t splitmix(uint64_t& s) {
    uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

BigInt randomBig(uint64_t& s, int limbs) {
    BigInt r(0);
    for (int i = 0; i < limbs; ++i) {
        r = (r << 32) + BigInt(static_cast<long long>(splitmix(s) & 0xffffffffull));
    }
    if (splitmix(s) & 1) r = -r;
    return r;
}
} // namespace

TEST_SUITE("bigint") {

TEST_CASE("small arithmetic agrees with __int128") {
    uint64_t s = 12345;
    for (int iter = 0; iter < 2000; ++iter) {
        long long a = static_cast<long long>(splitmix(s)) >> (splitmix(s) % 32);
        long long b = static_cast<long long>(splitmix(s)) >> (splitmix(s) % 32);
        BigInt A(a), B(b);
        __int128 sum = static_cast<__int128>(a) + b;
        __int128 prod = static_cast<__int128>(a) * b;
        CHECK((A + B).toLongLong() == static_cast<long long>(sum));
        CHECK((A - B).toLongLong() == a - b);
        if (prod <= INT64_MAX && prod >= INT64_MIN) CHECK((A * B).toLongLong() == static_cast<long long>(prod));
        if (b != 0) {
            CHECK((A / B).toLongLong() == a / b);
            CHECK((A % B).toLongLong() == a % b);
        }
    }
}

TEST_CASE("divmod reconstruction property on wide operands") {
    uint64_t s = 777;
    for (int iter = 0; iter < 600; ++iter) {
        BigInt a = randomBig(s, 1 + static_cast<int>(splitmix(s) % 8));
        BigInt b = randomBig(s, 1 + static_cast<int>(splitmix(s) % 5));
        if (b.isZero()) continue;
        BigInt q, r;
        BigInt::divmod(a, b, q, r);
        CHECK(q * b + r == a);
        CHECK(r.abs() < b.abs());
        // remainder sign follows the dividend
        if (!r.isZero()) CHECK(r.isNegative() == a.isNegative());
    }
}

TEST_CASE("distributive law on random values") {
    uint64_t s = 991;
    for (int iter = 0; iter < 200; ++iter) {
        BigInt a = randomBig(s, 3), b = randomBig(s, 4), c = randomBig(s, 2);
        CHECK((a + b) * c == a * c + b * c);
    }
}

TEST_CASE("string round trip") {
    uint64_t s = 5150;
    CHECK(BigInt(0).toString() == "0");
    CHECK(BigInt(-17).toString() == "-17");
    CHECK(BigInt::fromString("123456789012345678901234567890").toString() == "123456789012345678901234567890");
    CHECK(BigInt::fromString("-00042").toString() == "-42");
    for (int iter = 0; iter < 100; ++iter) {
        BigInt a = randomBig(s, 1 + static_cast<int>(splitmix(s) % 10));
        CHECK(BigInt::fromString(a.toString()) == a);
    }
}

TEST_CASE("gcd") {
    CHECK(BigInt::gcd(BigInt(12), BigInt(18)) == BigInt(6));
    CHECK(BigInt::gcd(BigInt(0), BigInt(-5)) == BigInt(5));
    CHECK(BigInt::gcd(BigInt(7), BigInt(13)) == BigInt(1));
    uint64_t s = 31337;
    for (int iter = 0; iter < 200; ++iter) {
        BigInt a = randomBig(s, 2).abs(), b = randomBig(s, 3).abs();
        BigInt g = BigInt::gcd(a, b);
        if (a.isZero() && b.isZero()) {
            CHECK(g.isZero());
            continue;
        }
        CHECK((a % g).isZero());
        CHECK((b % g).isZero());
        // g is the *greatest* common divisor: a/g and b/g are coprime
        CHECK(BigInt::gcd(a / g, b / g).isOne());
    }
}

TEST_CASE("shifts and bit length") {
    BigInt one(1);
    CHECK((one << 100).bitLength() == 101);
    CHECK(((one << 100) / (one << 64)).toLongLong() == (1ll << 36));
    CHECK(BigInt(0).bitLength() == 0);
    CHECK(BigInt(255).bitLength() == 8);
}

TEST_CASE("toDouble") {
    CHECK(BigInt(1000000).toDouble() == doctest::Approx(1e6));
    BigInt big = BigInt(1) << 200;
    CHECK(big.toDouble() == doctest::Approx(std::ldexp(1.0, 200)));
}

} // TEST_SUITE
