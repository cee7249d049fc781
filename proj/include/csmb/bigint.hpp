#ifndef CSMB_BIGINT_HPP
#define CSMB_BIGINT_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csmb {

// Arbitrary-precision signed integer, sign-magnitude with base-2^32 limbs
// (little endian). Covers exactly what the exact-arithmetic layers need:
// ring operations, divmod, gcd, shifting, parsing and printing.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v) {
        if (v < 0) { negative_ = true; }
        unsigned long long u = negative_ ? -static_cast<unsigned long long>(v) : static_cast<unsigned long long>(v);
        while (u) { limbs_.push_back(static_cast<uint32_t>(u & 0xffffffffu)); u >>= 32; }
    }
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}
    BigInt(unsigned long long u, bool negative) : negative_(negative) {
        while (u) { limbs_.push_back(static_cast<uint32_t>(u & 0xffffffffu)); u >>= 32; }
        if (limbs_.empty()) negative_ = false;
    }

    static BigInt fromString(std::string_view s) {
        BigInt r;
        bool neg = false;
        size_t i = 0;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) { neg = s[i] == '-'; ++i; }
        if (i == s.size()) throw std::invalid_argument("BigInt: empty numeral");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
            r.mulAddSmall(10u, static_cast<uint32_t>(s[i] - '0'));
        }
        r.negative_ = neg && !r.isZero();
        return r;
    }

    bool isZero() const { return limbs_.empty(); }
    bool isNegative() const { return negative_; }
    int sign() const { return isZero() ? 0 : (negative_ ? -1 : 1); }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.negative_ == b.negative_ && a.limbs_ == b.limbs_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) { return cmp(a, b) < 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return cmp(a, b) > 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return cmp(a, b) <= 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return cmp(a, b) >= 0; }

    BigInt operator-() const {
        BigInt r = *this;
        if (!r.isZero()) r.negative_ = !r.negative_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.negative_ == b.negative_) {
            BigInt r;
            r.limbs_ = addMag(a.limbs_, b.limbs_);
            r.negative_ = a.negative_ && !r.limbs_.empty();
            return r;
        }
        int c = cmpMag(a.limbs_, b.limbs_);
        BigInt r;
        if (c == 0) return r;
        if (c > 0) { r.limbs_ = subMag(a.limbs_, b.limbs_); r.negative_ = a.negative_; }
        else       { r.limbs_ = subMag(b.limbs_, a.limbs_); r.negative_ = b.negative_; }
        return r;
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        BigInt r;
        if (a.isZero() || b.isZero()) return r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0u);
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            uint64_t carry = 0;
            uint64_t ai = a.limbs_[i];
            for (size_t j = 0; j < b.limbs_.size(); ++j) {
                uint64_t cur = r.limbs_[i + j] + ai * b.limbs_[j] + carry;
                r.limbs_[i + j] = static_cast<uint32_t>(cur & 0xffffffffu);
                carry = cur >> 32;
            }
            size_t k = i + b.limbs_.size();
            while (carry) {
                uint64_t cur = r.limbs_[k] + carry;
                r.limbs_[k] = static_cast<uint32_t>(cur & 0xffffffffu);
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        r.negative_ = (a.negative_ != b.negative_) && !r.isZero();
        return r;
    }

    BigInt& operator+=(const BigInt& o) { *this = *this + o; return *this; }
    BigInt& operator-=(const BigInt& o) { *this = *this - o; return *this; }
    BigInt& operator*=(const BigInt& o) { *this = *this * o; return *this; }

    // Truncated division (C semantics): quotient rounds toward zero,
    // remainder carries the sign of the dividend.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.isZero()) throw std::domain_error("BigInt: division by zero");
        int c = cmpMag(a.limbs_, b.limbs_);
        if (c < 0) { q = BigInt(); r = a; return; }
        divmodMag(a.limbs_, b.limbs_, q.limbs_, r.limbs_);
        q.trim(); r.trim();
        q.negative_ = (a.negative_ != b.negative_) && !q.isZero();
        r.negative_ = a.negative_ && !r.isZero();
    }
    friend BigInt operator/(const BigInt& a, const BigInt& b) { BigInt q, r; divmod(a, b, q, r); return q; }
    friend BigInt operator%(const BigInt& a, const BigInt& b) { BigInt q, r; divmod(a, b, q, r); return r; }

    BigInt abs() const { BigInt r = *this; r.negative_ = false; return r; }

    static BigInt gcd(BigInt a, BigInt b) {
        a.negative_ = false;
        b.negative_ = false;
        if (a.isZero()) return b;
        if (b.isZero()) return a;
        // binary gcd
        int shift = 0;
        while (a.isEven() && b.isEven()) { a.shr1(); b.shr1(); ++shift; }
        while (a.isEven()) a.shr1();
        while (!b.isZero()) {
            while (b.isEven()) b.shr1();
            if (cmpMag(a.limbs_, b.limbs_) > 0) std::swap(a, b);
            b = b - a;
            b.negative_ = false;
        }
        return a << shift;
    }

    BigInt operator<<(int bits) const {
        if (isZero() || bits == 0) return *this;
        BigInt r;
        int words = bits / 32, rem = bits % 32;
        r.limbs_.assign(limbs_.size() + words + 1, 0u);
        for (size_t i = 0; i < limbs_.size(); ++i) {
            uint64_t v = static_cast<uint64_t>(limbs_[i]) << rem;
            r.limbs_[i + words] |= static_cast<uint32_t>(v & 0xffffffffu);
            r.limbs_[i + words + 1] |= static_cast<uint32_t>(v >> 32);
        }
        r.trim();
        r.negative_ = negative_;
        return r;
    }

    bool isEven() const { return limbs_.empty() || (limbs_[0] & 1u) == 0; }
    bool isOne() const { return !negative_ && limbs_.size() == 1 && limbs_[0] == 1u; }

    // Exact value when it fits, throws otherwise. Used by small-path fast cases.
    long long toLongLong() const {
        unsigned long long u = 0;
        if (limbs_.size() > 2) throw std::overflow_error("BigInt: toLongLong overflow");
        for (size_t i = limbs_.size(); i-- > 0;) u = (u << 32) | limbs_[i];
        if (!negative_ && u > 0x7fffffffffffffffull) throw std::overflow_error("BigInt: toLongLong overflow");
        if (negative_ && u > 0x8000000000000000ull) throw std::overflow_error("BigInt: toLongLong overflow");
        return negative_ ? -static_cast<long long>(u) : static_cast<long long>(u);
    }

    // Nearest double; large values round in the usual floating-point sense.
    double toDouble() const {
        double r = 0;
        for (size_t i = limbs_.size(); i-- > 0;) r = r * 4294967296.0 + static_cast<double>(limbs_[i]);
        return negative_ ? -r : r;
    }
    long double toLongDouble() const {
        long double r = 0;
        for (size_t i = limbs_.size(); i-- > 0;) r = r * 4294967296.0L + static_cast<long double>(limbs_[i]);
        return negative_ ? -r : r;
    }

    int bitLength() const {
        if (limbs_.empty()) return 0;
        uint32_t top = limbs_.back();
        int b = 0;
        while (top) { ++b; top >>= 1; }
        return static_cast<int>((limbs_.size() - 1) * 32) + b;
    }

    std::string toString() const {
        if (isZero()) return "0";
        std::vector<uint32_t> work = limbs_;
        std::string digits;
        while (!work.empty()) {
            uint64_t rem = 0;
            for (size_t i = work.size(); i-- > 0;) {
                uint64_t cur = (rem << 32) | work[i];
                work[i] = static_cast<uint32_t>(cur / 1000000000ull);
                rem = cur % 1000000000ull;
            }
            while (!work.empty() && work.back() == 0) work.pop_back();
            for (int d = 0; d < 9; ++d) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        if (negative_) digits.push_back('-');
        std::reverse(digits.begin(), digits.end());
        return digits;
    }

    size_t hash() const {
        size_t h = negative_ ? 0x9e3779b97f4a7c15ull : 0;
        for (uint32_t v : limbs_) h = h * 1099511628211ull + v;
        return h;
    }

private:
    void trim() { while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back(); if (limbs_.empty()) negative_ = false; }

    void shr1() {
        uint32_t carry = 0;
        for (size_t i = limbs_.size(); i-- > 0;) {
            uint32_t next = limbs_[i] & 1u;
            limbs_[i] = (limbs_[i] >> 1) | (carry << 31);
            carry = next;
        }
        trim();
    }

    void mulAddSmall(uint32_t mul, uint32_t add) {
        uint64_t carry = add;
        for (auto& limb : limbs_) {
            uint64_t cur = static_cast<uint64_t>(limb) * mul + carry;
            limb = static_cast<uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
        }
        while (carry) { limbs_.push_back(static_cast<uint32_t>(carry & 0xffffffffu)); carry >>= 32; }
    }

    static int cmpMag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }
    static int cmp(const BigInt& a, const BigInt& b) {
        if (a.negative_ != b.negative_) return a.negative_ ? -1 : 1;
        int c = cmpMag(a.limbs_, b.limbs_);
        return a.negative_ ? -c : c;
    }

    static std::vector<uint32_t> addMag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        const auto& big = a.size() >= b.size() ? a : b;
        const auto& small = a.size() >= b.size() ? b : a;
        std::vector<uint32_t> r(big.size() + 1, 0u);
        uint64_t carry = 0;
        for (size_t i = 0; i < big.size(); ++i) {
            uint64_t cur = static_cast<uint64_t>(big[i]) + (i < small.size() ? small[i] : 0u) + carry;
            r[i] = static_cast<uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
        }
        r[big.size()] = static_cast<uint32_t>(carry);
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    // requires |a| >= |b|
    static std::vector<uint32_t> subMag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r = a;
        int64_t borrow = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            int64_t cur = static_cast<int64_t>(r[i]) - (i < b.size() ? b[i] : 0u) - borrow;
            if (cur < 0) { cur += (1ll << 32); borrow = 1; } else borrow = 0;
            r[i] = static_cast<uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    // Knuth algorithm D on magnitudes; requires |a| >= |b|, b != 0.
    static void divmodMag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                          std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
        if (b.size() == 1) {
            q.assign(a.size(), 0u);
            uint64_t rem = 0;
            for (size_t i = a.size(); i-- > 0;) {
                uint64_t cur = (rem << 32) | a[i];
                q[i] = static_cast<uint32_t>(cur / b[0]);
                rem = cur % b[0];
            }
            r.clear();
            if (rem) r.push_back(static_cast<uint32_t>(rem));
            return;
        }
        // normalize so the divisor's top bit is set
        int shift = 0;
        for (uint32_t top = b.back(); !(top & 0x80000000u); top <<= 1) ++shift;
        std::vector<uint32_t> u(a.size() + 1, 0u), v(b.size(), 0u);
        for (size_t i = 0; i < a.size(); ++i) {
            uint64_t x = static_cast<uint64_t>(a[i]) << shift;
            u[i] |= static_cast<uint32_t>(x & 0xffffffffu);
            u[i + 1] |= static_cast<uint32_t>(x >> 32);
        }
        for (size_t i = 0; i < b.size(); ++i) {
            uint64_t x = static_cast<uint64_t>(b[i]) << shift;
            v[i] |= static_cast<uint32_t>(x & 0xffffffffu);
            if (i + 1 < b.size()) v[i + 1] |= static_cast<uint32_t>(x >> 32);
        }
        const size_t n = v.size(), m = u.size() - n;
        q.assign(m, 0u);
        for (size_t j = m; j-- > 0;) {
            uint64_t num = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
            uint64_t qhat = num / v[n - 1];
            uint64_t rhat = num % v[n - 1];
            while (qhat > 0xffffffffull ||
                   qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2])) {
                --qhat;
                rhat += v[n - 1];
                if (rhat > 0xffffffffull) break;
            }
            // multiply-subtract
            int64_t borrow = 0;
            uint64_t carry = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t p = qhat * v[i] + carry;
                carry = p >> 32;
                int64_t t = static_cast<int64_t>(u[i + j]) - static_cast<int64_t>(p & 0xffffffffu) - borrow;
                if (t < 0) { t += (1ll << 32); borrow = 1; } else borrow = 0;
                u[i + j] = static_cast<uint32_t>(t);
            }
            int64_t t = static_cast<int64_t>(u[j + n]) - static_cast<int64_t>(carry) - borrow;
            if (t < 0) {
                // qhat was one too large; add back
                t += (1ll << 32);
                --qhat;
                uint64_t c2 = 0;
                for (size_t i = 0; i < n; ++i) {
                    uint64_t cur = static_cast<uint64_t>(u[i + j]) + v[i] + c2;
                    u[i + j] = static_cast<uint32_t>(cur & 0xffffffffu);
                    c2 = cur >> 32;
                }
                t += static_cast<int64_t>(c2);
                t &= 0xffffffffll;
            }
            u[j + n] = static_cast<uint32_t>(t);
            q[j] = static_cast<uint32_t>(qhat);
        }
        // denormalize remainder
        r.assign(n, 0u);
        for (size_t i = 0; i < n; ++i) {
            uint64_t x = u[i];
            if (shift) {
                x >>= shift;
                if (i + 1 < u.size()) x |= (static_cast<uint64_t>(u[i + 1]) << (32 - shift)) & 0xffffffffu;
            }
            r[i] = static_cast<uint32_t>(x);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        while (!q.empty() && q.back() == 0) q.pop_back();
    }

    bool negative_ = false;
    std::vector<uint32_t> limbs_;
};

} // namespace csmb

#endif
