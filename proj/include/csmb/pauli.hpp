#ifndef CSMB_PAULI_HPP
#define CSMB_PAULI_HPP

#include <bit>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "csmb/descriptors.hpp"
#include "csmb/errors.hpp"
#include "csmb/rational.hpp"

namespace csmb {

// One Pauli string on up to 64 sites in the symplectic encoding: bit k of
// xMask/zMask says whether site k carries an X/Z factor; both bits set means
// sigma^y up to a phase. A term is stored as  c * prod_k X^{x_k} Z^{z_k},
// with sigma^y = i X Z folded into the coefficient, so that products reduce
// to mask XORs plus a sign and the trace over rho = 1/Tr[1] is simply the
// coefficient of the empty string.
struct PauliString {
    uint64_t xMask = 0;
    uint64_t zMask = 0;

    friend bool operator<(const PauliString& a, const PauliString& b) {
        return a.xMask != b.xMask ? a.xMask < b.xMask : a.zMask < b.zMask;
    }
    friend bool operator==(const PauliString& a, const PauliString& b) {
        return a.xMask == b.xMask && a.zMask == b.zMask;
    }
    bool isIdentity() const { return xMask == 0 && zMask == 0; }
    int weight() const { return std::popcount(xMask | zMask); }
};

class PauliExpression {
public:
    PauliExpression() = default;
    explicit PauliExpression(int siteCount) : siteCount_(siteCount) {
        if (siteCount < 1 || siteCount > 64) throw std::invalid_argument("PauliExpression: siteCount out of range");
    }

    static PauliExpression identity(int siteCount, GaussianRational coeff = GaussianRational(1)) {
        PauliExpression e(siteCount);
        e.add(PauliString{}, std::move(coeff));
        return e;
    }
    // sigma_site^axis (unit Pauli matrix)
    static PauliExpression sigmaOp(int siteCount, int site, Axis axis, GaussianRational coeff = GaussianRational(1)) {
        PauliExpression e(siteCount);
        if (site < 0 || site >= siteCount) throw std::invalid_argument("sigmaOp: site out of range");
        uint64_t bit = 1ull << site;
        PauliString s;
        switch (axis) {
            case Axis::X: s.xMask = bit; break;
            case Axis::Z: s.zMask = bit; break;
            case Axis::Y:
                s.xMask = bit;
                s.zMask = bit;
                coeff = coeff * GaussianRational::i(); // sigma^y = i X Z
                break;
        }
        e.add(s, std::move(coeff));
        return e;
    }
    // S_site^axis = sigma/2
    static PauliExpression spinOp(int siteCount, int site, Axis axis) {
        return sigmaOp(siteCount, site, axis, GaussianRational(Rational(1, 2)));
    }

    int siteCount() const { return siteCount_; }
    size_t termCount() const { return terms_.size(); }
    bool isZero() const { return terms_.empty(); }
    const std::map<PauliString, GaussianRational>& terms() const { return terms_; }

    void add(const PauliString& s, GaussianRational c) {
        if (c.isZero()) return;
        auto [it, inserted] = terms_.try_emplace(s, std::move(c));
        if (!inserted) {
            it->second += c;
            if (it->second.isZero()) terms_.erase(it);
        }
    }

    friend PauliExpression operator+(const PauliExpression& a, const PauliExpression& b) {
        requireSameSites(a, b);
        PauliExpression r = a;
        for (const auto& [s, c] : b.terms_) r.add(s, c);
        return r;
    }
    friend PauliExpression operator-(const PauliExpression& a, const PauliExpression& b) {
        requireSameSites(a, b);
        PauliExpression r = a;
        for (const auto& [s, c] : b.terms_) r.add(s, -c);
        return r;
    }
    PauliExpression& operator+=(const PauliExpression& o) { *this = *this + o; return *this; }
    PauliExpression& operator-=(const PauliExpression& o) { *this = *this - o; return *this; }

    PauliExpression scaled(const GaussianRational& f) const {
        PauliExpression r(siteCount_);
        if (f.isZero()) return r;
        for (const auto& [s, c] : terms_) r.terms_.emplace(s, c * f);
        return r;
    }

    friend bool operator==(const PauliExpression& a, const PauliExpression& b) {
        return a.siteCount_ == b.siteCount_ && a.terms_ == b.terms_;
    }

    static size_t termCap() { return termCap_; }
    static void setTermCap(size_t cap) { termCap_ = cap; }

    std::string describeSize() const {
        return std::to_string(terms_.size()) + " terms on " + std::to_string(siteCount_) + " sites";
    }

private:
    static void requireSameSites(const PauliExpression& a, const PauliExpression& b) {
        if (a.siteCount_ != b.siteCount_)
            throw std::invalid_argument("PauliExpression: siteCount mismatch (" + std::to_string(a.siteCount_) +
                                        " vs " + std::to_string(b.siteCount_) + ")");
    }

    int siteCount_ = 1;
    std::map<PauliString, GaussianRational> terms_;
    inline static size_t termCap_ = 10'000'000;

    friend PauliExpression multiply(const PauliExpression& a, const PauliExpression& b);
    friend PauliExpression adjoint(const PauliExpression& a);
};

// Exact product. Per site X^a Z^b * X^c Z^d = (-1)^(b&c) X^(a^c) Z^(b^d);
// the accumulated sign is (-1)^popcount(z1 & x2).
inline PauliExpression multiply(const PauliExpression& a, const PauliExpression& b) {
    if (a.siteCount() != b.siteCount())
        throw std::invalid_argument("multiply: siteCount mismatch");
    PauliExpression r(a.siteCount());
    for (const auto& [sa, ca] : a.terms_) {
        for (const auto& [sb, cb] : b.terms_) {
            PauliString s{sa.xMask ^ sb.xMask, sa.zMask ^ sb.zMask};
            GaussianRational c = ca * cb;
            if (std::popcount(sa.zMask & sb.xMask) & 1) c = -c;
            r.add(s, std::move(c));
            if (r.terms_.size() > PauliExpression::termCap())
                throw ResourceExceeded("multiply: term cap exceeded (" + r.describeSize() + ")");
        }
    }
    return r;
}

inline PauliExpression multiply(const PauliExpression& a, const PauliExpression& b, const PauliExpression& c) {
    return multiply(multiply(a, b), c);
}

// (X^x Z^z)^dagger = (-1)^popcount(x & z) X^x Z^z
inline PauliExpression adjoint(const PauliExpression& a) {
    PauliExpression r(a.siteCount());
    for (const auto& [s, c] : a.terms_) {
        GaussianRational cc = c.conj();
        if (std::popcount(s.xMask & s.zMask) & 1) cc = -cc;
        r.terms_.emplace(s, std::move(cc));
    }
    return r;
}

inline bool isHermitian(const PauliExpression& a) { return adjoint(a) == a; }

// Tr[rho E] with rho = 1/Tr[1]: only the identity string survives.
inline GaussianRational trace(const PauliExpression& e) {
    auto it = e.terms().find(PauliString{});
    return it == e.terms().end() ? GaussianRational() : it->second;
}

// (A|B) = Tr[rho A^dagger B]. The XZ string monomials are orthonormal under
// this form, so the scalar product collapses to a coefficient dot product.
inline GaussianRational scalarProduct(const PauliExpression& a, const PauliExpression& b) {
    if (a.siteCount() != b.siteCount())
        throw std::invalid_argument("scalarProduct: siteCount mismatch");
    GaussianRational sum;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    auto ia = ta.begin();
    auto ib = tb.begin();
    while (ia != ta.end() && ib != tb.end()) {
        if (ia->first < ib->first) ++ia;
        else if (ib->first < ia->first) ++ib;
        else {
            sum += ia->second.conj() * ib->second;
            ++ia;
            ++ib;
        }
    }
    return sum;
}

inline PauliExpression power(const PauliExpression& a, int p) {
    if (p < 0) throw std::invalid_argument("power: negative exponent");
    PauliExpression r = PauliExpression::identity(a.siteCount());
    for (int i = 0; i < p; ++i) r = multiply(r, a);
    return r;
}

inline PauliExpression commutator(const PauliExpression& a, const PauliExpression& b) {
    return multiply(a, b) - multiply(b, a);
}

// --- line-oriented text serialization -------------------------------------
// one term per line in the sigma-letter basis:  <re>;<im> site:letter ...

inline void writeExpression(std::ostream& os, const PauliExpression& e) {
    os << "# sites=" << e.siteCount() << " terms=" << e.termCount() << "\n";
    for (const auto& [s, c] : e.terms()) {
        int ny = std::popcount(s.xMask & s.zMask);
        // convert the XZ-monomial coefficient back to the letter basis
        GaussianRational cl = c;
        for (int i = 0; i < (ny & 3); ++i) cl *= GaussianRational(Rational(0), Rational(-1)); // times (-i)
        os << cl.re.toString() << ";" << cl.im.toString();
        for (int site = 0; site < e.siteCount(); ++site) {
            uint64_t bit = 1ull << site;
            bool hx = s.xMask & bit, hz = s.zMask & bit;
            if (!hx && !hz) continue;
            os << " " << site << ":" << (hx && hz ? 'Y' : (hx ? 'X' : 'Z'));
        }
        os << "\n";
    }
}

inline PauliExpression readExpression(std::istream& is) {
    std::string line;
    int sites = -1;
    PauliExpression e;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("sites=");
            if (pos != std::string::npos) {
                sites = std::stoi(line.substr(pos + 6));
                e = PauliExpression(sites);
            }
            continue;
        }
        if (sites < 0) throw std::invalid_argument("readExpression: missing header");
        std::istringstream ls(line);
        std::string coeff;
        ls >> coeff;
        auto semi = coeff.find(';');
        GaussianRational c(Rational::fromString(coeff.substr(0, semi)), Rational::fromString(coeff.substr(semi + 1)));
        PauliString s;
        std::string tok;
        int ny = 0;
        while (ls >> tok) {
            auto colon = tok.find(':');
            int site = std::stoi(tok.substr(0, colon));
            char letter = tok[colon + 1];
            uint64_t bit = 1ull << site;
            if (letter == 'X') s.xMask |= bit;
            else if (letter == 'Z') s.zMask |= bit;
            else if (letter == 'Y') { s.xMask |= bit; s.zMask |= bit; ++ny; }
            else throw std::invalid_argument("readExpression: bad letter");
        }
        for (int i = 0; i < (ny & 3); ++i) c *= GaussianRational::i();
        e.add(s, c);
    }
    return e;
}

} // namespace csmb

#endif
