#ifndef CSMB_ELEMENTS_HPP
#define CSMB_ELEMENTS_HPP

#include <cctype>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "csmb/couplings.hpp"
#include "csmb/descriptors.hpp"
#include "csmb/errors.hpp"

namespace csmb {

// ---------------------------------------------------------------------------
// Canonical polynomial grammar for scalar-product closed forms.
// Variables: N, h, S1..S6 (moments), and for l-indexed elements
//   Jl, Jp   couplings J_l, J_p
//   Sl, Sp   row sums S^(l), S^(p)
//   Ql, Qp   squared row sums Q^(l), Q^(p)
//   Jlp      J_p^(l) = 1/(eps_l - eps_p)
//   Ul       bath-weighted row sum U^(l) = sum_{m>=1,m!=l} J_m J_m^(l)
// ---------------------------------------------------------------------------

enum class ElementVar : int { N = 0, h, S1, S2, S3, S4, S5, S6, Jl, Jp, Sl, Sp, Ql, Qp, Jlp, Ul, COUNT };

inline const char* elementVarName(ElementVar v) {
    static const char* names[] = {"N", "h", "S1", "S2", "S3", "S4", "S5", "S6",
                                  "Jl", "Jp", "Sl", "Sp", "Ql", "Qp", "Jlp", "Ul"};
    return names[static_cast<int>(v)];
}

struct ElementMonomial {
    Rational coeff;
    int powers[static_cast<int>(ElementVar::COUNT)] = {};
};

struct ElementPolynomial {
    std::vector<ElementMonomial> terms;

    bool usesIndexedVars() const {
        for (const auto& t : terms)
            for (int v = static_cast<int>(ElementVar::Jl); v < static_cast<int>(ElementVar::COUNT); ++v)
                if (t.powers[v]) return true;
        return false;
    }
    int maxMoment() const {
        int m = 0;
        for (const auto& t : terms)
            for (int v = static_cast<int>(ElementVar::S1); v <= static_cast<int>(ElementVar::S6); ++v)
                if (t.powers[v]) m = std::max(m, v - static_cast<int>(ElementVar::S1) + 1);
        return m;
    }
};

inline ElementPolynomial parsePolynomial(const std::string& text) {
    ElementPolynomial poly;
    size_t i = 0;
    auto skipWs = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skipWs();
    if (i < text.size() && text.compare(i, 1, "0") == 0 && i + 1 == text.size()) return poly; // the zero polynomial
    bool first = true;
    while (i < text.size()) {
        skipWs();
        if (i >= text.size()) break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw std::invalid_argument("parsePolynomial: expected +/- near '" + text.substr(i) + "'");
        }
        first = false;
        skipWs();
        ElementMonomial mono;
        mono.coeff = Rational(sign);
        bool sawFactor = false;
        while (true) {
            skipWs();
            if (i >= text.size()) break;
            if (std::isdigit(static_cast<unsigned char>(text[i]))) {
                size_t j = i;
                while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '/')) ++j;
                mono.coeff *= Rational::fromString(text.substr(i, j - i));
                i = j;
                sawFactor = true;
            } else if (std::isalpha(static_cast<unsigned char>(text[i]))) {
                size_t j = i;
                while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
                std::string name = text.substr(i, j - i);
                i = j;
                int var = -1;
                for (int v = 0; v < static_cast<int>(ElementVar::COUNT); ++v)
                    if (name == elementVarName(static_cast<ElementVar>(v))) var = v;
                if (var < 0) throw std::invalid_argument("parsePolynomial: unknown variable " + name);
                int exp = 1;
                if (i < text.size() && text[i] == '^') {
                    ++i;
                    size_t j2 = i;
                    while (j2 < text.size() && std::isdigit(static_cast<unsigned char>(text[j2]))) ++j2;
                    exp = std::stoi(text.substr(i, j2 - i));
                    i = j2;
                }
                mono.powers[var] += exp;
                sawFactor = true;
            } else {
                break;
            }
            skipWs();
            if (i < text.size() && text[i] == '*') {
                ++i;
                continue;
            }
            break;
        }
        if (!sawFactor) throw std::invalid_argument("parsePolynomial: empty term");
        poly.terms.push_back(std::move(mono));
    }
    return poly;
}

inline std::string formatPolynomial(const ElementPolynomial& poly) {
    if (poly.terms.empty()) return "0";
    std::string out;
    for (size_t t = 0; t < poly.terms.size(); ++t) {
        const auto& mono = poly.terms[t];
        Rational c = mono.coeff;
        if (t == 0) {
            if (c.sign() < 0) { out += "-"; c = -c; }
        } else {
            out += c.sign() < 0 ? " - " : " + ";
            if (c.sign() < 0) c = -c;
        }
        out += c.toString();
        for (int v = 0; v < static_cast<int>(ElementVar::COUNT); ++v) {
            if (!mono.powers[v]) continue;
            out += "*";
            out += elementVarName(static_cast<ElementVar>(v));
            if (mono.powers[v] > 1) out += "^" + std::to_string(mono.powers[v]);
        }
    }
    return out;
}

// Evaluation context: moments always, the epsilon table only for l-indexed
// entries. The indices l (and p) select the Gaudin charge pair.
template <typename Real>
struct ElementContext {
    int N = 0;
    Real h{};
    const Moments<Real>* mom = nullptr;
    const EpsilonTable<Real>* eps = nullptr;
    const CouplingSet<Real>* couplings = nullptr;
    int l = -1;
    int p = -1;
};

template <typename Real>
Real evaluatePolynomial(const ElementPolynomial& poly, const ElementContext<Real>& ctx) {
    Real total(0);
    for (const auto& mono : poly.terms) {
        Real term = ScalarTraits<Real>::fromRational(mono.coeff);
        auto powApply = [&term](Real base, int e) {
            for (int i = 0; i < e; ++i) term *= base;
        };
        for (int v = 0; v < static_cast<int>(ElementVar::COUNT); ++v) {
            int e = mono.powers[v];
            if (!e) continue;
            switch (static_cast<ElementVar>(v)) {
                case ElementVar::N: powApply(ScalarTraits<Real>::fromInt(ctx.N), e); break;
                case ElementVar::h: powApply(ctx.h, e); break;
                case ElementVar::S1:
                case ElementVar::S2:
                case ElementVar::S3:
                case ElementVar::S4:
                case ElementVar::S5:
                case ElementVar::S6:
                    powApply(ctx.mom->sigma(v - static_cast<int>(ElementVar::S1) + 1), e);
                    break;
                case ElementVar::Jl: powApply((*ctx.couplings)[ctx.l], e); break;
                case ElementVar::Jp: powApply((*ctx.couplings)[ctx.p], e); break;
                case ElementVar::Sl: powApply(ctx.eps->rowSum(ctx.l), e); break;
                case ElementVar::Sp: powApply(ctx.eps->rowSum(ctx.p), e); break;
                case ElementVar::Ql: powApply(ctx.eps->rowSq(ctx.l), e); break;
                case ElementVar::Qp: powApply(ctx.eps->rowSq(ctx.p), e); break;
                case ElementVar::Jlp: powApply(ctx.eps->jshift(ctx.l, ctx.p), e); break;
                case ElementVar::Ul: powApply(ctx.eps->bathWeighted(ctx.l), e); break;
                default: break;
            }
        }
        total += term;
    }
    return total;
}

// ---------------------------------------------------------------------------
// The element table: closed forms for every scalar product the tables
// backend serves. Entries marked "derived" were obtained with the
// coefficient solver / exact trace engine of this library; all entries are
// oracle checked in the test suite. Flags: h0 = valid at zero field only.
// The #alt entry keeps the appendix's 16386 denominator variant of the
// (IzH0^3|IzH0^3) element for the adjudication report; the primary entry
// uses 16384 = 2^14.
// ---------------------------------------------------------------------------

inline const char* elementTableVersion() { return "csmb-elements-v1"; }

inline const char* elementTableText() {
    return R"TBL(# csmb-elements-v1
# canonical scalar-product closed forms; grammar: rational [* var[^k]]...
# vector elements, zero field
S0z|IzI2H0 : 5/64*N*S1 + 3/64*S1 ; h0
Bz|IzI2H0 : 5/64*N*S2 - 7/64*S2 + 10/64*S1^2 ; h0
Bz|IzH0^3 : 3/256*S2^2 - 8/256*S1*S3 + 6/256*S4 ; h0
Bz|IzH0^2 : 5/64*S1*S2 - 4/64*S3 ; h0
# vector elements, arbitrary field
S0z|IzH0 : 1/16*S1
S0z|HlZ : -1/16*Jl
S0z|H0 : -1/4*h
S0z|Hl : 0
S0z|Iz : 1/4
S0z|H0^2 : 0
S0z|IzH0^2 : 1/64*S2 + 1/16*h^2
S0z|H0^3 : -5/64*h*S2 - 1/16*h^3
S0z|IzH0^3 : 3/64*h^2*S1 + 5/256*S2*S1 - 1/64*S3
# matrix elements, zero field
IzI2H0|IzI2H0 : 105/1024*N^3*S2 - 465/1024*N^2*S2 + 687/1024*N*S2 - 327/1024*S2 + 210/1024*N^2*S1^2 - 200/1024*N*S1^2 + 118/1024*S1^2 ; h0
IzH0^3|IzI2H0 : 40/4096*S1^4 + 200/4096*N*S1^2*S2 - 440/4096*S1^2*S2 - 320/4096*N*S1*S3 + 704/4096*S1*S3 + 75/4096*N^2*S2^2 - 320/4096*N*S2^2 + 413/4096*S2^2 + 30/4096*N^2*S4 + 208/4096*N*S4 - 574/4096*S4 ; h0
IzH0^2|IzI2H0 : 40/1024*S1^3 + 60/1024*N*S1*S2 - 132/1024*S1*S2 - 30/1024*N^2*S3 + 32/1024*N*S3 + 46/1024*S3 ; h0
IzH0|IzI2H0 : 20/256*N*S1^2 - 4/256*S1^2 + 15/256*N^2*S2 - 36/256*N*S2 + 21/256*S2 ; h0
IQz|IzI2H0 : 75/256*N^2*S1 - 124/256*N*S1 + 65/256*S1 ; h0
Iz|IzI2H0 : 20/64*N*S1 - 4/64*S1 ; h0
IQz|IzH0^3 : -6/1024*N^2*S3 + 22/1024*N*S3 + 20/1024*S3 + 21/1024*N*S1*S2 - 75/1024*S1*S2 + 20/1024*S1^3 ; h0
IQz|IzH0^2 : 7/256*N*S1^2 - 5/256*S1^2 + 3/256*N^2*S2 - 18/256*N*S2 + 15/256*S2 ; h0
# matrix elements, arbitrary field: integrability family
HlZ|HlZ : 2/64*Sl^2 + 3/64*N*Ql - 3/64*Ql + 1/16*h^2*N + 1/16*h^2
Hl|Hl : 3/16*Ql + 1/4*h^2
HlZ|HpZ : 1/16*Jlp*Sp - 1/16*Jlp*Sl - 3/64*N*Jlp^2 + 9/64*Jlp^2 + 1/8*h^2
Hl|Hp : -3/16*Jlp^2
Hl|HlZ : -1/8*h*Sl
Hl|HpZ : 0
Iz|Hl : -1/4*h
Iz|HlZ : 1/8*Sl ; derived
Bz|HlZ : 1/16*Jl*Sl + 1/16*Ul ; derived
# matrix elements, arbitrary field: powers of H0(h)
Iz|Iz : 1/4*N + 1/4
Iz|IzH0 : 1/8*S1
Iz|H0 : -1/4*h
H0|H0 : 3/16*S2 + 1/4*h^2
H0|IzH0 : -1/8*h*S1
IzH0|IzH0 : 2/64*S1^2 + 3/64*N*S2 - 3/64*S2 + 1/16*h^2*N + 1/16*h^2
IzH0|H0^2 : -3/64*h*S2 - 1/16*h^3
H0|H0^2 : -3/32*S3
H0^2|H0^2 : 5/32*h^2*S2 + 15/256*S2^2 + 3/128*S4 + 1/16*h^4
IzH0|IzH0^2 : 3/32*S1*h^2 + 3/128*S1*S2 + 1/128*S3 - 3/128*N*S3
IzH0^2|IzH0^2 : 3/64*h^2*S1^2 + 5/128*h^2*S2*N - 5/128*h^2*S2 + 5/256*S1^2*S2 + 15/1024*N*S2^2 - 29/1024*S2^2 - 1/32*S1*S3 + 11/512*S4 + 3/512*N*S4 + 1/64*h^4*N + 1/64*h^4
IzH0|H0^3 : -1/16*h^3*S1 - 5/64*h*S2*S1 + 1/16*h*S3
H0^3|H0^3 : 21/256*h^4*S2 + 105/1024*h^2*S2^2 - 3/512*h^2*S4 + 105/4096*S2^3 + 3/256*S3^2 + 3/256*S6 - 9/2048*S4*S2 + 1/64*h^6
H0^2|H0^3 : -5/64*h^2*S3 - 15/256*S2*S3
IzH0^3|IzH0^3 : 15/512*h^4*S1^2 + 21/1024*N*h^4*S2 - 21/1024*h^4*S2 - 3/32*h^2*S3*S1 + 63/1024*h^2*S2*S1^2 + 105/4096*N*h^2*S2^2 - 267/4096*h^2*S2^2 + 165/2048*h^2*S4 - 3/2048*N*h^2*S4 + 321/8192*S4*S2 + 105/8192*S1^2*S2^2 - 9/256*S1*S2*S3 + 1/128*S3^2 + 3/1024*N*S3^2 + 3/256*S1*S5 - 7/256*S6 + 3/1024*N*S6 - 3/4096*S1^2*S4 - 9/8192*N*S4*S2 + 105/16384*N*S2^3 - 317/16384*S2^3 + 1/256*h^6*N + 1/256*h^6
IzH0^3|IzH0^3#alt : 15/512*h^4*S1^2 + 21/1024*N*h^4*S2 - 21/1024*h^4*S2 - 3/32*h^2*S3*S1 + 63/1024*h^2*S2*S1^2 + 105/4096*N*h^2*S2^2 - 267/4096*h^2*S2^2 + 165/2048*h^2*S4 - 3/2048*N*h^2*S4 + 321/8192*S4*S2 + 105/8192*S1^2*S2^2 - 9/256*S1*S2*S3 + 1/128*S3^2 + 3/1024*N*S3^2 + 3/256*S1*S5 - 7/256*S6 + 3/1024*N*S6 - 3/4096*S1^2*S4 - 9/8192*N*S4*S2 + 105/16386*N*S2^3 - 317/16386*S2^3 + 1/256*h^6*N + 1/256*h^6
H0^2|IzH0^3 : -5/128*h^3*S2 + 5/128*h*S1*S3 - 15/512*h*S4 - 15/1024*h*S2^2 - 1/64*h^5
IzH0^2|IzH0^3 : 5/128*h^4*S1 + 15/256*h^2*S1*S2 - 5/256*N*h^2*S3 - 5/256*h^2*S3 + 15/2048*S1*S2^2 - 5/512*S1^2*S3 + 15/1024*S1*S4 - 3/256*S5 - 15/1024*N*S2*S3 + 15/1024*S2*S3
H0^3|IzH0^3 : -3/128*h^5*S1 - 21/256*h^3*S1*S2 + 1/16*h^3*S3 + 9/128*h*S2*S3 + 3/1024*h*S1*S4 - 3/128*h*S5 - 105/2048*h*S1*S2^2
# overlaps completing the named quantity sets (oracle validated)
Bz|Iz : 1/4*S1
Bz|Bz : 1/4*S2
Bz|IzH0 : 1/16*S2 ; derived
S0z|S0z : 1/4
S0z|IQz : 1/16*N ; derived h0
Iz|IQz : 1/16*N^2 + 1/16*N ; derived h0
IQz|IQz : 7/128*N^3 + 2/128*N^2 - 5/128*N ; derived h0
IQz|IzH0 : 7/64*N*S1 - 5/64*S1 ; derived h0
)TBL";
}

struct ElementEntry {
    ElementPolynomial poly;
    bool zeroFieldOnly = false;
    bool derived = false;
};

class ElementTable {
public:
    static const ElementTable& instance() {
        static ElementTable table{parse(elementTableText())};
        return table;
    }

    static std::map<std::string, ElementEntry> parse(const std::string& text) {
        std::map<std::string, ElementEntry> entries;
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto colon = line.find(" : ");
            if (colon == std::string::npos) throw std::invalid_argument("element table: bad line " + line);
            std::string key = line.substr(0, colon);
            std::string rest = line.substr(colon + 3);
            ElementEntry entry;
            auto semi = rest.find(" ; ");
            std::string polyText = rest.substr(0, semi == std::string::npos ? rest.size() : semi);
            if (semi != std::string::npos) {
                std::istringstream fs(rest.substr(semi + 3));
                std::string flag;
                while (fs >> flag) {
                    if (flag == "h0") entry.zeroFieldOnly = true;
                    else if (flag == "derived") entry.derived = true;
                    else throw std::invalid_argument("element table: unknown flag " + flag);
                }
            }
            entry.poly = parsePolynomial(polyText);
            while (!key.empty() && key.back() == ' ') key.pop_back();
            entries.emplace(std::move(key), std::move(entry));
        }
        return entries;
    }

    const ElementEntry* find(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }
    const std::map<std::string, ElementEntry>& entries() const { return entries_; }

    void write(std::ostream& os) const { os << elementTableText(); }

private:
    explicit ElementTable(std::map<std::string, ElementEntry> e) : entries_(std::move(e)) {}
    std::map<std::string, ElementEntry> entries_;
};

// --- canonical key construction -------------------------------------------

namespace detail {

// (a, p) exponents of I^z and H0(h) for the commuting family, or nullopt
inline std::optional<std::pair<int, int>> familyForm(const Descriptor& d) {
    using K = Descriptor::Kind;
    switch (d.kind) {
        case K::Iz: return {{1, 0}};
        case K::H0Power: return {{0, d.power}};
        case K::IzH0Power: return {{1, d.power}};
        case K::Hl:
            if (d.l == 0) return {{0, 1}};
            return std::nullopt;
        case K::HlZ:
            if (d.l == 0) return {{1, 1}};
            return std::nullopt;
        default: return std::nullopt;
    }
}

inline std::string familyName(int z, int p) {
    if (p == 0) return z ? "Iz" : "1";
    std::string base = p == 1 ? "H0" : "H0^" + std::to_string(p);
    return z ? "Iz" + base : base;
}

// representative printed pair for combined exponents (zc, pw)
inline std::string familyClassKey(int zc, int pw) {
    static const char* z0[] = {"", "", "H0|H0", "H0|H0^2", "H0^2|H0^2", "H0^2|H0^3", "H0^3|H0^3"};
    static const char* z1[] = {"", "Iz|H0", "H0|IzH0", "IzH0|H0^2", "IzH0|H0^3", "H0^2|IzH0^3", "H0^3|IzH0^3"};
    static const char* z2[] = {"Iz|Iz", "Iz|IzH0", "IzH0|IzH0", "IzH0|IzH0^2", "IzH0^2|IzH0^2",
                               "IzH0^2|IzH0^3", "IzH0^3|IzH0^3"};
    if (pw < 0 || pw > 6) return "";
    if (zc == 0) return pw >= 2 ? z0[pw] : "";
    if (zc == 1) return z1[pw];
    if (zc == 2) return z2[pw];
    return "";
}

inline int kindRank(Descriptor::Kind k) {
    using K = Descriptor::Kind;
    switch (k) {
        case K::S0z: return 0;
        case K::Bz: return 1;
        case K::Iz: return 2;
        case K::IQz: return 3;
        case K::IzH0Power: return 4;
        case K::H0Power: return 5;
        case K::IzI2H0: return 6;
        case K::Hl: return 7;
        case K::HlZ: return 8;
    }
    return 9;
}

} // namespace detail

// Canonical table key for a requested pair; fills the l (and p) indices the
// evaluation context needs. Uses commutation and hermiticity to route all
// members of the (I^z)^a H0(h)^p family onto the printed representatives.
struct ElementKey {
    std::string key;
    int l = -1;
    int p = -1;
};

inline ElementKey canonicalElementKey(Descriptor a, Descriptor b) {
    using K = Descriptor::Kind;
    // normalize the degenerate spellings
    auto normalize = [](Descriptor d) {
        if (d.kind == K::Hl && d.l == 0) return Descriptor::H0Power(1);
        if (d.kind == K::HlZ && d.l == 0) return Descriptor::IzH0Power(1);
        if (d.kind == K::IzH0Power && d.power == 0) return Descriptor::Iz();
        if (d.kind == K::H0Power && d.power == 0)
            throw UnknownElement("identity operator has no table entry");
        return d;
    };
    a = normalize(a);
    b = normalize(b);

    // a genuinely l-indexed partner pulls H0 / IzH0 back to the l = 0 charge
    auto indexed = [](const Descriptor& d) { return (d.kind == K::Hl || d.kind == K::HlZ) && d.l >= 1; };
    auto toCharge = [](Descriptor d) {
        if (d.kind == K::H0Power && d.power == 1) return Descriptor::Hl(0);
        if (d.kind == K::IzH0Power && d.power == 1) return Descriptor::HlZ(0);
        return d;
    };
    if (indexed(a)) b = toCharge(b);
    if (indexed(b)) a = toCharge(a);

    auto fa = detail::familyForm(a);
    auto fb = detail::familyForm(b);
    if (fa && fb) {
        int zc = fa->first + fb->first;
        int pw = fa->second + fb->second;
        std::string key = detail::familyClassKey(zc, pw);
        if (key.empty())
            throw UnknownElement("no closed form for family pair " + a.name() + "|" + b.name());
        return {key, -1, -1};
    }

    if (detail::kindRank(a.kind) > detail::kindRank(b.kind)) std::swap(a, b);

    // l-indexed pairs
    if (a.kind == K::Hl && b.kind == K::Hl)
        return a.l == b.l ? ElementKey{"Hl|Hl", a.l, -1} : ElementKey{"Hl|Hp", a.l, b.l};
    if (a.kind == K::HlZ && b.kind == K::HlZ)
        return a.l == b.l ? ElementKey{"HlZ|HlZ", a.l, -1} : ElementKey{"HlZ|HpZ", a.l, b.l};
    if (a.kind == K::Hl && b.kind == K::HlZ)
        return a.l == b.l ? ElementKey{"Hl|HlZ", a.l, -1} : ElementKey{"Hl|HpZ", a.l, b.l};

    auto genericName = [](const Descriptor& d) -> std::string {
        if (d.kind == K::Hl) return "Hl";
        if (d.kind == K::HlZ) return "HlZ";
        return d.name();
    };
    ElementKey key;
    key.key = genericName(a) + "|" + genericName(b);
    if (a.kind == K::Hl || a.kind == K::HlZ) key.l = a.l;
    if (b.kind == K::Hl || b.kind == K::HlZ) key.l = b.l;
    return key;
}

// Evaluate one scalar product from the table. Throws UnknownElement when the
// pair has no closed form (or needs h = 0 and h != 0 was requested).
template <typename Real>
Real tableElement(const Descriptor& a, const Descriptor& b, const ElementContext<Real>& ctx) {
    ElementKey k = canonicalElementKey(a, b);
    const ElementEntry* entry = ElementTable::instance().find(k.key);
    if (!entry) throw UnknownElement("no table entry for " + k.key);
    if (entry->zeroFieldOnly && !(ctx.h == Real(0)))
        throw UnknownElement("element " + k.key + " is only available at h = 0");
    ElementContext<Real> local = ctx;
    local.l = k.l;
    local.p = k.p;
    if (entry->poly.usesIndexedVars() && !local.eps)
        throw UnknownElement("element " + k.key + " needs an epsilon table");
    return evaluatePolynomial(entry->poly, local);
}

// ---------------------------------------------------------------------------
// Gaussian leading-order elements and the covariance entries behind them.
// ---------------------------------------------------------------------------

template <typename Real>
struct CovarianceEntries {
    Real sigma2; // (Bz|Bz)   = Sigma_2/4
    Real beta2;  // (Bz|Iz)   = Sigma_1/4
    Real alpha2; // (Iz|Iz) leading order = N/4
};

template <typename Real>
CovarianceEntries<Real> covarianceEntries(const CouplingSet<Real>& c) {
    Moments<Real> m(c, 2);
    return {m.sigma(2) / Real(4), m.sigma(1) / Real(4), ScalarTraits<Real>::fromInt(c.size()) / Real(4)};
}

inline BigInt doubleFactorialOdd(int m) {
    // (2m+1)!!; exact in BigInt. The cap exists only to catch runaway
    // callers: the mMax = 20 Hankel systems need m up to 2*20 - 1 = 39.
    if (m < 0) throw std::invalid_argument("doubleFactorialOdd: m must be >= 0");
    if (m > 64) throw ResourceExceeded("doubleFactorialOdd: m > 64 not supported");
    BigInt r(1);
    for (int k = 3; k <= 2 * m + 1; k += 2) r *= BigInt(k);
    return r;
}

// (Iz | Iz H0^{2m}) in leading order:
//   (2m+1)!!/2^(4m+2) * (N S2^m + (2m/3) S2^(m-1) S1^2);  m = 0 gives N/4.
inline Rational gaussianMatrixElementExact(int m, const Rational& n, const Rational& s1, const Rational& s2) {
    if (m == 0) return n / Rational(4);
    Rational pref(doubleFactorialOdd(m), BigInt(1) << (4 * m + 2));
    return pref * (n * s2.pow(m) + Rational(2 * m, 3) * s2.pow(m - 1) * s1 * s1);
}

// (S0z | Iz H0^{2m-1}) in leading order: (2m+1)!!/3 / 2^(4m) * S2^(m-1) S1.
inline Rational gaussianVectorElementExact(int m, const Rational& s1, const Rational& s2) {
    if (m < 1) throw std::invalid_argument("gaussianVectorElement: m must be >= 1");
    Rational pref(doubleFactorialOdd(m), BigInt(3) * (BigInt(1) << (4 * m)));
    return pref * s2.pow(m - 1) * s1;
}

template <typename Real>
Real gaussianMatrixElement(int m, const CouplingSet<Real>& c) {
    Moments<Real> mom(c, 2);
    Real n = ScalarTraits<Real>::fromInt(c.size());
    if (m == 0) return n / Real(4);
    Real pref = ScalarTraits<Real>::fromRational(Rational(doubleFactorialOdd(m), BigInt(1) << (4 * m + 2)));
    Real s2pm1(1);
    for (int i = 0; i < m - 1; ++i) s2pm1 *= mom.sigma(2);
    Real s1sq = mom.sigma(1) * mom.sigma(1);
    return pref * (n * s2pm1 * mom.sigma(2) + ScalarTraits<Real>::fromRational(Rational(2 * m, 3)) * s2pm1 * s1sq);
}

template <typename Real>
Real gaussianVectorElement(int m, const CouplingSet<Real>& c) {
    if (m < 1) throw std::invalid_argument("gaussianVectorElement: m must be >= 1");
    Moments<Real> mom(c, 2);
    Real pref = ScalarTraits<Real>::fromRational(Rational(doubleFactorialOdd(m), BigInt(3) * (BigInt(1) << (4 * m))));
    Real s2pm1(1);
    for (int i = 0; i < m - 1; ++i) s2pm1 *= mom.sigma(2);
    return pref * s2pm1 * mom.sigma(1);
}

} // namespace csmb

#endif
