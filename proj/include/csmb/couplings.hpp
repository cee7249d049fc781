#ifndef CSMB_COUPLINGS_HPP
#define CSMB_COUPLINGS_HPP

#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <type_traits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "csmb/errors.hpp"
#include "csmb/scalar.hpp"

namespace csmb {

enum class Normalization { RAW, SIGMA2_UNIT };

inline const char* normalizationName(Normalization n) { return n == Normalization::RAW ? "RAW" : "SIGMA2_UNIT"; }

// Bath couplings J_1..J_N. The scalar is Rational for the exact engines or a
// floating type for large-N scans. The spread x is recorded only for sets
// generated from the exponential family J_k = J exp(-k x / N).
template <typename R>
struct CouplingSet {
    std::vector<R> values;
    Normalization normalization = Normalization::RAW;
    std::optional<double> x;

    int size() const { return static_cast<int>(values.size()); }
    const R& operator[](int k) const { return values[static_cast<size_t>(k) - 1]; } // 1-based, as J_k
};

template <typename R>
CouplingSet<R> makeCouplings(std::vector<R> values, Normalization norm = Normalization::RAW) {
    for (const auto& v : values)
        if (!(v > R(0))) throw std::invalid_argument("couplings must be strictly positive");
    return CouplingSet<R>{std::move(values), norm, std::nullopt};
}

// J_k = J exp(-k x / N); with SIGMA2_UNIT the prefactor J is chosen so that
// Sigma_2 = 1 (x = 0 degenerates to uniform couplings J = 1/sqrt(N)).
template <typename R>
CouplingSet<R> exponentialCouplings(int N, double x, Normalization norm) {
    if (N < 1) throw std::invalid_argument("exponentialCouplings: N must be >= 1");
    if (x < 0) throw std::invalid_argument("exponentialCouplings: x must be >= 0");
    using std::exp;
    using std::expm1;
    using std::sqrt;
    R prefactor(1);
    if (norm == Normalization::SIGMA2_UNIT) {
        if (x == 0) {
            prefactor = R(1) / sqrt(R(static_cast<double>(N)));
        } else {
            R num = expm1(R(2 * x / N));
            R den = -expm1(R(-2 * x));
            prefactor = sqrt(num / den);
        }
    }
    R ratio = exp(R(-x / N));
    CouplingSet<R> c;
    c.normalization = norm;
    c.x = x;
    c.values.resize(static_cast<size_t>(N));
    R cur = prefactor * ratio;
    for (int k = 0; k < N; ++k) {
        c.values[static_cast<size_t>(k)] = cur;
        cur = cur * ratio;
    }
    return c;
}

template <typename To, typename From>
CouplingSet<To> couplingsCast(const CouplingSet<From>& c) {
    CouplingSet<To> r;
    r.normalization = c.normalization;
    r.x = c.x;
    r.values.reserve(c.values.size());
    for (const auto& v : c.values) {
        if constexpr (std::is_same_v<From, Rational>)
            r.values.push_back(ScalarTraits<To>::fromRational(v));
        else if constexpr (std::is_same_v<To, From> || std::is_arithmetic_v<From>)
            r.values.push_back(To(v));
        else
            r.values.push_back(ScalarTraits<To>::fromDouble(ScalarTraits<From>::toDouble(v)));
    }
    return r;
}

inline CouplingSet<double> couplingsToDouble(const CouplingSet<Rational>& c) {
    CouplingSet<double> r;
    r.normalization = c.normalization;
    r.x = c.x;
    for (const auto& v : c.values) r.values.push_back(v.toDouble());
    return r;
}

// Power sums Sigma_m = sum_k J_k^m, extended on demand.
template <typename R>
class Moments {
public:
    Moments() = default;
    explicit Moments(std::vector<R> values, int mMax = 2) : values_(std::move(values)) { extendTo(mMax); }
    explicit Moments(const CouplingSet<R>& c, int mMax = 2) : values_(c.values) { extendTo(mMax); }

    void extendTo(int mMax) {
        for (int m = static_cast<int>(sigma_.size()) + 1; m <= mMax; ++m) {
            R s(0);
            for (const auto& v : values_) s += pow(v, m);
            sigma_.push_back(s);
        }
    }

    const R& sigma(int m) const {
        if (m < 1 || m > static_cast<int>(sigma_.size()))
            throw std::out_of_range("Moments: sigma(" + std::to_string(m) + ") not computed");
        return sigma_[static_cast<size_t>(m) - 1];
    }
    int maxOrder() const { return static_cast<int>(sigma_.size()); }
    int bathSize() const { return static_cast<int>(values_.size()); }

private:
    static R pow(R base, int e) {
        R r(1);
        while (e) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }
    std::vector<R> values_;
    std::vector<R> sigma_;
};

template <typename R>
Moments<R> moments(const CouplingSet<R>& c, int mMax) {
    if (mMax < 1) throw std::invalid_argument("moments: mMax must be >= 1");
    return Moments<R>(c, mMax);
}

// N -> infinity limit of Sigma_m / (J^m N) for the exponential family.
template <typename R>
R momentsInfiniteT(R x, int m) {
    if (!(x > R(0))) throw std::invalid_argument("momentsInfinite: x must be > 0");
    using std::expm1;
    R mx = R(static_cast<double>(m)) * x;
    return -expm1(-mx) / mx;
}
inline double momentsInfinite(double x, int m) { return momentsInfiniteT<double>(x, m); }

// Inverse-coupling grid eps_0 = 0, eps_k = -1/J_k together with the row sums
//   S^(l) = sum_{j != l} J_j^(l),   Q^(l) = sum_{j != l} (J_j^(l))^2,
// where J_j^(l) = 1/(eps_l - eps_j). The bath-weighted sum
//   U^(l) = sum_{m=1..N, m != l} J_m J_m^(l)
// is needed for the Overhauser-field overlaps.
template <typename R>
class EpsilonTable {
public:
    explicit EpsilonTable(const CouplingSet<R>& c) {
        const int N = c.size();
        eps_.resize(static_cast<size_t>(N) + 1);
        eps_[0] = R(0);
        for (int k = 1; k <= N; ++k) {
            eps_[static_cast<size_t>(k)] = R(-1) / c[k];
            for (int j = 1; j < k; ++j)
                if (c[j] == c[k])
                    throw DegenerateCouplings("duplicate couplings J_" + std::to_string(j) + " = J_" +
                                              std::to_string(k) + "; eps_l - eps_j vanishes");
        }
        rowSum_.assign(static_cast<size_t>(N) + 1, R(0));
        rowSq_.assign(static_cast<size_t>(N) + 1, R(0));
        bathWeighted_.assign(static_cast<size_t>(N) + 1, R(0));
        for (int l = 0; l <= N; ++l) {
            R s(0), q(0), u(0);
            for (int j = 0; j <= N; ++j) {
                if (j == l) continue;
                R jj = R(1) / (eps_[static_cast<size_t>(l)] - eps_[static_cast<size_t>(j)]);
                s += jj;
                q += jj * jj;
                if (j >= 1) u += c[j] * jj;
            }
            rowSum_[static_cast<size_t>(l)] = s;
            rowSq_[static_cast<size_t>(l)] = q;
            bathWeighted_[static_cast<size_t>(l)] = u;
        }
    }

    int bathSize() const { return static_cast<int>(eps_.size()) - 1; }
    const R& eps(int k) const { return eps_[static_cast<size_t>(k)]; }
    R jshift(int l, int j) const { return R(1) / (eps_[static_cast<size_t>(l)] - eps_[static_cast<size_t>(j)]); }
    const R& rowSum(int l) const { return rowSum_[static_cast<size_t>(l)]; }     // S^(l)
    const R& rowSq(int l) const { return rowSq_[static_cast<size_t>(l)]; }       // Q^(l)
    const R& bathWeighted(int l) const { return bathWeighted_[static_cast<size_t>(l)]; } // U^(l)

private:
    std::vector<R> eps_, rowSum_, rowSq_, bathWeighted_;
};

template <typename R>
EpsilonTable<R> epsilonTable(const CouplingSet<R>& c) {
    return EpsilonTable<R>(c);
}

// External magnetic field on the central spin; in units of J_Q when the
// coupling set is SIGMA2_UNIT normalized.
struct FieldStrength {
    double h = 0.0;
};

// --- plain-text serialization -------------------------------------------
// header line:  # N=<int> x=<real> norm=<RAW|SIGMA2_UNIT>   (x optional)
// body:         one decimal or rational (p/q) per line

namespace detail {
inline std::string formatValue(const Rational& v) { return v.toString(); }
inline std::string formatValue(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
inline void parseValue(const std::string& s, Rational& out) { out = Rational::fromString(s); }
inline void parseValue(const std::string& s, double& out) {
    if (s.find('/') != std::string::npos) {
        out = Rational::fromString(s).toDouble();
    } else {
        out = std::stod(s);
    }
}
} // namespace detail

template <typename R>
void writeCouplings(std::ostream& os, const CouplingSet<R>& c) {
    os << "# N=" << c.size();
    if (c.x) os << " x=" << detail::formatValue(static_cast<double>(*c.x));
    os << " norm=" << normalizationName(c.normalization) << "\n";
    for (const auto& v : c.values) os << detail::formatValue(v) << "\n";
}

template <typename R>
CouplingSet<R> readCouplings(std::istream& is) {
    CouplingSet<R> c;
    std::string line;
    bool headerSeen = false;
    int declaredN = -1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (headerSeen) continue;
            headerSeen = true;
            std::istringstream hs(line.substr(1));
            std::string tok;
            while (hs >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "N") declaredN = std::stoi(val);
                else if (key == "x") c.x = std::stod(val);
                else if (key == "norm") c.normalization = (val == "SIGMA2_UNIT") ? Normalization::SIGMA2_UNIT : Normalization::RAW;
            }
            continue;
        }
        R v;
        detail::parseValue(line, v);
        if (!(v > R(0))) throw std::invalid_argument("readCouplings: nonpositive coupling");
        c.values.push_back(v);
    }
    if (declaredN >= 0 && declaredN != c.size())
        throw std::invalid_argument("readCouplings: header N does not match body");
    return c;
}

} // namespace csmb

#endif
