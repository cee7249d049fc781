#ifndef CSMB_GAUSS_HPP
#define CSMB_GAUSS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "csmb/elements.hpp"

namespace csmb {

// Gaussian-integral machinery behind the leading-order elements: the vector
// (B^x, B^y, B^z, I^z) is treated as a centered Gaussian with covariance
//   diag(s^2, s^2, [s^2 b^2; b^2 a^2])  (arrow structure in the z block),
// where s^2 = Sigma_2/4, b^2 = Sigma_1/4, a^2 = N/4.

struct GaussianModel {
    double sigma2; // variance of each B component
    double beta2;  // cov(B^z, I^z)
    double alpha2; // variance of I^z
};

inline GaussianModel gaussianModel(const CouplingSet<double>& c) {
    auto cov = covarianceEntries(c);
    return {cov.sigma2, cov.beta2, cov.alpha2};
}

inline double doubleFactorialOddD(int m) { return doubleFactorialOdd(m).toDouble(); }

// <(I^z)^2 B^{2m}> = (2m+1)!! s^{2m} a^2 + (2m/3)(2m+1)!! s^{2m-2} b^4
inline double analyticMoment(int m, const GaussianModel& g) {
    if (m < 0) throw std::invalid_argument("analyticMoment: m must be >= 0");
    // positive semidefinite covariance: a^2 s^2 >= b^4 (Cauchy-Schwarz)
    if (g.alpha2 * g.sigma2 < g.beta2 * g.beta2 * (1.0 - 1e-12))
        throw std::invalid_argument("analyticMoment: covariance not positive semidefinite");
    double df = doubleFactorialOddD(m);
    double value = df * std::pow(g.sigma2, m) * g.alpha2;
    if (m >= 1) value += (2.0 * m / 3.0) * df * std::pow(g.sigma2, m - 1) * g.beta2 * g.beta2;
    return value;
}

// int B^{2m+2} exp(-B^2/2s^2) sin(theta) dB dtheta dphi  =  (2pi)^{3/2} (2m+1)!! s^{2m+3}
// and with a cos^2(theta) weight and B^{2m+4}:  (1/3) (2pi)^{3/2} (2m+3)!! s^{2m+5}
inline double wickRadialIntegral(int m, double sigma, bool withCos2) {
    if (m < 0 || sigma <= 0) throw std::invalid_argument("wickRadialIntegral: need m >= 0, sigma > 0");
    double pref = std::pow(2 * M_PI, 1.5);
    if (!withCos2) return pref * doubleFactorialOddD(m) * std::pow(sigma, 2 * m + 3);
    return pref / 3.0 * doubleFactorialOddD(m + 1) * std::pow(sigma, 2 * m + 5);
}

// --- deterministic Monte Carlo ---------------------------------------------

namespace gauss_detail {

struct SplitMix {
    uint64_t state;
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() {
        // (0,1), never exactly 0
        return (static_cast<double>(next() >> 11) + 0.5) / 9007199254740992.0;
    }
};

// Box-Muller with explicit formulas: deterministic across platforms.
struct NormalSource {
    SplitMix rng;
    bool haveSpare = false;
    double spare = 0;
    double next() {
        if (haveSpare) {
            haveSpare = false;
            return spare;
        }
        double u = rng.uniform(), v = rng.uniform();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 2.0 * M_PI * v;
        spare = r * std::sin(a);
        haveSpare = true;
        return r * std::cos(a);
    }
};

} // namespace gauss_detail

struct MonteCarloMoment {
    double mean = 0;
    double standardError = 0;
    long long samples = 0;
};

// Sample mean of (I^z)^2 B^{2m} over the 4-dimensional Gaussian. The sampler
// uses the analytic Cholesky factor of the arrow covariance:
//   B^x = s x1, B^y = s x2, B^z = s x3, I^z = (b^2/s) x3 + sqrt(a^2 - b^4/s^2) x4,
// exact on the degenerate boundary a^2 s^2 = b^4 (uniform couplings).
// Sharded: shard seeds derive from the master seed by a fixed splitting rule,
// so the combined mean is independent of how shards are scheduled.
inline MonteCarloMoment monteCarloMoment(int m, const GaussianModel& g, long long samples, uint64_t seed,
                                         int shards = 16) {
    if (samples < 10000) throw std::invalid_argument("monteCarloMoment: need at least 1e4 samples");
    double s = std::sqrt(g.sigma2);
    double cross = g.beta2 / s;
    double rest2 = g.alpha2 - g.beta2 * g.beta2 / g.sigma2;
    double rest = rest2 > 0 ? std::sqrt(rest2) : 0.0;

    double sum = 0, sumSq = 0;
    long long done = 0;
    gauss_detail::SplitMix seeder{seed};
    for (int shard = 0; shard < shards; ++shard) {
        long long quota = samples / shards + (shard < samples % shards ? 1 : 0);
        gauss_detail::NormalSource normal{{seeder.next()}, false, 0};
        for (long long i = 0; i < quota; ++i) {
            double x1 = normal.next(), x2 = normal.next(), x3 = normal.next(), x4 = normal.next();
            double bx = s * x1, by = s * x2, bz = s * x3;
            double iz = cross * x3 + rest * x4;
            double b2 = bx * bx + by * by + bz * bz;
            double w = iz * iz * std::pow(b2, m);
            sum += w;
            sumSq += w * w;
        }
        done += quota;
    }
    MonteCarloMoment out;
    out.samples = done;
    out.mean = sum / static_cast<double>(done);
    double var = sumSq / static_cast<double>(done) - out.mean * out.mean;
    out.standardError = std::sqrt(std::max(var, 0.0) / static_cast<double>(done));
    return out;
}

} // namespace csmb

#endif
