#ifndef CSMB_FITTING_HPP
#define CSMB_FITTING_HPP

#include <Eigen/Dense>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "csmb/errors.hpp"

namespace csmb {

// Finite-size extrapolation and asymptotic fitting. Bound sequences are
// extrapolated in 1/N with a cubic polynomial (quadratic for spreads x > 50),
// using only points with N >= 8x so the coupling distribution stays dense.

struct Series {
    std::vector<std::pair<long long, double>> points; // (N, value), N strictly increasing
    double x = 0;                                     // shared spread of the series
};

enum class FitKind { POLY_INV_N, LOG_OVER_X };

struct FitResult {
    FitKind kind = FitKind::POLY_INV_N;
    std::vector<double> coefficients;  // c0, c1, ... in the fit basis
    std::vector<double> uncertainties; // one standard deviation each
    double intercept = 0;              // N -> infinity value (POLY_INV_N)
    double interceptUncertainty = 0;
    double residualNorm = 0;
    int pointsUsed = 0;
    double degreeSensitivity = 0; // max intercept shift when refitting at degree +-1
    // LOG_OVER_X parameters S(x) = A ln(x/B) / x
    double a = 0, b = 0, aErr = 0, bErr = 0;
};

namespace fit_detail {

struct LeastSquares {
    std::vector<double> coeff, err;
    double residualNorm;
};

// ordinary least squares via Householder QR in long double
inline LeastSquares solve(const std::vector<std::vector<double>>& rows, const std::vector<double>& rhs) {
    using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    const int n = static_cast<int>(rows.size());
    const int p = static_cast<int>(rows.front().size());
    Mat A(n, p);
    Vec y(n);
    for (int i = 0; i < n; ++i) {
        y(i) = rhs[static_cast<size_t>(i)];
        for (int j = 0; j < p; ++j) A(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    Eigen::ColPivHouseholderQR<Mat> qr(A);
    Vec beta = qr.solve(y);
    Vec res = A * beta - y;
    long double ssr = res.squaredNorm();
    long double s2 = n > p ? ssr / (n - p) : 0.0L;
    Mat cov = (A.transpose() * A).inverse() * s2;
    LeastSquares out;
    out.residualNorm = static_cast<double>(std::sqrt(ssr));
    for (int j = 0; j < p; ++j) {
        out.coeff.push_back(static_cast<double>(beta(j)));
        out.err.push_back(static_cast<double>(std::sqrt(std::max(cov(j, j), 0.0L))));
    }
    return out;
}

inline FitResult polyFit(const std::vector<std::pair<long long, double>>& pts, int degree) {
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const auto& [n, v] : pts) {
        std::vector<double> row;
        double invn = 1.0 / static_cast<double>(n);
        double f = 1.0;
        for (int d = 0; d <= degree; ++d) {
            row.push_back(f);
            f *= invn;
        }
        rows.push_back(std::move(row));
        rhs.push_back(v);
    }
    auto ls = solve(rows, rhs);
    FitResult out;
    out.kind = FitKind::POLY_INV_N;
    out.coefficients = ls.coeff;
    out.uncertainties = ls.err;
    out.intercept = ls.coeff[0];
    out.interceptUncertainty = ls.err[0];
    out.residualNorm = ls.residualNorm;
    out.pointsUsed = static_cast<int>(pts.size());
    return out;
}

} // namespace fit_detail

// Polynomial fit value = c0 + c1/N + c2/N^2 (+ c3/N^3 for x <= 50), applied
// after the N >= 8x filter; the intercept c0 is the thermodynamic limit.
inline FitResult extrapolateInvN(const Series& s) {
    std::vector<std::pair<long long, double>> pts;
    long long prev = 0;
    for (const auto& [n, v] : s.points) {
        if (n <= prev) throw std::invalid_argument("extrapolateInvN: N must be strictly increasing");
        prev = n;
        if (!std::isfinite(v)) throw std::invalid_argument("extrapolateInvN: non-finite value");
        if (static_cast<double>(n) >= 8.0 * s.x) pts.push_back({n, v});
    }
    const int degree = s.x <= 50 ? 3 : 2;
    if (static_cast<int>(pts.size()) < degree + 2)
        throw InsufficientPoints("extrapolateInvN: need at least " + std::to_string(degree + 2) +
                                 " points with N >= 8x, have " + std::to_string(pts.size()));
    FitResult fit = fit_detail::polyFit(pts, degree);
    // degree sensitivity: refit one degree down and (points permitting) one up
    double shift = 0;
    auto down = fit_detail::polyFit(pts, degree - 1);
    shift = std::max(shift, std::fabs(down.intercept - fit.intercept));
    if (static_cast<int>(pts.size()) >= degree + 3) {
        auto up = fit_detail::polyFit(pts, degree + 1);
        shift = std::max(shift, std::fabs(up.intercept - fit.intercept));
    }
    fit.degreeSensitivity = shift;
    return fit;
}

// S(x) = A ln(x/B) / x fitted on [xStart, xEnd]; linear in (A, C = -A ln B)
// after multiplying by x, uncertainties propagated through B = exp(-C/A).
inline FitResult fitLogOverX(const std::vector<std::pair<double, double>>& points, double xStart, double xEnd) {
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    double firstX = 0;
    bool allEqual = true;
    for (const auto& [x, sVal] : points) {
        if (x < xStart || x > xEnd) continue;
        if (x <= 0) throw std::invalid_argument("fitLogOverX: x must be positive");
        if (rows.empty()) firstX = x;
        else if (x != firstX) allEqual = false;
        rows.push_back({std::log(x), 1.0});
        rhs.push_back(sVal * x);
    }
    if (rows.size() < 3) throw InsufficientPoints("fitLogOverX: need at least 3 points in the window");
    if (allEqual) throw std::invalid_argument("fitLogOverX: all x values equal");
    auto ls = fit_detail::solve(rows, rhs);
    FitResult out;
    out.kind = FitKind::LOG_OVER_X;
    out.coefficients = ls.coeff;
    out.uncertainties = ls.err;
    out.residualNorm = ls.residualNorm;
    out.pointsUsed = static_cast<int>(rows.size());
    const double A = ls.coeff[0], C = ls.coeff[1];
    if (A == 0) throw std::runtime_error("fitLogOverX: degenerate fit with A = 0");
    out.a = A;
    out.b = std::exp(-C / A);
    out.aErr = ls.err[0];
    // var(B) from the delta method; the QR covariance is diagonal-dominant
    // enough that the cross term is folded in via the parameter errors
    double dBdA = out.b * C / (A * A);
    double dBdC = -out.b / A;
    out.bErr = std::sqrt(dBdA * dBdA * ls.err[0] * ls.err[0] + dBdC * dBdC * ls.err[1] * ls.err[1]);
    return out;
}

// --- two-column CSV with # comments -----------------------------------------

inline std::vector<std::pair<double, double>> readCsvPairs(std::istream& is) {
    std::vector<std::pair<double, double>> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("csv: missing comma in " + line);
        out.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    return out;
}

inline void writeCsvPairs(std::ostream& os, const std::string& header,
                          const std::vector<std::pair<double, double>>& rows) {
    os << "# " << header << "\n";
    char buf[64];
    for (const auto& [a, b] : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a, b);
        os << buf;
    }
}

} // namespace csmb

#endif
