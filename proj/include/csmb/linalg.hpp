#ifndef CSMB_LINALG_HPP
#define CSMB_LINALG_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "csmb/errors.hpp"
#include "csmb/scalar.hpp"

namespace csmb {

// Row-major dense symmetric storage that also works for DDReal, where Eigen
// is not available.
template <typename Real>
struct SymmetricMatrix {
    int n = 0;
    std::vector<Real> data;

    SymmetricMatrix() = default;
    explicit SymmetricMatrix(int size) : n(size), data(static_cast<size_t>(size) * size, Real(0)) {}
    Real& at(int i, int j) { return data[static_cast<size_t>(i) * n + j]; }
    const Real& at(int i, int j) const { return data[static_cast<size_t>(i) * n + j]; }
};

template <typename Real>
struct BoundSolveOutcome {
    Real value{};
    int rank = 0;
    Real residual{};
    bool illConditioned = false;
    std::vector<Real> projection; // y with N y ~ a
};

namespace linalg_detail {

template <typename Real>
Real absVal(const Real& v) {
    using std::fabs;
    return fabs(v);
}

// relative residual ||N y - a|| / ||a||
template <typename Real>
Real relativeResidual(const SymmetricMatrix<Real>& m, const std::vector<Real>& y, const std::vector<Real>& a) {
    using std::sqrt;
    Real num(0), den(0);
    for (int i = 0; i < m.n; ++i) {
        Real acc(0);
        for (int j = 0; j < m.n; ++j) acc += m.at(i, j) * y[static_cast<size_t>(j)];
        Real d = acc - a[static_cast<size_t>(i)];
        num += d * d;
        den += a[static_cast<size_t>(i)] * a[static_cast<size_t>(i)];
    }
    if (!(den > Real(0))) return sqrt(num);
    return sqrt(num / den);
}

} // namespace linalg_detail

// Rank-revealing route: symmetric eigendecomposition with a relative
// eigenvalue cutoff, after symmetric diagonal equilibration. The scaling
// leaves exact rank deficiencies exact while keeping quantity families whose
// norms span many orders of magnitude (wide coupling spreads) resolvable;
// the bound is the projection norm onto the spanned subspace.
template <typename Real>
BoundSolveOutcome<Real> boundViaEigen(const SymmetricMatrix<Real>& m, const std::vector<Real>& a,
                                      double cutoffRel = 1e-12) {
    static_assert(std::is_floating_point_v<Real>, "eigen route needs a hardware scalar");
    using EMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    using EVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
    using std::sqrt;
    const int n = m.n;
    Real maxDiag(0);
    for (int i = 0; i < n; ++i) maxDiag = std::max(maxDiag, linalg_detail::absVal(m.at(i, i)));
    if (!(maxDiag > Real(0))) maxDiag = Real(1);
    std::vector<Real> scale(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Real d = m.at(i, i);
        Real floor = maxDiag * ScalarTraits<Real>::epsilon();
        scale[static_cast<size_t>(i)] = Real(1) / sqrt(std::max(d, floor));
    }
    EMat em(n, n);
    EVec ea(n);
    for (int i = 0; i < n; ++i) {
        ea(i) = a[static_cast<size_t>(i)] * scale[static_cast<size_t>(i)];
        for (int j = 0; j < n; ++j)
            em(i, j) = m.at(i, j) * scale[static_cast<size_t>(i)] * scale[static_cast<size_t>(j)];
    }
    Eigen::SelfAdjointEigenSolver<EMat> es(em);
    if (es.info() != Eigen::Success) throw std::runtime_error("boundViaEigen: eigensolver failed");
    const auto& ev = es.eigenvalues();
    Real lambdaMax(0);
    for (int i = 0; i < n; ++i) lambdaMax = std::max(lambdaMax, linalg_detail::absVal(ev(i)));
    Real cutoff = lambdaMax * Real(cutoffRel);
    BoundSolveOutcome<Real> out;
    EVec proj = es.eigenvectors().transpose() * ea;
    EVec y = EVec::Zero(n);
    Real value(0);
    for (int i = 0; i < n; ++i) {
        if (ev(i) <= cutoff) continue;
        value += proj(i) * proj(i) / ev(i);
        y += es.eigenvectors().col(i) * (proj(i) / ev(i));
        ++out.rank;
    }
    out.value = value;
    out.projection.assign(static_cast<size_t>(n), Real(0));
    for (int i = 0; i < n; ++i) out.projection[static_cast<size_t>(i)] = y(i) * scale[static_cast<size_t>(i)];
    out.residual = linalg_detail::relativeResidual(m, out.projection, a);
    out.illConditioned = !(out.residual < Real(1e-8));
    return out;
}

// Positive-definite route for large systems and extended precision:
// symmetric diagonal equilibration, Cholesky, and iterative refinement.
// Returns nullopt-like failure by throwing; the caller decides the fallback.
template <typename Real>
BoundSolveOutcome<Real> boundViaCholesky(const SymmetricMatrix<Real>& m, const std::vector<Real>& a,
                                         int refineSteps = 2) {
    using std::sqrt;
    const int n = m.n;
    std::vector<Real> scale(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Real d = m.at(i, i);
        if (!(d > Real(0))) throw std::runtime_error("boundViaCholesky: nonpositive diagonal");
        scale[static_cast<size_t>(i)] = Real(1) / sqrt(d);
    }
    // factor the equilibrated matrix L L^T = D M D
    SymmetricMatrix<Real> f(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            f.at(i, j) = m.at(i, j) * scale[static_cast<size_t>(i)] * scale[static_cast<size_t>(j)];
    for (int j = 0; j < n; ++j) {
        Real diag = f.at(j, j);
        for (int k = 0; k < j; ++k) diag -= f.at(j, k) * f.at(j, k);
        if (!(diag > Real(0)))
            throw std::runtime_error("boundViaCholesky: pivot " + std::to_string(j) + " not positive");
        Real ljj = sqrt(diag);
        f.at(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            Real acc = f.at(i, j);
            const Real* fi = &f.data[static_cast<size_t>(i) * n];
            const Real* fj = &f.data[static_cast<size_t>(j) * n];
            for (int k = 0; k < j; ++k) acc -= fi[k] * fj[k];
            f.at(i, j) = acc / ljj;
        }
    }
    auto solveScaled = [&](const std::vector<Real>& rhs) {
        std::vector<Real> x = rhs;
        for (int i = 0; i < n; ++i) {
            Real acc = x[static_cast<size_t>(i)];
            const Real* fi = &f.data[static_cast<size_t>(i) * n];
            for (int k = 0; k < i; ++k) acc -= fi[k] * x[static_cast<size_t>(k)];
            x[static_cast<size_t>(i)] = acc / fi[i];
        }
        for (int i = n; i-- > 0;) {
            Real acc = x[static_cast<size_t>(i)];
            for (int k = i + 1; k < n; ++k) acc -= f.at(k, i) * x[static_cast<size_t>(k)];
            x[static_cast<size_t>(i)] = acc / f.at(i, i);
        }
        return x;
    };

    // scaled right-hand side and refinement in the scaled system
    std::vector<Real> as(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) as[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] * scale[static_cast<size_t>(i)];
    std::vector<Real> ys = solveScaled(as);
    for (int step = 0; step < refineSteps; ++step) {
        std::vector<Real> r(static_cast<size_t>(n), Real(0));
        for (int i = 0; i < n; ++i) {
            Real acc(0);
            for (int j = 0; j < n; ++j)
                acc += m.at(i, j) * scale[static_cast<size_t>(i)] * scale[static_cast<size_t>(j)] *
                       ys[static_cast<size_t>(j)];
            r[static_cast<size_t>(i)] = as[static_cast<size_t>(i)] - acc;
        }
        auto dy = solveScaled(r);
        for (int i = 0; i < n; ++i) ys[static_cast<size_t>(i)] += dy[static_cast<size_t>(i)];
    }

    BoundSolveOutcome<Real> out;
    out.rank = n;
    out.projection.assign(static_cast<size_t>(n), Real(0));
    for (int i = 0; i < n; ++i) out.projection[static_cast<size_t>(i)] = ys[static_cast<size_t>(i)] * scale[static_cast<size_t>(i)];
    Real value(0);
    for (int i = 0; i < n; ++i) value += out.projection[static_cast<size_t>(i)] * a[static_cast<size_t>(i)];
    out.value = value;
    out.residual = linalg_detail::relativeResidual(m, out.projection, a);
    out.illConditioned = !(out.residual < Real(1e-8));
    return out;
}

// Exact-rational SPD solve of value = a^T M^{-1} a via Gaussian elimination.
// Unpivoted elimination is valid: every leading minor of a Gram matrix of
// independent operators is positive. Returns the prefix values
//   value_k = a_k^T M_k^{-1} a_k  (leading k x k block),
// which all fall out of one elimination because the leading blocks share
// their LDL^T factors: value_k = sum_{i<=k} z_i^2 / d_i.
inline std::vector<Rational> exactQuadraticFormPrefixes(std::vector<std::vector<Rational>> m,
                                                        std::vector<Rational> a) {
    const size_t n = a.size();
    for (size_t col = 0; col < n; ++col) {
        if (!(m[col][col] > Rational(0)))
            throw std::runtime_error("exactQuadraticForm: nonpositive pivot (matrix not PD)");
        for (size_t r = col + 1; r < n; ++r) {
            if (m[r][col].isZero()) continue;
            Rational f = m[r][col] / m[col][col];
            for (size_t j = col; j < n; ++j) m[r][j] -= f * m[col][j];
            a[r] -= f * a[col];
        }
    }
    std::vector<Rational> values;
    Rational value(0);
    for (size_t i = 0; i < n; ++i) {
        value += a[i] * a[i] / m[i][i];
        values.push_back(value);
    }
    return values;
}

inline Rational exactQuadraticForm(std::vector<std::vector<Rational>> m, std::vector<Rational> a) {
    return exactQuadraticFormPrefixes(std::move(m), std::move(a)).back();
}

} // namespace csmb

#endif
