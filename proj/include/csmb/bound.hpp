#ifndef CSMB_BOUND_HPP
#define CSMB_BOUND_HPP

#include <optional>
#include <string>
#include <vector>

#include "csmb/dense.hpp"
#include "csmb/elements.hpp"
#include "csmb/linalg.hpp"
#include "csmb/pauli_operators.hpp"

namespace csmb {

enum class Backend { TABLES, DENSE, SYMBOLIC };

inline const char* backendName(Backend b) {
    switch (b) {
        case Backend::TABLES: return "tables";
        case Backend::DENSE: return "dense";
        case Backend::SYMBOLIC: return "symbolic";
    }
    return "?";
}

// One Mazur-bound computation: project the target observable onto the span
// of the conserved quantities; A_low = a_C^T N^+ a_C.
template <typename Real>
struct BoundProblem {
    Descriptor target = Descriptor::S0z();
    std::vector<Descriptor> quantities;
    CouplingSet<Real> couplings;
    Real h{};
    Backend backend = Backend::TABLES;
    double eigenCutoffRel = 1e-12;
    bool forceCholesky = false; // large PD families skip the eigensolver
};

struct BoundResult {
    double value = 0;
    int rank = 0;
    double residual = 0;
    bool illConditioned = false;
    bool approximate = false;
    std::string backend;
    std::string precision;
    std::string flags() const {
        std::string f;
        if (illConditioned) f += "ILL_CONDITIONED";
        if (approximate) f += std::string(f.empty() ? "" : "|") + "APPROXIMATE";
        return f;
    }
};

template <typename Real>
struct AssembledBound {
    std::vector<Real> overlaps;   // a_C
    SymmetricMatrix<Real> norm;   // N
};

namespace bound_detail {

template <typename Real>
void validateProblem(const BoundProblem<Real>& p) {
    if (!(p.target.kind == Descriptor::Kind::S0z || p.target.kind == Descriptor::Kind::Bz))
        throw std::invalid_argument("bound target must be S0z or Bz");
    if (p.quantities.empty()) throw std::invalid_argument("bound problem needs at least one conserved quantity");
    double h = ScalarTraits<Real>::toDouble(p.h);
    for (const auto& q : p.quantities)
        if (!q.conservedAt(h))
            throw std::invalid_argument("quantity " + q.name() + " is not conserved at h != 0");
}

template <typename Real>
bool needsEpsilon(const BoundProblem<Real>& p) {
    for (const auto& q : p.quantities)
        if ((q.kind == Descriptor::Kind::Hl || q.kind == Descriptor::Kind::HlZ) && q.l >= 1) return true;
    return false;
}

} // namespace bound_detail

template <typename Real>
AssembledBound<Real> assembleTables(const BoundProblem<Real>& p) {
    bound_detail::validateProblem(p);
    const int n = static_cast<int>(p.quantities.size());
    Moments<Real> mom(p.couplings, 6);
    std::optional<EpsilonTable<Real>> eps;
    if (bound_detail::needsEpsilon(p)) eps.emplace(p.couplings);
    ElementContext<Real> ctx;
    ctx.N = p.couplings.size();
    ctx.h = p.h;
    ctx.mom = &mom;
    ctx.eps = eps ? &*eps : nullptr;
    ctx.couplings = &p.couplings;

    AssembledBound<Real> out;
    out.overlaps.resize(static_cast<size_t>(n));
    out.norm = SymmetricMatrix<Real>(n);
    for (int i = 0; i < n; ++i) {
        out.overlaps[static_cast<size_t>(i)] = tableElement(p.quantities[static_cast<size_t>(i)], p.target, ctx);
        for (int j = i; j < n; ++j) {
            Real v = tableElement(p.quantities[static_cast<size_t>(i)], p.quantities[static_cast<size_t>(j)], ctx);
            out.norm.at(i, j) = v;
            out.norm.at(j, i) = v;
        }
    }
    return out;
}

template <typename Real>
AssembledBound<Real> assembleDense(const BoundProblem<Real>& p) {
    bound_detail::validateProblem(p);
    using Work = long double;
    auto c = couplingsCast<Work>(p.couplings);
    Work h = Work(ScalarTraits<Real>::toDouble(p.h));
    DenseBuilder<Work> builder;
    auto target = builder.build(p.target, c, h);
    const int n = static_cast<int>(p.quantities.size());
    std::vector<DenseOperator<Work>> ops;
    ops.reserve(static_cast<size_t>(n));
    for (const auto& q : p.quantities) ops.push_back(builder.build(q, c, h));
    AssembledBound<Real> out;
    out.overlaps.resize(static_cast<size_t>(n));
    out.norm = SymmetricMatrix<Real>(n);
    for (int i = 0; i < n; ++i) {
        out.overlaps[static_cast<size_t>(i)] =
            ScalarTraits<Real>::fromDouble(static_cast<double>(denseScalarProduct(ops[static_cast<size_t>(i)], target).real()));
        for (int j = i; j < n; ++j) {
            Real v = ScalarTraits<Real>::fromDouble(
                static_cast<double>(denseScalarProduct(ops[static_cast<size_t>(i)], ops[static_cast<size_t>(j)]).real()));
            out.norm.at(i, j) = v;
            out.norm.at(j, i) = v;
        }
    }
    return out;
}

template <typename Real>
AssembledBound<Real> assembleSymbolic(const BoundProblem<Real>& p) {
    bound_detail::validateProblem(p);
    CouplingSet<Rational> c;
    c.normalization = p.couplings.normalization;
    c.x = p.couplings.x;
    for (const auto& v : p.couplings.values) c.values.push_back(toRationalScalar(v));
    Rational h = toRationalScalar(p.h);
    auto target = buildOperator(p.target, c, h);
    const int n = static_cast<int>(p.quantities.size());
    std::vector<PauliExpression> ops;
    ops.reserve(static_cast<size_t>(n));
    for (const auto& q : p.quantities) ops.push_back(buildOperator(q, c, h));
    AssembledBound<Real> out;
    out.overlaps.resize(static_cast<size_t>(n));
    out.norm = SymmetricMatrix<Real>(n);
    for (int i = 0; i < n; ++i) {
        out.overlaps[static_cast<size_t>(i)] =
            ScalarTraits<Real>::fromRational(scalarProduct(ops[static_cast<size_t>(i)], target).re);
        for (int j = i; j < n; ++j) {
            Real v = ScalarTraits<Real>::fromRational(
                scalarProduct(ops[static_cast<size_t>(i)], ops[static_cast<size_t>(j)]).re);
            out.norm.at(i, j) = v;
            out.norm.at(j, i) = v;
        }
    }
    return out;
}

template <typename Real>
AssembledBound<Real> assemble(const BoundProblem<Real>& p) {
    switch (p.backend) {
        case Backend::TABLES: return assembleTables(p);
        case Backend::DENSE: return assembleDense(p);
        case Backend::SYMBOLIC: return assembleSymbolic(p);
    }
    throw std::invalid_argument("assemble: unknown backend");
}

template <typename Real>
BoundResult solveBound(const BoundProblem<Real>& p) {
    auto ab = assemble(p);
    BoundResult res;
    res.backend = backendName(p.backend);
    res.precision = ScalarTraits<Real>::name();

    const int n = ab.norm.n;
    BoundSolveOutcome<Real> outcome;
    bool useCholesky = p.forceCholesky || n > 512;
    if constexpr (std::is_same_v<Real, DDReal>) {
        try {
            outcome = boundViaCholesky(ab.norm, ab.overlaps);
        } catch (const std::runtime_error&) {
            // rank-deficient quantity set: fall back to the rank-revealing
            // route in long double and keep the flagging honest
            SymmetricMatrix<long double> ml(n);
            std::vector<long double> al(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) {
                al[static_cast<size_t>(i)] = static_cast<long double>(ab.overlaps[static_cast<size_t>(i)].hi) +
                                             static_cast<long double>(ab.overlaps[static_cast<size_t>(i)].lo);
                for (int j = 0; j < n; ++j)
                    ml.at(i, j) = static_cast<long double>(ab.norm.at(i, j).hi) +
                                  static_cast<long double>(ab.norm.at(i, j).lo);
            }
            auto lo = boundViaEigen(ml, al, p.eigenCutoffRel);
            res.precision = "dd->f80";
            res.value = static_cast<double>(lo.value);
            res.rank = lo.rank;
            res.residual = static_cast<double>(lo.residual);
            res.illConditioned = lo.illConditioned;
            return res;
        }
    } else {
        if (useCholesky) {
            try {
                outcome = boundViaCholesky(ab.norm, ab.overlaps);
            } catch (const std::runtime_error&) {
                outcome = boundViaEigen(ab.norm, ab.overlaps, p.eigenCutoffRel);
            }
        } else {
            outcome = boundViaEigen(ab.norm, ab.overlaps, p.eigenCutoffRel);
        }
    }
    res.value = ScalarTraits<Real>::toDouble(outcome.value);
    res.rank = outcome.rank;
    res.residual = ScalarTraits<Real>::toDouble(outcome.residual);
    res.illConditioned = outcome.illConditioned;
    return res;
}

// --- closed-form bounds -----------------------------------------------------

// S_low = Sigma_1^2 / (4 (2 Sigma_1^2 + 3 (N-1) Sigma_2)); the single-quantity
// bound from I^z H_0 and the baseline for the large-x asymptotics.
template <typename Real>
Real simpleBound(const CouplingSet<Real>& c) {
    Moments<Real> m(c, 2);
    Real s1sq = m.sigma(1) * m.sigma(1);
    Real den = Real(2) * s1sq + Real(3) * ScalarTraits<Real>::fromInt(c.size() - 1) * m.sigma(2);
    return s1sq / (Real(4) * den);
}

// N -> infinity limit of simpleBound for exponential couplings:
// (1/(6x)) (1-e^-x)^2 / (1-e^-2x) = tanh(x/2)/(6x).
template <typename Real>
Real simpleBoundAsymptotic(Real x) {
    if (!(x > Real(0))) throw std::invalid_argument("simpleBoundAsymptotic: x must be > 0");
    using std::expm1;
    Real em = -expm1(-x);     // 1 - e^-x
    Real em2 = -expm1(-Real(2) * x); // 1 - e^-2x
    return em * em / (Real(6) * x * em2);
}

// Field-field (BB) bound: S_low,BB = S_low^(B) / (12 S^(B)(0)) with
// S^(B)(0) = Sigma_2/4. Approximate by derivation (rapid-precession step).
template <typename Real>
BoundResult fieldFieldBound(const BoundProblem<Real>& problem) {
    BoundProblem<Real> p = problem;
    p.target = Descriptor::Bz();
    if (p.quantities.empty()) p.quantities = quantitySet("integrability", p.couplings.size());
    BoundResult res = solveBound(p);
    Moments<Real> m(p.couplings, 2);
    Real denom = Real(12) * m.sigma(2) / Real(4);
    res.value = res.value / ScalarTraits<Real>::toDouble(denom);
    res.approximate = true;
    return res;
}

// Closed-form infinite-bath bound for the quantity pair {H0^z(h), H0(h)}
// with Sigma_2 = 1 normalization; h in units of J_Q.
template <typename Real>
Real infiniteFieldBound(Real x, Real h) {
    if (!(x > Real(0))) throw std::invalid_argument("infiniteFieldBound: x must be > 0");
    using std::exp;
    Real ex = exp(x);
    Real h2 = h * h;
    Real h4 = h2 * h2;
    Real num = ex * (Real(8) * h4 * x + h2 * (Real(6) * x - Real(4)) + Real(3)) +
               (Real(8) * h4 * x + h2 * (Real(6) * x + Real(4)) - Real(3));
    Real den = Real(2) * ex * (Real(16) * h4 * x + Real(8) * h2 * (Real(3) * x - Real(2)) + Real(9) * x + Real(12)) +
               Real(2) * (Real(16) * h4 * x + Real(8) * h2 * (Real(3) * x + Real(2)) + Real(9) * x - Real(12));
    return num / den;
}

// Gaussian-asymptotic bound from the quantities {I^z H_0, ..., I^z H_0^(2m-1)}
// in leading order of N. The Hankel system is catastrophically ill
// conditioned, so it is solved in exact rational arithmetic after
// rationalizing Sigma_1, Sigma_2 (exact for binary floating inputs); the
// reported sequence is then monotone in mMax by construction.
template <typename Real>
struct GaussianBoundResult {
    std::vector<Real> values; // values[m-1] = bound using mMax = m
    Real value{};
};

template <typename Real>
GaussianBoundResult<Real> gaussianAsymptoticBound(const CouplingSet<Real>& c, int mMax) {
    if (mMax < 1) throw std::invalid_argument("gaussianAsymptoticBound: mMax must be >= 1");
    Moments<Real> mom(c, 2);
    Rational n(static_cast<long long>(c.size()));
    Rational s1 = toRationalScalar(mom.sigma(1));
    Rational s2 = toRationalScalar(mom.sigma(2));

    GaussianBoundResult<Real> out;
    std::vector<std::vector<Rational>> m(static_cast<size_t>(mMax), std::vector<Rational>(static_cast<size_t>(mMax)));
    std::vector<Rational> a(static_cast<size_t>(mMax));
    for (int i = 1; i <= mMax; ++i) {
        a[static_cast<size_t>(i - 1)] = gaussianVectorElementExact(i, s1, s2);
        for (int j = 1; j <= mMax; ++j)
            m[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] = gaussianMatrixElementExact(i + j - 1, n, s1, s2);
    }
    // One exact elimination yields every nested bound: the leading k x k
    // blocks share the LDL^T factors, so value(k) = sum_{i<=k} z_i^2 / d_i.
    auto partials = exactQuadraticFormPrefixes(std::move(m), std::move(a));
    for (const auto& v : partials) out.values.push_back(ScalarTraits<Real>::fromRational(v));
    out.value = out.values.back();
    return out;
}

} // namespace csmb

#endif
