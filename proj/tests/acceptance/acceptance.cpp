// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Criterion 6 (thermodynamic-limit fits, hours of dense solves)
// lives in the separate acceptance_slow binary.

#include <cstring>
#include <map>
#include <set>

#include "acceptance_common.hpp"
#include "csmb/ansatz.hpp"
#include "csmb/bound.hpp"
#include "csmb/ed.hpp"
#include "csmb/gauss.hpp"

using namespace csmb;
using acceptance::Check;
using acceptance::randomDistinctCouplings;
using acceptance::randomRationalCouplings;
using acceptance::splitmix;

namespace {

// --- criterion 1: solver worked-example exactness ---------------------------
bool criterion1(std::ostringstream& log) {
    auto basis = generateBasis(Descriptor::Iz(), Descriptor::IzH0Power(2), /*zeroField=*/true);
    auto solved = AnsatzSolver::solveClosedForm(Descriptor::Iz(), Descriptor::IzH0Power(2), basis);
    bool ok = solved.provenance.size() == 3;
    const std::vector<std::vector<Rational>> systems = {
        {Rational(1)}, {Rational(1), Rational(1)}, {Rational(1), Rational(2)}};
    const std::vector<Rational> traces = {Rational(2, 64), Rational(14, 64), Rational(33, 64)};
    for (size_t i = 0; ok && i < 3; ++i) {
        ok = ok && solved.provenance[i].couplings.values == systems[i];
        ok = ok && solved.provenance[i].traceValue == traces[i];
    }
    std::map<std::string, Rational> byName;
    for (size_t i = 0; i < basis.monomials.size(); ++i) byName[basis.monomials[i].name()] = solved.coefficients[i];
    ok = ok && byName["N*S2"] == Rational(3, 64) && byName["S2"] == Rational(-3, 64) &&
         byName["S1^2"] == Rational(2, 64);
    log << "  systems {1},{1,1},{1,2}; raw traces 2/64, 14/64, 33/64; alpha = (3/64, -3/64, 2/64): "
        << (ok ? "exact" : "MISMATCH") << "\n";
    return ok;
}

// --- criterion 2: appendix regeneration + dense-oracle validation -----------
bool criterion2(std::ostringstream& log) {
    auto report = regenerateAppendixC();
    int rederived = 0, oracleDeferred = 0;
    for (const auto& r : report.records) {
        if (r.status == RegenerationRecord::Status::REDERIVED_MATCH) ++rederived;
        if (r.status == RegenerationRecord::Status::REDERIVED_MISMATCH)
            log << "  MISMATCH " << r.key << ": " << r.detail << "\n";
        if (r.status == RegenerationRecord::Status::ORACLE_VERIFIED) ++oracleDeferred;
    }
    bool ok = report.mismatches == 0 && rederived >= 40;
    log << "  " << rederived << " Sigma-polynomial elements re-derived exactly, " << oracleDeferred
        << " l-indexed elements to the dense oracle\n  " << report.adjudication << "\n";

    // dense-oracle validation of every table entry (including the l-indexed
    // ones) on N in {2..6}, 5 coupling sets, h in {0, 0.7, 3.2}
    using Real = long double;
    uint64_t seed = 424242;
    int compared = 0;
    double worst = 0;
    std::set<std::string> hit;
    for (int N = 2; N <= 6; ++N) {
        auto cr = randomRationalCouplings(seed, N);
        for (double h : {0.0, 0.7, 3.2}) {
            auto cd = couplingsCast<Real>(cr);
            Moments<Real> mom(cd, 6);
            EpsilonTable<Real> eps(cd);
            ElementContext<Real> ctx{N, static_cast<Real>(h), &mom, &eps, &cd, -1, -1};
            DenseBuilder<Real> builder;
            std::vector<Descriptor> pool = {Descriptor::S0z(),        Descriptor::Bz(),
                                            Descriptor::Iz(),         Descriptor::H0Power(1),
                                            Descriptor::H0Power(2),   Descriptor::H0Power(3),
                                            Descriptor::IzH0Power(1), Descriptor::IzH0Power(2),
                                            Descriptor::IzH0Power(3)};
            if (h == 0.0) {
                pool.push_back(Descriptor::IQz());
                pool.push_back(Descriptor::IzI2H0());
            }
            for (int l = 1; l <= std::min(N, 3); ++l) {
                pool.push_back(Descriptor::Hl(l));
                pool.push_back(Descriptor::HlZ(l));
            }
            std::vector<DenseOperator<Real>> dense;
            for (const auto& d : pool) dense.push_back(builder.build(d, cd, static_cast<Real>(h)));
            for (size_t i = 0; i < pool.size(); ++i) {
                for (size_t j = i; j < pool.size(); ++j) {
                    Real fromTable;
                    try {
                        fromTable = tableElement(pool[i], pool[j], ctx);
                        hit.insert(canonicalElementKey(pool[i], pool[j]).key);
                    } catch (const UnknownElement&) {
                        continue;
                    }
                    double want = static_cast<double>(denseScalarProduct(dense[i], dense[j]).real());
                    double got = static_cast<double>(fromTable);
                    double rel = std::fabs(got - want) / std::max(1.0, std::fabs(want));
                    worst = std::max(worst, rel);
                    ++compared;
                }
            }
        }
    }
    ok = ok && worst < 1e-11;
    int missing = 0;
    for (const auto& [key, entry] : ElementTable::instance().entries())
        if (key.find("#alt") == std::string::npos && !hit.count(key)) ++missing;
    ok = ok && missing == 0;
    log << "  dense oracle: " << compared << " element evaluations, worst relative deviation " << worst
        << ", uncovered table keys: " << missing << "\n";
    return ok;
}

// --- criterion 3: lower-bound property suite --------------------------------
bool criterion3(std::ostringstream& log) {
    uint64_t seed = 20258;
    int cases = 0, violations = 0;
    double worstMargin = 1.0;
    const std::vector<std::string> zeroFieldSets = {"iz-only", "basic3", "plus-h03", "all6-zero-field",
                                                    "integrability"};
    const std::vector<std::string> fieldSets = {"h-two", "h-six", "h-seven", "integrability", "h-integrability"};
    while (cases < 200) {
        int N = 1 + static_cast<int>(splitmix(seed) % 9);
        auto c = randomDistinctCouplings(seed, N);
        double h = std::vector<double>{0.0, 0.5, 2.0}[splitmix(seed) % 3];
        auto ed = edPersistingCorrelation(c, h);
        const auto& names = h == 0.0 ? zeroFieldSets : fieldSets;
        for (const auto& name : names) {
            if (cases >= 200) break;
            BoundProblem<double> p;
            p.couplings = c;
            p.h = h;
            p.quantities = quantitySet(name, N);
            auto res = solveBound(p);
            ++cases;
            double margin = ed.sInf + 1e-9 - res.value;
            worstMargin = std::min(worstMargin, margin);
            if (res.value > ed.sInf + 1e-9) {
                ++violations;
                log << "  VIOLATION: N=" << N << " h=" << h << " set=" << name << " bound=" << res.value
                    << " ed=" << ed.sInf << "\n";
            }
        }
    }
    // N = 1 tightness: the simple bound saturates the persisting correlation
    Rational exact = simpleBound(makeCouplings<Rational>({Rational(7, 3)}));
    bool tight = exact == Rational(1, 8);
    auto ed1 = edPersistingCorrelation(makeCouplings<double>({7.0 / 3}), 0.0);
    tight = tight && std::fabs(ed1.sInf - 0.125) < 1e-13;
    log << "  " << cases << " sampled (couplings, h, set) cases at N <= 9, violations: " << violations
        << ", worst margin " << worstMargin << "\n";
    log << "  N=1 tightness: simpleBound = 1/8 exactly " << (tight ? "and" : "BUT NOT") << " S_inf = 1/8\n";
    return violations == 0 && tight;
}

// --- criterion 4: integrability identities, exactly -------------------------
bool criterion4(std::ostringstream& log) {
    uint64_t seed = 77001;
    bool ok = true;
    for (int N : {3, 4}) {
        auto c = randomRationalCouplings(seed, N);
        Rational h(static_cast<long long>(1 + splitmix(seed) % 4), 1 + static_cast<long long>(splitmix(seed) % 3));
        std::vector<PauliExpression> charges;
        for (int l = 0; l <= N; ++l) charges.push_back(buildOperator(Descriptor::Hl(l), c, h));
        for (int l = 0; l <= N && ok; ++l)
            for (int p = l + 1; p <= N && ok; ++p) ok = commutator(charges[l], charges[p]).isZero();
        log << "  [H_l(h), H_p(h)] = 0 exactly for all pairs at N=" << N << " (h = " << h.toString()
            << "): " << (ok ? "yes" : "NO") << "\n";
        if (!ok) return false;

        // 4 (S0.B)^2 = B^2 - 2 eta as exact expressions
        const int sites = N + 1;
        PauliExpression s0b(sites), b2(sites), eta(sites);
        for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
            auto comp = buildBComponent(c, ax);
            s0b += multiply(PauliExpression::spinOp(sites, 0, ax), comp);
            b2 += multiply(comp, comp);
        }
        for (int l = 1; l <= N; ++l) eta += spinVectorDot(sites, 0, l).scaled(GaussianRational(c[l] * c[l]));
        auto lhs = multiply(s0b, s0b).scaled(GaussianRational(Rational(4)));
        auto rhs = b2 - eta.scaled(GaussianRational(Rational(2)));
        ok = ok && (lhs - rhs).isZero();
        log << "  4 (S0.B)^2 = B^2 - 2 eta exactly at N=" << N << ": " << (ok ? "yes" : "NO") << "\n";
    }
    return ok;
}

// --- criterion 5: even/odd scaling and the common limit ---------------------
bool criterion5(std::ostringstream& log) {
    const double x = 4.0;
    auto singleBound = [&](Descriptor d, int N) {
        BoundProblem<double> p;
        p.couplings = exponentialCouplings<double>(N, x, Normalization::SIGMA2_UNIT);
        p.quantities = {d};
        return solveBound(p).value;
    };
    auto fitExponent = [&](Descriptor d) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int N : {256, 512, 1024, 2048, 4096}) {
            double lx = std::log(static_cast<double>(N)), ly = std::log(singleBound(d, N));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++n;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    bool ok = true;
    for (auto [d, name] : std::vector<std::pair<Descriptor, const char*>>{
             {Descriptor::Iz(), "Iz"}, {Descriptor::IQz(), "IQz"}, {Descriptor::IzH0Power(2), "IzH0^2"}}) {
        double expo = fitExponent(d);
        bool good = std::fabs(expo + 1.0) <= 0.05;
        ok = ok && good;
        log << "  odd-count quantity " << name << ": fitted N-exponent " << expo << (good ? "" : "  OUT OF BAND")
            << "\n";
    }
    const int N = 4096;
    auto c = exponentialCouplings<double>(N, x, Normalization::SIGMA2_UNIT);
    Moments<double> m(c, 2);
    double limit = 0.25 * 5.0 / (42.0 + 21.0 * N * m.sigma(2) / (m.sigma(1) * m.sigma(1)));
    double v3 = singleBound(Descriptor::IzH0Power(3), N);
    double vq = singleBound(Descriptor::IzI2H0(), N);
    bool near = std::fabs(v3 - limit) < 1e-3 && std::fabs(vq - limit) < 1e-3;
    ok = ok && near;
    log << "  even-count quantities at N=4096: IzH0^3 -> " << v3 << ", IzI2H0 -> " << vq
        << ", common limit (1/4)*5/(42+21 N S2/S1^2) = " << limit << "\n";
    return ok;
}

// --- criterion 7: finite-field closed form -----------------------------------
bool criterion7(std::ostringstream& log) {
    bool ok = true;
    for (double x : {1.0, 4.0}) {
        double v = infiniteFieldBound(x, 1e6);
        ok = ok && std::fabs(v - 0.25) < 1e-6;
        log << "  infiniteFieldBound(x=" << x << ", h=1e6) = " << v << "\n";
    }
    for (double x : {1.0, 4.0}) {
        for (double h : {1.0, 2.0, 4.0}) {
            BoundProblem<DDReal> p;
            p.couplings = exponentialCouplings<DDReal>(4096, x, Normalization::SIGMA2_UNIT);
            p.h = DDReal(h);
            p.quantities = quantitySet("h-two", 4096);
            double finite = solveBound(p).value;
            double closed = infiniteFieldBound(x, h);
            double rel = std::fabs(finite - closed) / closed;
            ok = ok && rel < 1e-3;
            log << "  h-two at N=4096, x=" << x << ", h=" << h << ": " << finite << " vs closed form " << closed
                << " (rel " << rel << ")\n";
        }
    }
    // h-six dominates h-two at N=19 for h >= 2 and stays below ED at N=9
    for (double h : {2.0, 3.0, 4.0}) {
        BoundProblem<double> p2;
        p2.couplings = exponentialCouplings<double>(19, 1.0, Normalization::SIGMA2_UNIT);
        p2.h = h;
        p2.quantities = quantitySet("h-two", 19);
        auto rTwo = solveBound(p2);
        BoundProblem<double> p6 = p2;
        p6.quantities = quantitySet("h-six", 19);
        auto rSix = solveBound(p6);
        ok = ok && rSix.value >= rTwo.value - 1e-12;
        auto c9 = exponentialCouplings<double>(9, 1.0, Normalization::SIGMA2_UNIT);
        BoundProblem<double> p9 = p2;
        p9.couplings = c9;
        p9.quantities = quantitySet("h-six", 9);
        auto rNine = solveBound(p9);
        auto ed9 = edPersistingCorrelation(c9, h);
        ok = ok && rNine.value <= ed9.sInf + 1e-9;
        log << "  N=19 h=" << h << ": h-six " << rSix.value << " >= h-two " << rTwo.value
            << "; N=9 h-six " << rNine.value << " <= ED " << ed9.sInf << "\n";
    }
    return ok;
}

// --- criterion 8: gaussian machinery -----------------------------------------
bool criterion8(std::ostringstream& log) {
    bool ok = true;
    uint64_t seed = 90125;
    for (int trial = 0; trial < 2; ++trial) {
        auto c = randomDistinctCouplings(seed, 4 + static_cast<int>(splitmix(seed) % 4));
        auto g = gaussianModel(c);
        for (int m = 0; m <= 4; ++m) {
            auto mc = monteCarloMoment(m, g, 1000000, 555 + static_cast<uint64_t>(m) + trial);
            double want = analyticMoment(m, g);
            double pull = std::fabs(mc.mean - want) / mc.standardError;
            ok = ok && pull < 4.0;
            if (m == 4 || !ok)
                log << "  MC m=" << m << ": mean " << mc.mean << " vs analytic " << want << " (pull " << pull
                    << " SE)\n";
        }
    }
    // exact-rational Hankel solve: monotone in mMax; pinned at N=20. The
    // increment threshold holds in the fast-converging regime x = 4 (larger
    // spread converges faster); monotonicity is also asserted at x = 1.
    auto c1 = exponentialCouplings<double>(20, 1.0, Normalization::SIGMA2_UNIT);
    auto r1 = gaussianAsymptoticBound(c1, 20);
    for (size_t i = 1; i < r1.values.size(); ++i) ok = ok && r1.values[i] >= r1.values[i - 1];
    auto c4 = exponentialCouplings<double>(20, 4.0, Normalization::SIGMA2_UNIT);
    auto r4 = gaussianAsymptoticBound(c4, 20);
    double maxInc = 0;
    for (size_t i = 1; i < r4.values.size(); ++i) {
        ok = ok && r4.values[i] >= r4.values[i - 1];
        if (i >= 12) maxInc = std::max(maxInc, r4.values[i] - r4.values[i - 1]);
    }
    ok = ok && maxInc < 1e-6;
    log << "  gaussianAsymptoticBound N=20: monotone to mMax=20 at x=1 (" << r1.value << ") and x=4 ("
        << r4.value << "); max increment beyond mMax=12 at x=4: " << maxInc
        << "; exact solve, residual identically zero\n";
    return ok;
}

// --- criterion 9: backend triangulation ---------------------------------------
bool criterion9(std::ostringstream& log) {
    uint64_t seed = 31337;
    double worst = 0;
    int compared = 0;
    for (int N = 2; N <= 5; ++N) {
        auto c = randomDistinctCouplings(seed, N);
        for (double h : {0.0, 0.7}) {
            std::vector<std::string> names = h == 0.0
                ? std::vector<std::string>{"iz-only", "basic3", "all6-zero-field", "integrability"}
                : std::vector<std::string>{"h-two", "h-six", "h-seven", "h-integrability"};
            for (const auto& name : names) {
                auto qs = quantitySet(name, N);
                std::vector<double> reference;
                for (Backend backend : {Backend::TABLES, Backend::DENSE, Backend::SYMBOLIC}) {
                    BoundProblem<double> p;
                    p.couplings = c;
                    p.h = h;
                    p.quantities = qs;
                    p.backend = backend;
                    auto ab = assemble(p);
                    if (backend == Backend::TABLES) {
                        reference.clear();
                        for (const auto& v : ab.overlaps) reference.push_back(v);
                        for (const auto& v : ab.norm.data) reference.push_back(v);
                    } else {
                        size_t idx = 0;
                        for (const auto& v : ab.overlaps) {
                            double rel = std::fabs(v - reference[idx]) / std::max(1.0, std::fabs(reference[idx]));
                            worst = std::max(worst, rel);
                            ++idx;
                            ++compared;
                        }
                        for (const auto& v : ab.norm.data) {
                            double rel = std::fabs(v - reference[idx]) / std::max(1.0, std::fabs(reference[idx]));
                            worst = std::max(worst, rel);
                            ++idx;
                            ++compared;
                        }
                    }
                }
            }
        }
    }
    log << "  " << compared << " shared scalar products triangulated across tables/dense/symbolic, worst relative "
        << worst << "\n";
    return worst < 1e-10;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
    std::vector<Check> checks = {
        {1, "coefficient solver reproduces the worked example exactly", criterion1},
        {2, "element table re-derives exactly and matches the dense oracle", criterion2},
        {3, "200-case lower-bound property suite against exact diagonalization", criterion3},
        {4, "integrability identities hold as exact operator equations", criterion4},
        {5, "even/odd contraction scaling and the parallel common limit", criterion5},
        {7, "finite-field closed form: limits, N=4096 agreement, set ordering", criterion7},
        {8, "gaussian machinery: Monte Carlo vs analytic, Hankel convergence", criterion8},
        {9, "tables, dense, and symbolic backends triangulate", criterion9},
    };
    return acceptance::runAll(checks, only) == 0 ? 0 : 1;
}
