#include "doctest.h"

#include <cmath>

#include "csmb/bound.hpp"
#include "csmb/ed.hpp"

using namespace csmb;

namespace {
uint64_t splitmix(uint64_t& s) {
    uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

CouplingSet<double> randomDistinct(uint64_t& s, int N) {
    std::vector<double> v;
    for (int k = 0; k < N; ++k) v.push_back(0.4 + static_cast<double>(splitmix(s) % 1000) / 400.0 + 0.003 * k);
    return makeCouplings<double>(v);
}

template <typename Real>
BoundProblem<Real> problem(Descriptor target, std::vector<Descriptor> qs, CouplingSet<Real> c, Real h,
                           Backend backend = Backend::TABLES) {
    BoundProblem<Real> p;
    p.target = target;
    p.quantities = std::move(qs);
    p.couplings = std::move(c);
    p.h = h;
    p.backend = backend;
    return p;
}
} // namespace

TEST_SUITE("bound") {

TEST_CASE("assemble worked examples") {
    // target S0z, {Iz}, N=3: a = 1/4, N = (N+1)/4 = 1
    auto c3 = makeCouplings<double>({1.0, 2.0, 3.0});
    auto ab = assemble(problem<double>(Descriptor::S0z(), {Descriptor::Iz()}, c3, 0.0));
    CHECK(ab.overlaps[0] == doctest::Approx(0.25));
    CHECK(ab.norm.at(0, 0) == doctest::Approx(1.0));

    // target S0z, {H0(h)} at h=1, J={1,1}: a = -1/4, N = 3*2/16 + 1/4 = 5/8
    auto c11 = makeCouplings<double>({1.0, 1.0});
    auto ab2 = assemble(problem<double>(Descriptor::S0z(), {Descriptor::H0Power(1)}, c11, 1.0));
    CHECK(ab2.overlaps[0] == doctest::Approx(-0.25));
    CHECK(ab2.norm.at(0, 0) == doctest::Approx(0.625));

    // target Bz, {Iz}, J={1,2}: a = Sigma_1/4 = 3/4
    auto c12 = makeCouplings<double>({1.0, 2.0});
    auto ab3 = assemble(problem<double>(Descriptor::Bz(), {Descriptor::Iz()}, c12, 0.0));
    CHECK(ab3.overlaps[0] == doctest::Approx(0.75));
}

TEST_CASE("iz-only bound is 1/(4(N+1))") {
    for (int N : {1, 3, 8, 100}) {
        auto c = exponentialCouplings<double>(N, 1.0, Normalization::RAW);
        auto res = solveBound(problem<double>(Descriptor::S0z(), quantitySet("iz-only", N), c, 0.0));
        CHECK(res.value == doctest::Approx(1.0 / (4.0 * (N + 1))).epsilon(1e-12));
        CHECK(res.rank == 1);
        CHECK_FALSE(res.illConditioned);
    }
}

TEST_CASE("simple bound closed form") {
    auto c11 = makeCouplings<double>({1.0, 1.0});
    CHECK(simpleBound(c11) == doctest::Approx(1.0 / 14).epsilon(1e-15));
    auto c1 = makeCouplings<double>({0.7});
    CHECK(simpleBound(c1) == doctest::Approx(0.125).epsilon(1e-15)); // J-independent at N=1

    // equals the single-quantity bound from IzH0 for generic couplings
    uint64_t s = 11;
    for (int N : {2, 4, 6}) {
        auto c = randomDistinct(s, N);
        auto res = solveBound(problem<double>(Descriptor::S0z(), {Descriptor::IzH0Power(1)}, c, 0.0));
        CHECK(res.value == doctest::Approx(simpleBound(c)).epsilon(1e-12));
    }

    // adding Iz strictly improves the projection; at J={1,1} the pair gives 5/52
    auto res2 = solveBound(problem<double>(Descriptor::S0z(), {Descriptor::Iz(), Descriptor::IzH0Power(1)}, c11, 0.0));
    CHECK(res2.value == doctest::Approx(5.0 / 52).epsilon(1e-12));
    CHECK(res2.value > simpleBound(c11));
}

TEST_CASE("simple bound asymptotics") {
    // x -> 0+ limit is 1/12
    CHECK(simpleBoundAsymptotic(1e-8) == doctest::Approx(1.0 / 12).epsilon(1e-7));
    // independent evaluation: tanh(x/2)/(6x)
    for (double x : {0.5, 1.0, 4.0, 20.0}) {
        CHECK(simpleBoundAsymptotic(x) == doctest::Approx(std::tanh(x / 2) / (6 * x)).epsilon(1e-14));
    }
    CHECK(simpleBoundAsymptotic(1.0) == doctest::Approx(0.0770195262).epsilon(1e-8));
    CHECK(simpleBoundAsymptotic(4.0) == doctest::Approx(0.0401678158).epsilon(1e-8));
    CHECK_THROWS_AS(simpleBoundAsymptotic(0.0), std::invalid_argument);

    // finite-N simple bound converges to (1/4) s1^2/(2 s1^2 + 3 s2) with the
    // per-spin moments s_m; the printed 1/(6x) form drops 2 s1^2 against
    // 3 N s2 and is reached only for large spread
    for (double x : {1.0, 4.0}) {
        auto big = exponentialCouplings<double>(20000, x, Normalization::RAW);
        double s1 = momentsInfinite(x, 1), s2 = momentsInfinite(x, 2);
        double limit = 0.25 * s1 * s1 / (2 * s1 * s1 + 3 * s2);
        CHECK(simpleBound(big) == doctest::Approx(limit).epsilon(2e-4));
    }
    auto wide = exponentialCouplings<double>(60000, 50.0, Normalization::RAW);
    CHECK(simpleBound(wide) == doctest::Approx(simpleBoundAsymptotic(50.0)).epsilon(0.03));
}

TEST_CASE("redundant quantities do not change the bound") {
    uint64_t s = 77;
    const int N = 4;
    auto c = randomDistinct(s, N);
    // {H_l^z, l=0..N} has exactly one linear dependency (sum_l H_l = 0)
    std::vector<Descriptor> full, reduced;
    for (int l = 0; l <= N; ++l) full.push_back(Descriptor::HlZ(l));
    for (int l = 0; l < N; ++l) reduced.push_back(Descriptor::HlZ(l));
    auto rFull = solveBound(problem<double>(Descriptor::S0z(), full, c, 0.0));
    auto rRed = solveBound(problem<double>(Descriptor::S0z(), reduced, c, 0.0));
    CHECK(rFull.value == doctest::Approx(rRed.value).epsilon(1e-9));
    CHECK(rFull.rank == N); // one direction dropped
    CHECK_FALSE(rFull.illConditioned);
}

TEST_CASE("projection monotonicity for nested sets") {
    uint64_t s = 123;
    auto c = randomDistinct(s, 5);
    double prev = 0;
    for (const char* name : {"iz-only", "basic3", "plus-h03", "all6-zero-field"}) {
        auto res = solveBound(problem<double>(Descriptor::S0z(), quantitySet(name, 5), c, 0.0));
        CHECK(res.value >= prev - 1e-9);
        prev = res.value;
    }
}

TEST_CASE("backend equivalence on shared sets") {
    uint64_t s = 321;
    for (int N : {2, 4}) {
        auto c = randomDistinct(s, N);
        for (double h : {0.0, 0.8}) {
            std::vector<std::string> names = h == 0.0
                ? std::vector<std::string>{"iz-only", "basic3", "all6-zero-field", "integrability"}
                : std::vector<std::string>{"h-two", "h-six", "integrability", "h-integrability"};
            for (const auto& name : names) {
                auto qs = quantitySet(name, N);
                auto t = solveBound(problem<double>(Descriptor::S0z(), qs, c, h, Backend::TABLES));
                auto d = solveBound(problem<double>(Descriptor::S0z(), qs, c, h, Backend::DENSE));
                auto y = solveBound(problem<double>(Descriptor::S0z(), qs, c, h, Backend::SYMBOLIC));
                double scale = std::max(1e-12, std::fabs(t.value));
                CHECK(std::fabs(t.value - d.value) / scale < 1e-10);
                CHECK(std::fabs(t.value - y.value) / scale < 1e-10);
            }
        }
    }
}

TEST_CASE("bounds never exceed the ED persisting correlation") {
    auto c = exponentialCouplings<double>(4, 1.0, Normalization::RAW);
    auto ed = edPersistingCorrelation(c, 0.0);
    for (const char* name : {"iz-only", "basic3", "plus-h03", "all6-zero-field", "integrability"}) {
        auto res = solveBound(problem<double>(Descriptor::S0z(), quantitySet(name, 4), c, 0.0));
        CHECK(res.value <= ed.sInf + 1e-9);
        CHECK(res.value >= 0.0);
        CHECK(res.value <= 0.25 + 1e-12);
    }
}

TEST_CASE("field-field bound") {
    // N=1 with {Iz}: S_low^B = J^2/8, bound = 1/24 independent of J
    for (double j : {1.0, 2.5}) {
        auto c = makeCouplings<double>({j});
        auto p = problem<double>(Descriptor::Bz(), {Descriptor::Iz()}, c, 0.0);
        auto res = fieldFieldBound(p);
        CHECK(res.value == doctest::Approx(1.0 / 24).epsilon(1e-12));
        CHECK(res.approximate);
        CHECK(res.flags().find("APPROXIMATE") != std::string::npos);
    }
    // never exceeds 1/12, default integrability set
    uint64_t s = 5;
    for (int N : {3, 6}) {
        auto c = randomDistinct(s, N);
        BoundProblem<double> p;
        p.couplings = c;
        auto res = fieldFieldBound(p);
        CHECK(res.value <= 1.0 / 12 + 1e-12);
        CHECK(res.value > 0.0);
    }
}

TEST_CASE("infinite field closed form") {
    // h -> infinity tends to 1/4
    CHECK(infiniteFieldBound(1.0, 1e6) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(infiniteFieldBound(4.0, 1e6) == doctest::Approx(0.25).epsilon(1e-6));
    // h = 0, x = 1: 3(e-1)/(42 e - 6), simplified from the printed form
    double e = std::exp(1.0);
    CHECK(infiniteFieldBound(1.0, 0.0) == doctest::Approx(3 * (e - 1) / (42 * e - 6)).epsilon(1e-14));
    CHECK(infiniteFieldBound(1.0, 0.0) == doctest::Approx(0.047655).epsilon(1e-4));
    CHECK_THROWS_AS(infiniteFieldBound(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("gaussian asymptotic bound") {
    auto c = exponentialCouplings<double>(20, 1.0, Normalization::SIGMA2_UNIT);
    auto res = gaussianAsymptoticBound(c, 8);
    REQUIRE(res.values.size() == 8);
    // mMax = 1 equals the N->infinity form of the simple bound
    Moments<double> m(c, 2);
    double s1sq = m.sigma(1) * m.sigma(1);
    double expect = 0.25 * s1sq / (2 * s1sq + 3 * 20 * m.sigma(2));
    CHECK(res.values[0] == doctest::Approx(expect).epsilon(1e-12));
    // monotone nondecreasing, exactly (rational arithmetic inside)
    for (size_t i = 1; i < res.values.size(); ++i) CHECK(res.values[i] >= res.values[i - 1]);
    // single-quantity {IzH0^3} large-N limit: (1/4) * 5/(42 + 21 N S2/S1^2)
    Rational n(20);
    Rational s1r = toRationalScalar(m.sigma(1));
    Rational s2r = toRationalScalar(m.sigma(2));
    Rational a = gaussianVectorElementExact(2, s1r, s2r);
    Rational mm = gaussianMatrixElementExact(3, n, s1r, s2r);
    double single = (a * a / mm).toDouble();
    double closed = 0.25 * 5 / (42 + 21 * 20 * m.sigma(2) / s1sq);
    CHECK(single == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("ill-conditioned detection on an inconsistent pseudo-inverse") {
    SymmetricMatrix<double> m(2);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = 1e-30; // below the relative cutoff
    std::vector<double> a{1.0, 0.5};
    auto out = boundViaEigen(m, a, 1e-12);
    CHECK(out.rank == 1);
    CHECK(out.illConditioned); // the dropped direction carries overlap
}

TEST_CASE("cholesky and eigen routes agree on random SPD systems") {
    uint64_t s = 999;
    const int n = 40;
    SymmetricMatrix<double> m(n);
    std::vector<double> a(static_cast<size_t>(n));
    // SPD via A = B B^T + I
    std::vector<double> b(static_cast<size_t>(n * n));
    for (auto& v : b) v = static_cast<double>(splitmix(s) % 1000) / 500.0 - 1.0;
    for (int i = 0; i < n; ++i) {
        a[static_cast<size_t>(i)] = static_cast<double>(splitmix(s) % 1000) / 500.0 - 1.0;
        for (int j = 0; j < n; ++j) {
            double acc = i == j ? 1.0 : 0.0;
            for (int k = 0; k < n; ++k) acc += b[static_cast<size_t>(i * n + k)] * b[static_cast<size_t>(j * n + k)];
            m.at(i, j) = acc;
        }
    }
    auto e = boundViaEigen(m, a);
    auto ch = boundViaCholesky(m, a);
    CHECK(e.value == doctest::Approx(ch.value).epsilon(1e-11));
    CHECK_FALSE(ch.illConditioned);

    // double-double route reproduces double
    SymmetricMatrix<DDReal> md(n);
    std::vector<DDReal> ad(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        ad[static_cast<size_t>(i)] = DDReal(a[static_cast<size_t>(i)]);
        for (int j = 0; j < n; ++j) md.at(i, j) = DDReal(m.at(i, j));
    }
    auto dd = boundViaCholesky(md, ad);
    CHECK(dd.value.hi == doctest::Approx(ch.value).epsilon(1e-13));
}

TEST_CASE("quantity validation") {
    auto c = makeCouplings<double>({1.0, 2.0});
    CHECK_THROWS_AS(solveBound(problem<double>(Descriptor::S0z(), {Descriptor::IQz()}, c, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(solveBound(problem<double>(Descriptor::Iz(), {Descriptor::Iz()}, c, 0.0)),
                    std::invalid_argument);
}


TEST_CASE("field bound sanity at large h") {
    // {H0^z(h)} alone decays like h^-2; adding H0(h) restores 1/4
    auto c = exponentialCouplings<double>(12, 1.0, Normalization::SIGMA2_UNIT);
    double prevScaled = 0;
    for (double h : {20.0, 40.0, 80.0}) {
        auto alone = solveBound(problem<double>(Descriptor::S0z(), {Descriptor::IzH0Power(1)}, c, h));
        double scaled = alone.value * h * h;
        if (prevScaled != 0) CHECK(scaled == doctest::Approx(prevScaled).epsilon(0.02));
        prevScaled = scaled;
    }
    auto both = solveBound(problem<double>(Descriptor::S0z(), quantitySet("h-two", 12), c, 1e4));
    CHECK(both.value == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("integrability is marginal at finite field (N = 199)") {
    auto c = exponentialCouplings<double>(199, 1.0, Normalization::SIGMA2_UNIT);
    for (double h : {1.0, 2.0, 4.0}) {
        auto small = solveBound(problem<double>(Descriptor::S0z(), quantitySet("h-two", 199), c, h));
        auto full = solveBound(problem<double>(Descriptor::S0z(), quantitySet("h-integrability", 199), c, h));
        CHECK(full.value >= small.value - 1e-9); // superset of the span
        CHECK(std::fabs(full.value - small.value) < 1e-3);
    }
}


TEST_CASE("dd solve falls back to rank-revealing on dependent sets") {
    uint64_t s = 404;
    auto c = couplingsCast<DDReal>(randomDistinct(s, 3));
    std::vector<Descriptor> full;
    for (int l = 0; l <= 3; ++l) full.push_back(Descriptor::HlZ(l)); // one exact dependency
    BoundProblem<DDReal> p;
    p.couplings = c;
    p.quantities = full;
    auto res = solveBound(p);
    CHECK(res.rank == 3);
    CHECK_FALSE(res.illConditioned);
    // matches the double route
    BoundProblem<double> pd;
    pd.couplings = couplingsCast<double>(c);
    pd.quantities = full;
    auto rd = solveBound(pd);
    CHECK(res.value == doctest::Approx(rd.value).epsilon(1e-10));
}

} // TEST_SUITE
