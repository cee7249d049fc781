#ifndef CSMB_ED_HPP
#define CSMB_ED_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "csmb/couplings.hpp"
#include "csmb/dense.hpp"

namespace csmb {

// Exact long-time average of <S0^z(t) S0^z(0)> from full diagonalization:
// only matrix elements between degenerate eigenstates survive the infinite
// time average,
//   S_inf = (1/2^(N+1)) sum_blocks || P_b S0^z P_b ||_F^2.
// H_0(h) conserves I^z, so the spectrum decomposes into magnetization
// sectors; S0^z is sector diagonal, which keeps N = 9 instantaneous.

template <typename Real = double>
struct SectorSpectralDecomposition {
    std::vector<std::vector<uint64_t>> states; // per sector: basis bitmasks (bit N-k set = site k down)
    std::vector<Eigen::Matrix<Real, Eigen::Dynamic, 1>> eigenvalues;
    std::vector<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> eigenvectors;
    std::vector<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> hamiltonians;
};

template <typename Real = double>
SectorSpectralDecomposition<Real> sectorDiagonalize(const CouplingSet<Real>& c, Real h) {
    const int N = c.size();
    const int sites = N + 1;
    const uint64_t dim = 1ull << sites;
    SectorSpectralDecomposition<Real> out;
    out.states.assign(static_cast<size_t>(sites) + 1, {});
    for (uint64_t s = 0; s < dim; ++s)
        out.states[static_cast<size_t>(std::popcount(s))].push_back(s);

    for (const auto& basis : out.states) {
        const int d = static_cast<int>(basis.size());
        Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> H =
            Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(d, d);
        auto indexOf = [&basis](uint64_t s) {
            return static_cast<int>(std::lower_bound(basis.begin(), basis.end(), s) - basis.begin());
        };
        const uint64_t bit0 = 1ull << N;
        for (int i = 0; i < d; ++i) {
            uint64_t s = basis[static_cast<size_t>(i)];
            Real z0 = (s & bit0) ? Real(-0.5) : Real(0.5);
            Real diag = -h * z0;
            for (int k = 1; k <= N; ++k) {
                uint64_t bk = 1ull << (N - k);
                Real zk = (s & bk) ? Real(-0.5) : Real(0.5);
                diag += c[k] * z0 * zk;
                if (((s & bit0) != 0) != ((s & bk) != 0)) {
                    uint64_t t = s ^ bit0 ^ bk;
                    H(indexOf(t), i) += c[k] * Real(0.5);
                }
            }
            H(i, i) += diag;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> es(H);
        out.eigenvalues.push_back(es.eigenvalues());
        out.eigenvectors.push_back(es.eigenvectors());
        out.hamiltonians.push_back(std::move(H));
    }
    return out;
}

struct EdResult {
    double sInf = 0;
    int blocks = 0;
    bool flagged = false;     // a spectral gap fell inside the guard band of degTol
    double sInfNarrow = 0;    // grouping with threshold/10
    double sInfWide = 0;      // grouping with threshold*10
};

namespace ed_detail {

struct Level {
    double energy;
    int sector;
    int index;
};

// S_inf for one fixed grouping threshold
template <typename Real>
double sInfForThreshold(const SectorSpectralDecomposition<Real>& dec, const std::vector<Level>& levels,
                        double threshold, const CouplingSet<Real>& c, int* blockCount) {
    const int N = c.size();
    const uint64_t bit0 = 1ull << N;
    const double dim = std::ldexp(1.0, N + 1);
    double total = 0;
    int blocks = 0;
    size_t start = 0;
    while (start < levels.size()) {
        size_t end = start + 1;
        while (end < levels.size() && levels[end].energy - levels[end - 1].energy <= threshold) ++end;
        ++blocks;
        // group the block's members by sector; cross-sector elements of S0^z vanish
        std::vector<std::pair<int, int>> members;
        for (size_t i = start; i < end; ++i) members.push_back({levels[i].sector, levels[i].index});
        std::sort(members.begin(), members.end());
        size_t ms = 0;
        while (ms < members.size()) {
            size_t me = ms + 1;
            while (me < members.size() && members[me].first == members[ms].first) ++me;
            const int sector = members[ms].first;
            const auto& V = dec.eigenvectors[static_cast<size_t>(sector)];
            const auto& basis = dec.states[static_cast<size_t>(sector)];
            const int cols = static_cast<int>(me - ms);
            const int d = static_cast<int>(basis.size());
            Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> W(d, cols);
            for (int j = 0; j < cols; ++j) {
                int col = members[ms + static_cast<size_t>(j)].second;
                for (int s = 0; s < d; ++s) {
                    Real z0 = (basis[static_cast<size_t>(s)] & bit0) ? Real(-0.5) : Real(0.5);
                    W(s, j) = z0 * V(s, col);
                }
            }
            Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> M(cols, cols);
            for (int jcol = 0; jcol < cols; ++jcol)
                for (int jrow = 0; jrow < cols; ++jrow)
                    M(jrow, jcol) = V.col(members[ms + static_cast<size_t>(jrow)].second).dot(W.col(jcol));
            total += static_cast<double>(M.squaredNorm());
            ms = me;
        }
        start = end;
    }
    if (blockCount) *blockCount = blocks;
    return total / dim;
}

} // namespace ed_detail

template <typename Real>
EdResult edPersistingCorrelation(const CouplingSet<Real>& c, Real h, double degTol = 1e-10) {
    auto dec = sectorDiagonalize(c, h);
    std::vector<ed_detail::Level> levels;
    for (size_t sec = 0; sec < dec.eigenvalues.size(); ++sec)
        for (int i = 0; i < dec.eigenvalues[sec].size(); ++i)
            levels.push_back({static_cast<double>(dec.eigenvalues[sec](i)), static_cast<int>(sec), i});
    std::sort(levels.begin(), levels.end(), [](const ed_detail::Level& a, const ed_detail::Level& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.sector != b.sector) return a.sector < b.sector;
        return a.index < b.index;
    });
    double width = levels.back().energy - levels.front().energy;
    double threshold = degTol * std::max(width, 1e-300);

    EdResult res;
    res.sInf = ed_detail::sInfForThreshold(dec, levels, threshold, c, &res.blocks);

    // guard band: flag when any gap sits within a factor 10 of the threshold
    bool ambiguous = false;
    for (size_t i = 1; i < levels.size(); ++i) {
        double gap = levels[i].energy - levels[i - 1].energy;
        if (gap > threshold / 10 && gap < threshold * 10) ambiguous = true;
    }
    res.flagged = ambiguous;
    if (ambiguous) {
        res.sInfNarrow = ed_detail::sInfForThreshold(dec, levels, threshold / 10, c, nullptr);
        res.sInfWide = ed_detail::sInfForThreshold(dec, levels, threshold * 10, c, nullptr);
    } else {
        res.sInfNarrow = res.sInfWide = res.sInf;
    }
    return res;
}

// Full-space variant for arbitrary observables (no sector shortcut); used to
// cross check the sector route and for the isotropy test with S0^x.
template <typename Real>
double edPersistingCorrelationFull(const CouplingSet<Real>& c, Real h,
                                   const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>& observable,
                                   double degTol = 1e-10) {
    DenseBuilder<Real> builder(14);
    auto hop = builder.build(Descriptor::H0Power(1), c, h);
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> H = hop.entries.real();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> es(H);
    const auto& ev = es.eigenvalues();
    const auto& V = es.eigenvectors();
    const int d = static_cast<int>(ev.size());
    double width = static_cast<double>(ev(d - 1) - ev(0));
    double threshold = degTol * std::max(width, 1e-300);
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> M = V.transpose() * observable * V;
    double total = 0;
    int start = 0;
    while (start < d) {
        int end = start + 1;
        while (end < d && static_cast<double>(ev(end) - ev(end - 1)) <= threshold) ++end;
        for (int i = start; i < end; ++i)
            for (int j = start; j < end; ++j) total += static_cast<double>(M(i, j) * M(i, j));
        start = end;
    }
    return total / std::ldexp(1.0, c.size() + 1);
}

} // namespace csmb

#endif
