#ifndef CSMB_DENSE_HPP
#define CSMB_DENSE_HPP

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "csmb/couplings.hpp"
#include "csmb/descriptors.hpp"
#include "csmb/errors.hpp"

namespace csmb {

// Hermitian-matrix realization of the model operators on the full
// 2^(N+1)-dimensional Hilbert space. Deliberately built from elementary
// spin matrices and matrix arithmetic only - never from the symbolic Pauli
// engine - so the two routes stay independent oracles of each other.
//
// Basis convention: site 0 is the most significant bit, bit value 0 is spin
// up. For basis index b, site k occupies bit (N - k).

template <typename Real>
struct DenseOperator {
    using Matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
    Matrix entries;
    std::string label;
    int bathSize = 0;

    Eigen::Index dim() const { return entries.rows(); }
};

template <typename Real>
class DenseBuilder {
public:
    using Matrix = typename DenseOperator<Real>::Matrix;

    explicit DenseBuilder(int bathCap = 12) : bathCap_(bathCap) {}

    // S_k^alpha, cached per (N, k, alpha)
    const Matrix& spinMatrix(int N, int k, Axis ax) {
        auto key = std::make_tuple(N, k, static_cast<int>(ax));
        auto it = spinCache_.find(key);
        if (it != spinCache_.end()) return it->second;
        checkCap(N);
        const Eigen::Index dim = Eigen::Index(1) << (N + 1);
        Matrix m = Matrix::Zero(dim, dim);
        const uint64_t bit = 1ull << (N - k);
        const std::complex<Real> half(Real(0.5), Real(0));
        const std::complex<Real> imagHalf(Real(0), Real(0.5));
        for (Eigen::Index s = 0; s < dim; ++s) {
            const bool down = (static_cast<uint64_t>(s) & bit) != 0;
            switch (ax) {
                case Axis::X: m(s ^ bit, s) = half; break;
                case Axis::Y: m(s ^ bit, s) = down ? -imagHalf : imagHalf; break; // S^y = (S+ - S-)/2i
                case Axis::Z: m(s, s) = down ? -half : half; break;
            }
        }
        return spinCache_.emplace(key, std::move(m)).first->second;
    }

    DenseOperator<Real> build(const Descriptor& d, const CouplingSet<Real>& c, Real h) {
        const int N = c.size();
        checkCap(N);
        using K = Descriptor::Kind;
        Matrix m;
        switch (d.kind) {
            case K::S0z: m = siteZ(N, 0); break;
            case K::Bz: {
                m = zeroMatrix(N);
                for (int k = 1; k <= N; ++k) m += c[k] * siteZ(N, k);
                break;
            }
            case K::Iz: m = izMatrix(N); break;
            case K::IQz: m = izMatrix(N) * pairSum(N); break;
            case K::H0Power: m = powerOf(h0Matrix(N, c, h), d.power); break;
            case K::IzH0Power: m = izMatrix(N) * powerOf(h0Matrix(N, c, h), d.power); break;
            case K::IzI2H0: {
                Matrix i2 = Real(2) * pairSum(N);
                i2.diagonal().array() += Real(0.75) * Real(N + 1);
                m = izMatrix(N) * (i2 * h0Matrix(N, c, Real(0)));
                break;
            }
            case K::Hl: m = hlMatrix(N, c, d.l, h); break;
            case K::HlZ: m = izMatrix(N) * hlMatrix(N, c, d.l, h); break;
        }
        return DenseOperator<Real>{std::move(m), d.name(), N};
    }

    // H_0(h)^p with intermediate powers cached per (couplings, h, p)
    Matrix powerOfH0(const CouplingSet<Real>& c, Real h, int p) {
        return powerOf(h0Matrix(c.size(), c, h), p);
    }

private:
    void checkCap(int N) const {
        if (N > bathCap_)
            throw ResourceExceeded("DenseBuilder: N = " + std::to_string(N) + " exceeds cap " +
                                   std::to_string(bathCap_));
    }
    Matrix zeroMatrix(int N) const {
        const Eigen::Index dim = Eigen::Index(1) << (N + 1);
        return Matrix::Zero(dim, dim);
    }
    Matrix siteZ(int N, int k) {
        Matrix m = zeroMatrix(N);
        const uint64_t bit = 1ull << (N - k);
        for (Eigen::Index s = 0; s < m.rows(); ++s)
            m(s, s) = (static_cast<uint64_t>(s) & bit) ? Real(-0.5) : Real(0.5);
        return m;
    }
    Matrix izMatrix(int N) {
        Matrix m = zeroMatrix(N);
        for (Eigen::Index s = 0; s < m.rows(); ++s) {
            int down = std::popcount(static_cast<uint64_t>(s) & ((2ull << N) - 1));
            m(s, s) = Real(0.5) * Real(N + 1 - 2 * down);
        }
        return m;
    }
    // S_k . S_l accumulated into target with weight w
    void addSpinDot(Matrix& target, int N, int k, int l, Real w) {
        const uint64_t bk = 1ull << (N - k), bl = 1ull << (N - l);
        for (Eigen::Index s = 0; s < target.rows(); ++s) {
            const bool dk = static_cast<uint64_t>(s) & bk, dl = static_cast<uint64_t>(s) & bl;
            target(s, s) += w * (dk == dl ? Real(0.25) : Real(-0.25)); // Sz Sz
            if (dk != dl) target(s ^ bk ^ bl, s) += w * Real(0.5);      // flip-flop
        }
    }
    Matrix pairSum(int N) {
        Matrix m = zeroMatrix(N);
        for (int k = 0; k <= N; ++k)
            for (int l = k + 1; l <= N; ++l) addSpinDot(m, N, k, l, Real(1));
        return m;
    }
    Matrix h0Matrix(int N, const CouplingSet<Real>& c, Real h) {
        Matrix m = zeroMatrix(N);
        for (int k = 1; k <= N; ++k) addSpinDot(m, N, 0, k, c[k]);
        if (h != Real(0)) m -= h * siteZ(N, 0);
        return m;
    }
    Matrix hlMatrix(int N, const CouplingSet<Real>& c, int l, Real h) {
        if (l < 0 || l > N) throw std::invalid_argument("hlMatrix: l out of range");
        std::vector<Real> eps(static_cast<size_t>(N) + 1, Real(0));
        for (int k = 1; k <= N; ++k) eps[static_cast<size_t>(k)] = Real(-1) / c[k];
        Matrix m = zeroMatrix(N);
        for (int k = 0; k <= N; ++k) {
            if (k == l) continue;
            Real diff = eps[static_cast<size_t>(l)] - eps[static_cast<size_t>(k)];
            if (diff == Real(0)) throw DegenerateCouplings("hlMatrix: eps_l - eps_k vanishes");
            addSpinDot(m, N, l, k, Real(1) / diff);
        }
        if (h != Real(0)) m -= h * siteZ(N, l);
        return m;
    }
    Matrix powerOf(const Matrix& base, int p) {
        if (p < 0) throw std::invalid_argument("powerOf: negative exponent");
        Matrix r = Matrix::Identity(base.rows(), base.cols());
        for (int i = 0; i < p; ++i) r = r * base;
        return r;
    }

    int bathCap_;
    std::map<std::tuple<int, int, int>, Matrix> spinCache_;
};

// (X|Y) = Tr[X^dagger Y] / dim, the maximally mixed expectation.
template <typename Real>
std::complex<Real> denseScalarProduct(const DenseOperator<Real>& a, const DenseOperator<Real>& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("denseScalarProduct: dimension mismatch");
    std::complex<Real> sum = (a.entries.conjugate().cwiseProduct(b.entries)).sum();
    return sum / Real(a.dim());
}

template <typename Real>
Real hermitianDefect(const DenseOperator<Real>& a) {
    return (a.entries - a.entries.adjoint()).norm() / std::max<Real>(Real(1), a.entries.norm());
}

} // namespace csmb

#endif
