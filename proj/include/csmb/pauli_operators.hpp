#ifndef CSMB_PAULI_OPERATORS_HPP
#define CSMB_PAULI_OPERATORS_HPP

#include "csmb/couplings.hpp"
#include "csmb/descriptors.hpp"
#include "csmb/pauli.hpp"

namespace csmb {

// Symbolic construction of the model operators on N+1 sites (site 0 is the
// central spin). Couplings and field are exact rationals, so every trace and
// scalar product downstream is exact.

inline PauliExpression spinVectorDot(int sites, int k, int l) {
    // S_k . S_l
    PauliExpression r(sites);
    for (Axis ax : {Axis::X, Axis::Y, Axis::Z})
        r += multiply(PauliExpression::spinOp(sites, k, ax), PauliExpression::spinOp(sites, l, ax));
    return r;
}

inline PauliExpression buildIz(int sites) {
    PauliExpression r(sites);
    for (int j = 0; j < sites; ++j) r += PauliExpression::spinOp(sites, j, Axis::Z);
    return r;
}

inline PauliExpression buildBz(const CouplingSet<Rational>& c) {
    const int sites = c.size() + 1;
    PauliExpression r(sites);
    for (int k = 1; k <= c.size(); ++k)
        r += PauliExpression::spinOp(sites, k, Axis::Z).scaled(GaussianRational(c[k]));
    return r;
}

// B^alpha = sum_k J_k S_k^alpha
inline PauliExpression buildBComponent(const CouplingSet<Rational>& c, Axis ax) {
    const int sites = c.size() + 1;
    PauliExpression r(sites);
    for (int k = 1; k <= c.size(); ++k)
        r += PauliExpression::spinOp(sites, k, ax).scaled(GaussianRational(c[k]));
    return r;
}

inline PauliExpression buildISquared(int sites) {
    PauliExpression r(sites);
    for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
        PauliExpression comp(sites);
        for (int j = 0; j < sites; ++j) comp += PauliExpression::spinOp(sites, j, ax);
        r += multiply(comp, comp);
    }
    return r;
}

// sum_{k<l} S_k . S_l over all N+1 sites
inline PauliExpression buildPairSum(int sites) {
    PauliExpression r(sites);
    for (int k = 0; k < sites; ++k)
        for (int l = k + 1; l < sites; ++l) r += spinVectorDot(sites, k, l);
    return r;
}

// H_l(h) = sum_{k != l} S_l . S_k / (eps_l - eps_k) - h S_l^z, with
// eps_0 = 0, eps_k = -1/J_k; l = 0 gives H_0(h).
inline PauliExpression buildHl(const CouplingSet<Rational>& c, int l, const Rational& h) {
    const int N = c.size();
    const int sites = N + 1;
    if (l < 0 || l > N) throw std::invalid_argument("buildHl: l out of range");
    std::vector<Rational> eps(static_cast<size_t>(N) + 1);
    eps[0] = Rational(0);
    for (int k = 1; k <= N; ++k) eps[static_cast<size_t>(k)] = -(Rational(1) / c[k]);
    PauliExpression r(sites);
    for (int k = 0; k <= N; ++k) {
        if (k == l) continue;
        Rational diff = eps[static_cast<size_t>(l)] - eps[static_cast<size_t>(k)];
        if (diff.isZero()) throw DegenerateCouplings("buildHl: eps_l - eps_k vanishes");
        r += spinVectorDot(sites, l, k).scaled(GaussianRational(Rational(1) / diff));
    }
    if (!h.isZero()) r -= PauliExpression::spinOp(sites, l, Axis::Z).scaled(GaussianRational(h));
    return r;
}

inline PauliExpression buildOperator(const Descriptor& d, const CouplingSet<Rational>& c, const Rational& h) {
    const int sites = c.size() + 1;
    using K = Descriptor::Kind;
    switch (d.kind) {
        case K::S0z: return PauliExpression::spinOp(sites, 0, Axis::Z);
        case K::Bz: return buildBz(c);
        case K::Iz: return buildIz(sites);
        case K::IQz: return multiply(buildIz(sites), buildPairSum(sites));
        case K::H0Power: return power(buildHl(c, 0, h), d.power);
        case K::IzH0Power: return multiply(buildIz(sites), power(buildHl(c, 0, h), d.power));
        case K::IzI2H0:
            return multiply(buildIz(sites), buildISquared(sites), buildHl(c, 0, Rational(0)));
        case K::Hl: return buildHl(c, d.l, h);
        case K::HlZ: return multiply(buildIz(sites), buildHl(c, d.l, h));
    }
    throw std::invalid_argument("buildOperator: unhandled descriptor");
}

} // namespace csmb

#endif
