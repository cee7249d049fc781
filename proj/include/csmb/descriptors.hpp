#ifndef CSMB_DESCRIPTORS_HPP
#define CSMB_DESCRIPTORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace csmb {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

// Conserved quantities and observables of the central spin model, by role:
//   S0z            central spin z component (observable)
//   Bz             Overhauser field z component (observable)
//   Iz             total magnetization, conserved for every h
//   IQz            I^z * sum_{k<l} S_k.S_l, conserved at h = 0 only
//   H0Power(p)     H_0(h)^p
//   IzH0Power(p)   I^z H_0(h)^p   (p = 0 reduces to Iz)
//   IzI2H0         I^z I^2 H_0, conserved at h = 0 only
//   Hl(l)          Gaudin charge H_l(h); Hl(0) coincides with H0Power(1)
//   HlZ(l)         I^z H_l(h)
struct Descriptor {
    enum class Kind { S0z, Bz, Iz, IQz, H0Power, IzH0Power, IzI2H0, Hl, HlZ };

    Kind kind = Kind::Iz;
    int power = 0; // for H0Power / IzH0Power
    int l = 0;     // for Hl / HlZ

    static Descriptor S0z() { return {Kind::S0z, 0, 0}; }
    static Descriptor Bz() { return {Kind::Bz, 0, 0}; }
    static Descriptor Iz() { return {Kind::Iz, 0, 0}; }
    static Descriptor IQz() { return {Kind::IQz, 0, 0}; }
    static Descriptor H0Power(int p) { return {Kind::H0Power, p, 0}; }
    static Descriptor IzH0Power(int p) { return {Kind::IzH0Power, p, 0}; }
    static Descriptor IzI2H0() { return {Kind::IzI2H0, 0, 0}; }
    static Descriptor Hl(int l) { return {Kind::Hl, 0, l}; }
    static Descriptor HlZ(int l) { return {Kind::HlZ, 0, l}; }

    friend bool operator==(const Descriptor& a, const Descriptor& b) {
        return a.kind == b.kind && a.power == b.power && a.l == b.l;
    }
    friend bool operator<(const Descriptor& a, const Descriptor& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.power != b.power) return a.power < b.power;
        return a.l < b.l;
    }

    // conserved by H_0(h) at the given field?
    bool conservedAt(double h) const {
        switch (kind) {
            case Kind::S0z:
            case Kind::Bz: return false;
            case Kind::IQz:
            case Kind::IzI2H0: return h == 0.0;
            default: return true;
        }
    }

    std::string name() const {
        switch (kind) {
            case Kind::S0z: return "S0z";
            case Kind::Bz: return "Bz";
            case Kind::Iz: return "Iz";
            case Kind::IQz: return "IQz";
            case Kind::H0Power: return power == 1 ? "H0" : "H0^" + std::to_string(power);
            case Kind::IzH0Power: return power == 0 ? "Iz" : (power == 1 ? "IzH0" : "IzH0^" + std::to_string(power));
            case Kind::IzI2H0: return "IzI2H0";
            case Kind::Hl: return "H[" + std::to_string(l) + "]";
            case Kind::HlZ: return "HZ[" + std::to_string(l) + "]";
        }
        return "?";
    }
};

// Named quantity sets shipped as data; the l-indexed families need the bath
// size.
inline std::vector<Descriptor> quantitySet(const std::string& name, int bathSize) {
    using D = Descriptor;
    if (name == "iz-only") return {D::Iz()};
    if (name == "basic3") return {D::Iz(), D::IQz(), D::IzH0Power(1)};
    if (name == "plus-h03") return {D::Iz(), D::IQz(), D::IzH0Power(1), D::IzH0Power(3)};
    if (name == "all6-zero-field")
        return {D::Iz(), D::IQz(), D::IzH0Power(1), D::IzH0Power(2), D::IzH0Power(3), D::IzI2H0()};
    if (name == "h-two") return {D::IzH0Power(1), D::H0Power(1)};
    if (name == "h-six")
        return {D::H0Power(1), D::IzH0Power(1), D::H0Power(2), D::IzH0Power(2), D::H0Power(3), D::IzH0Power(3)};
    if (name == "h-seven") {
        auto v = quantitySet("h-six", bathSize);
        v.insert(v.begin(), D::Iz());
        return v;
    }
    if (name == "integrability") {
        std::vector<D> v{D::Iz()};
        for (int l = 1; l <= bathSize; ++l) v.push_back(D::HlZ(l));
        return v;
    }
    if (name == "h-integrability") {
        std::vector<D> v;
        for (int l = 0; l <= bathSize; ++l) v.push_back(D::Hl(l));
        for (int l = 0; l <= bathSize; ++l) v.push_back(D::HlZ(l));
        return v;
    }
    throw std::invalid_argument("unknown quantity set: " + name);
}

inline std::vector<std::string> quantitySetNames() {
    return {"iz-only", "basic3", "plus-h03", "all6-zero-field", "h-two", "h-six", "h-seven",
            "integrability", "h-integrability"};
}

} // namespace csmb

#endif
