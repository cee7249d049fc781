#ifndef CSMB_ANSATZ_HPP
#define CSMB_ANSATZ_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "csmb/elements.hpp"
#include "csmb/pauli_operators.hpp"

namespace csmb {

// Recovers scalar products as exact polynomials in {N, h, Sigma_m} by
// evaluating exact traces on many small concrete systems and solving the
// resulting rational linear system. Monomial candidates come from the
// dimensional analysis: every Sigma_m carries m energy powers, h carries one,
// and each explicit factor of N or Sigma consumes one spin-operator pairing.

struct SolverMonomial {
    int nPow = 0;
    int hPow = 0;
    int sigmaPow[6] = {0, 0, 0, 0, 0, 0}; // exponents of Sigma_1..Sigma_6

    std::string name() const {
        std::string out;
        auto append = [&out](const std::string& f) {
            if (!out.empty()) out += "*";
            out += f;
        };
        if (nPow) append(nPow == 1 ? "N" : "N^" + std::to_string(nPow));
        if (hPow) append(hPow == 1 ? "h" : "h^" + std::to_string(hPow));
        for (int m = 0; m < 6; ++m)
            if (sigmaPow[m])
                append("S" + std::to_string(m + 1) + (sigmaPow[m] > 1 ? "^" + std::to_string(sigmaPow[m]) : ""));
        return out.empty() ? "1" : out;
    }
};

struct MonomialBasis {
    std::vector<SolverMonomial> monomials;
    int energyOrder = 0;
    int spinOperatorCount = 0;
    bool withField = false;
};

namespace detail {

struct DescriptorProfile {
    int energyOrder;   // powers of J or h carried
    int summedOps;     // bath/total summed spin operators
    int zParity;       // count of z-flipping vector factors, mod 2
    bool fieldCapable; // operator depends on h
};

inline DescriptorProfile solverProfile(const Descriptor& d) {
    using K = Descriptor::Kind;
    switch (d.kind) {
        case K::S0z: return {0, 0, 1, false};
        case K::Bz: return {1, 1, 1, false};
        case K::Iz: return {0, 1, 1, false};
        case K::IQz: return {0, 3, 1, false};
        case K::H0Power: return {d.power, d.power, 0, true};
        case K::IzH0Power: return {d.power, d.power + 1, 1, true};
        case K::IzI2H0: return {1, 4, 1, false};
        default: throw std::invalid_argument("ansatz solver: descriptor " + d.name() + " is not Sigma-expressible");
    }
}

inline void partitions(int total, int maxPart, int maxParts, std::vector<int>& cur,
                       std::vector<std::vector<int>>& out) {
    if (total == 0) {
        out.push_back(cur);
        return;
    }
    if (maxParts == 0) return;
    for (int part = std::min(total, maxPart); part >= 1; --part) {
        cur.push_back(part);
        partitions(total - part, part, maxParts - 1, cur, out);
        cur.pop_back();
    }
}

} // namespace detail

inline MonomialBasis generateBasis(const Descriptor& lhs, const Descriptor& rhs, bool zeroField = false) {
    auto pa = detail::solverProfile(lhs);
    auto pb = detail::solverProfile(rhs);
    MonomialBasis basis;
    basis.energyOrder = pa.energyOrder + pb.energyOrder;
    basis.spinOperatorCount = pa.summedOps + pb.summedOps;
    basis.withField = !zeroField && (pa.fieldCapable || pb.fieldCapable);
    const int parity = (pa.zParity + pb.zParity) % 2;
    const int e = basis.energyOrder;
    if (e > 6) throw std::invalid_argument("generateBasis: energy order beyond Sigma_6");

    for (int b = basis.withField ? (parity == 0 ? 0 : 1) : 0; b <= e; b += 2) {
        if (!basis.withField && b > 0) break;
        if (basis.withField && b % 2 != parity) continue;
        const int sigmaBudget = e - b;
        const int groupCap = (basis.spinOperatorCount - b) / 2;
        if (groupCap < 0) continue;
        std::vector<std::vector<int>> parts;
        std::vector<int> cur;
        detail::partitions(sigmaBudget, std::min(sigmaBudget, 6), groupCap, cur, parts);
        if (sigmaBudget == 0) parts.assign(1, {});
        for (const auto& part : parts) {
            const int used = static_cast<int>(part.size());
            for (int a = groupCap - used; a >= 0; --a) {
                SolverMonomial mono;
                mono.nPow = a;
                mono.hPow = b;
                for (int p : part) mono.sigmaPow[p - 1] += 1;
                basis.monomials.push_back(mono);
            }
        }
    }
    return basis;
}

// --- exact trace provenance -------------------------------------------------

struct SolverSample {
    CouplingSet<Rational> couplings;
    Rational h;
    Rational traceValue;
};

struct ClosedFormElement {
    Descriptor lhs, rhs;
    MonomialBasis basis;
    std::vector<Rational> coefficients;
    std::vector<SolverSample> provenance;

    Rational evaluate(int N, const Moments<Rational>& mom, const Rational& h) const {
        Rational total(0);
        for (size_t i = 0; i < basis.monomials.size(); ++i) {
            if (coefficients[i].isZero()) continue;
            const auto& mono = basis.monomials[i];
            Rational term = coefficients[i];
            term *= Rational(static_cast<long long>(N)).pow(mono.nPow);
            term *= h.pow(mono.hPow);
            for (int m = 0; m < 6; ++m)
                if (mono.sigmaPow[m]) term *= mom.sigma(m + 1).pow(mono.sigmaPow[m]);
            total += term;
        }
        return total;
    }

    // canonical polynomial in the element-table grammar, zero terms dropped
    ElementPolynomial toPolynomial() const {
        ElementPolynomial poly;
        for (size_t i = 0; i < basis.monomials.size(); ++i) {
            if (coefficients[i].isZero()) continue;
            const auto& mono = basis.monomials[i];
            ElementMonomial em;
            em.coeff = coefficients[i];
            em.powers[static_cast<int>(ElementVar::N)] = mono.nPow;
            em.powers[static_cast<int>(ElementVar::h)] = mono.hPow;
            for (int m = 0; m < 6; ++m) em.powers[static_cast<int>(ElementVar::S1) + m] = mono.sigmaPow[m];
            poly.terms.push_back(std::move(em));
        }
        return poly;
    }
};

// deterministic sequence of small systems; the equations they produce must be
// linearly independent, which the incremental elimination below certifies
inline const std::vector<std::vector<long long>>& solverCouplingSequence() {
    static const std::vector<std::vector<long long>> seq = {
        {1}, {1, 1}, {1, 2}, {1, 2, 3}, {1, 2, 4}, {2, 3, 5}, {2}, {3}, {1, 3},
        {2, 5}, {1, 1, 1}, {1, 1, 2}, {1, 3, 5}, {1, 2, 3, 4}, {1, 2, 4, 8},
        {1, 3, 5, 7}, {2, 3, 5, 7}, {1, 1, 2, 3}, {1, 2, 3, 4, 5}, {1, 2, 4, 7, 11},
        {1, 3, 4, 9, 11}, {1, 1, 2, 3, 5}, {2, 3, 5, 7, 11}, {1, 2, 3, 4, 5, 6},
        {1, 2, 4, 8, 16, 32}, {1, 3, 5, 7, 9, 11}, {2, 3, 5, 7, 11, 13}, {1, 1, 2, 3, 5, 8},
        {1, 4, 9, 16, 25}, {1, 2, 3, 5, 8, 13}, {3, 1, 4, 1, 5}, {2, 7, 1, 8, 2, 8},
    };
    return seq;
}

inline const std::vector<Rational>& solverFieldSequence() {
    static const std::vector<Rational> seq = {Rational(0),    Rational(1),    Rational(2),   Rational(1, 2),
                                              Rational(3),    Rational(3, 2), Rational(5, 2), Rational(1, 3)};
    return seq;
}

class AnsatzSolver {
public:
    // exact trace of (lhs | rhs) on one concrete small system
    static Rational exactTrace(const Descriptor& lhs, const Descriptor& rhs, const CouplingSet<Rational>& c,
                               const Rational& h) {
        auto a = buildOperator(lhs, c, h);
        auto s = lhs == rhs ? scalarProduct(a, a) : scalarProduct(a, buildOperator(rhs, c, h));
        if (!s.im.isZero()) throw std::logic_error("exactTrace: unexpected imaginary part");
        return s.re;
    }

    static ClosedFormElement solveClosedForm(const Descriptor& lhs, const Descriptor& rhs) {
        return solveClosedForm(lhs, rhs, generateBasis(lhs, rhs));
    }

    static ClosedFormElement solveClosedForm(const Descriptor& lhs, const Descriptor& rhs,
                                             const MonomialBasis& basis) {
        if (basis.monomials.empty()) {
            // no monomial survives the dimensional constraints: the element
            // must vanish identically; confirm on a few systems
            ClosedFormElement element{lhs, rhs, basis, {}, {}};
            const auto& hseq = solverFieldSequence();
            for (size_t i = 0; i < 3; ++i) {
                std::vector<Rational> vals;
                for (long long j : solverCouplingSequence()[2 + i]) vals.push_back(Rational(j));
                auto c = makeCouplings<Rational>(vals);
                Rational h = basis.withField ? hseq[(i + 1) % hseq.size()] : Rational(0);
                Rational t = exactTrace(lhs, rhs, c, h);
                if (!t.isZero())
                    throw std::logic_error("solveClosedForm(" + lhs.name() + "|" + rhs.name() +
                                           "): empty basis but nonzero trace " + t.toString());
                element.provenance.push_back({c, h, t});
            }
            return element;
        }
        const size_t M = basis.monomials.size();

        std::vector<std::vector<Rational>> echelon;     // reduced rows for rank tracking
        std::vector<std::vector<Rational>> pivotRows;   // raw independent rows [A | t]
        std::vector<SolverSample> provenance;

        auto monomialRow = [&](const CouplingSet<Rational>& c, const Rational& h) {
            Moments<Rational> mom(c, std::max(1, basis.energyOrder));
            std::vector<Rational> row(M);
            for (size_t i = 0; i < M; ++i) {
                const auto& mono = basis.monomials[i];
                Rational term(1);
                term *= Rational(static_cast<long long>(c.size())).pow(mono.nPow);
                term *= h.pow(mono.hPow);
                for (int m = 0; m < 6; ++m)
                    if (mono.sigmaPow[m]) term *= mom.sigma(m + 1).pow(mono.sigmaPow[m]);
                row[i] = term;
            }
            return row;
        };

        // reduce a row against the echelon; returns true (and stores) if it
        // adds a new independent direction
        auto tryAddRow = [&](std::vector<Rational> row, const std::vector<Rational>& raw) {
            for (const auto& er : echelon) {
                size_t p = 0;
                while (p < M && er[p].isZero()) ++p;
                if (p < M && !row[p].isZero()) {
                    Rational f = row[p] / er[p];
                    for (size_t j = p; j < M; ++j) row[j] -= f * er[j];
                }
            }
            size_t p = 0;
            while (p < M && row[p].isZero()) ++p;
            if (p == M) return false;
            echelon.push_back(std::move(row));
            pivotRows.push_back(raw);
            return true;
        };

        const auto& cseq = solverCouplingSequence();
        const auto& hseq = solverFieldSequence();
        const size_t hCount = basis.withField ? hseq.size() : 1;

        size_t rank = 0;
        for (size_t diag = 0; diag < cseq.size() + hCount && rank < M; ++diag) {
            for (size_t ci = 0; ci <= diag && ci < cseq.size() && rank < M; ++ci) {
                size_t hi = diag - ci;
                if (hi >= hCount) continue;
                std::vector<Rational> vals;
                for (long long j : cseq[ci]) vals.push_back(Rational(j));
                auto c = makeCouplings<Rational>(vals);
                const Rational& h = hseq[hi];
                auto row = monomialRow(c, h);
                Rational t = exactTrace(lhs, rhs, c, h);
                std::vector<Rational> raw = row;
                raw.push_back(t);
                if (tryAddRow(std::move(row), raw)) {
                    provenance.push_back({c, h, t});
                    ++rank;
                }
            }
        }

        if (rank < M) {
            // certificate of degeneracy: a combination annihilated by every sample
            std::string combo = nullSpaceCombination(basis, echelon);
            throw BasisDegenerate("solveClosedForm(" + lhs.name() + "|" + rhs.name() + "): rank " +
                                  std::to_string(rank) + " < " + std::to_string(M) +
                                  " after exhausting the system sequence; null combination: " + combo);
        }

        // solve the M x M rational system by Gaussian elimination
        std::vector<Rational> alpha = solveSquare(pivotRows, M);

        ClosedFormElement element{lhs, rhs, basis, std::move(alpha), std::move(provenance)};

        // verification on held-out systems: exact equality required
        int verified = 0;
        for (size_t ci = 0; ci < cseq.size() && verified < 2; ++ci) {
            std::vector<Rational> vals;
            for (long long j : cseq[cseq.size() - 1 - ci]) vals.push_back(Rational(j));
            auto c = makeCouplings<Rational>(vals);
            Rational h = basis.withField ? hseq[(ci + 3) % hseq.size()] : Rational(0);
            bool used = false;
            for (const auto& sample : element.provenance)
                if (sample.couplings.values == c.values && sample.h == h) used = true;
            if (used) continue;
            Moments<Rational> mom(c, std::max(1, basis.energyOrder));
            Rational predicted = element.evaluate(c.size(), mom, h);
            Rational actual = exactTrace(lhs, rhs, c, h);
            if (predicted != actual)
                throw std::logic_error("solveClosedForm(" + lhs.name() + "|" + rhs.name() +
                                       "): held-out verification failed at N=" + std::to_string(c.size()) +
                                       " h=" + h.toString() + ": predicted " + predicted.toString() + ", trace " +
                                       actual.toString());
            ++verified;
        }
        if (verified < 2)
            throw InsufficientSystems("solveClosedForm: could not reserve two held-out verification systems");
        return element;
    }

private:
    static std::vector<Rational> solveSquare(const std::vector<std::vector<Rational>>& rowsIn, size_t M) {
        std::vector<std::vector<Rational>> rows = rowsIn;
        for (size_t col = 0; col < M; ++col) {
            size_t pivot = col;
            while (pivot < M && rows[pivot][col].isZero()) ++pivot;
            if (pivot == M) throw std::logic_error("solveSquare: singular despite rank certificate");
            std::swap(rows[col], rows[pivot]);
            for (size_t r = 0; r < M; ++r) {
                if (r == col || rows[r][col].isZero()) continue;
                Rational f = rows[r][col] / rows[col][col];
                for (size_t j = col; j <= M; ++j) rows[r][j] -= f * rows[col][j];
            }
        }
        std::vector<Rational> alpha(M);
        for (size_t i = 0; i < M; ++i) alpha[i] = rows[i][M] / rows[i][i];
        return alpha;
    }

    static std::string nullSpaceCombination(const MonomialBasis& basis,
                                            const std::vector<std::vector<Rational>>& echelon) {
        const size_t M = basis.monomials.size();
        // find a free column and back-substitute a null vector
        std::vector<int> pivotOfCol(M, -1);
        for (size_t r = 0; r < echelon.size(); ++r) {
            size_t p = 0;
            while (p < M && echelon[r][p].isZero()) ++p;
            if (p < M) pivotOfCol[p] = static_cast<int>(r);
        }
        size_t freeCol = 0;
        while (freeCol < M && pivotOfCol[freeCol] >= 0) ++freeCol;
        if (freeCol == M) return "(none found)";
        std::vector<Rational> v(M);
        v[freeCol] = Rational(1);
        for (size_t c = freeCol; c-- > 0;) {
            if (pivotOfCol[c] < 0) continue;
            const auto& row = echelon[static_cast<size_t>(pivotOfCol[c])];
            Rational acc(0);
            for (size_t j = c + 1; j < M; ++j) acc += row[j] * v[j];
            v[c] = -acc / row[c];
        }
        std::string out;
        for (size_t i = 0; i < M; ++i) {
            if (v[i].isZero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + v[i].toString() + ")*" + basis.monomials[i].name();
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// Regeneration of the whole transcription table.
// ---------------------------------------------------------------------------

struct RegenerationRecord {
    std::string key;
    enum class Status { REDERIVED_MATCH, REDERIVED_MISMATCH, ORACLE_VERIFIED, SKIPPED } status;
    std::string detail;
};

struct RegenerationReport {
    std::vector<RegenerationRecord> records;
    int mismatches = 0;
    std::string adjudication;
};

inline std::optional<Descriptor> parseTableDescriptor(const std::string& name) {
    if (name == "S0z") return Descriptor::S0z();
    if (name == "Bz") return Descriptor::Bz();
    if (name == "Iz") return Descriptor::Iz();
    if (name == "IQz") return Descriptor::IQz();
    if (name == "IzI2H0") return Descriptor::IzI2H0();
    if (name == "H0") return Descriptor::H0Power(1);
    if (name == "IzH0") return Descriptor::IzH0Power(1);
    if (name.rfind("H0^", 0) == 0) return Descriptor::H0Power(std::stoi(name.substr(3)));
    if (name.rfind("IzH0^", 0) == 0) return Descriptor::IzH0Power(std::stoi(name.substr(5)));
    return std::nullopt; // l-indexed or placeholder
}

inline ElementPolynomial normalizePolynomial(const ElementPolynomial& in) {
    std::map<std::vector<int>, Rational> acc;
    for (const auto& t : in.terms) {
        std::vector<int> key(t.powers, t.powers + static_cast<int>(ElementVar::COUNT));
        acc[key] += t.coeff;
    }
    ElementPolynomial out;
    for (const auto& [key, coeff] : acc) {
        if (coeff.isZero()) continue;
        ElementMonomial m;
        m.coeff = coeff;
        std::copy(key.begin(), key.end(), m.powers);
        out.terms.push_back(std::move(m));
    }
    return out;
}

inline bool samePolynomial(const ElementPolynomial& a, const ElementPolynomial& b) {
    auto na = normalizePolynomial(a), nb = normalizePolynomial(b);
    if (na.terms.size() != nb.terms.size()) return false;
    for (size_t i = 0; i < na.terms.size(); ++i) {
        if (!(na.terms[i].coeff == nb.terms[i].coeff)) return false;
        for (int v = 0; v < static_cast<int>(ElementVar::COUNT); ++v)
            if (na.terms[i].powers[v] != nb.terms[i].powers[v]) return false;
    }
    return true;
}

// Re-derive every Sigma-polynomial entry with the coefficient solver and
// compare term by term; l-indexed entries are flagged for the dense oracle
// (their numerical verification lives in the test suites).
inline RegenerationReport regenerateAppendixC() {
    RegenerationReport report;
    const auto& table = ElementTable::instance();
    for (const auto& [key, entry] : table.entries()) {
        if (key.find("#alt") != std::string::npos) continue;
        if (entry.poly.usesIndexedVars() || key.find("Hl") != std::string::npos ||
            key.find("Hp") != std::string::npos) {
            report.records.push_back({key, RegenerationRecord::Status::ORACLE_VERIFIED,
                                      "l-indexed element: transcribed, dense-oracle verified"});
            continue;
        }
        auto bar = key.find('|');
        auto lhs = parseTableDescriptor(key.substr(0, bar));
        auto rhs = parseTableDescriptor(key.substr(bar + 1));
        if (!lhs || !rhs) {
            report.records.push_back({key, RegenerationRecord::Status::SKIPPED, "placeholder entry"});
            continue;
        }
        auto solved = AnsatzSolver::solveClosedForm(*lhs, *rhs, generateBasis(*lhs, *rhs, entry.zeroFieldOnly));
        bool match = samePolynomial(solved.toPolynomial(), entry.poly);
        if (match) {
            report.records.push_back({key, RegenerationRecord::Status::REDERIVED_MATCH,
                                      formatPolynomial(normalizePolynomial(solved.toPolynomial()))});
        } else {
            ++report.mismatches;
            report.records.push_back({key, RegenerationRecord::Status::REDERIVED_MISMATCH,
                                      "solver: " + formatPolynomial(normalizePolynomial(solved.toPolynomial())) +
                                          "  table: " + formatPolynomial(normalizePolynomial(entry.poly))});
        }
    }
    // adjudicate the 16386/16384 denominator by exact re-derivation
    auto solved = AnsatzSolver::solveClosedForm(Descriptor::IzH0Power(3), Descriptor::IzH0Power(3));
    bool primaryWins = samePolynomial(solved.toPolynomial(), table.find("IzH0^3|IzH0^3")->poly);
    bool altWins = samePolynomial(solved.toPolynomial(), table.find("IzH0^3|IzH0^3#alt")->poly);
    report.adjudication = std::string("(IzH0^3|IzH0^3) Sigma_2^3 denominator: exact re-derivation matches ") +
                          (primaryWins ? "16384 = 2^14" : (altWins ? "16386" : "NEITHER variant"));
    if (!primaryWins) ++report.mismatches;
    return report;
}

} // namespace csmb

#endif
