// csmb - rigorous Mazur-type lower bounds for persisting correlations of the
// isotropic central spin model. Subcommands wrap the library operations;
// every run is deterministic given its flags.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "csmb/ansatz.hpp"
#include "csmb/bound.hpp"
#include "csmb/ed.hpp"
#include "csmb/fitting.hpp"
#include "csmb/gauss.hpp"

using nlohmann::json;
using namespace csmb;

namespace {

struct CommonModel {
    int N = 0;
    double x = -1;
    std::vector<double> couplingList;
    std::string couplingFile;
    std::string norm = "sigma2";
    double h = 0;
};

void addModelFlags(CLI::App* cmd, CommonModel& m, bool needH) {
    cmd->add_option("--N", m.N, "bath size (exponential couplings)");
    cmd->add_option("--x", m.x, "spread x of the exponential couplings");
    cmd->add_option("--J", m.couplingList, "explicit couplings J_1..J_N")->delimiter(',');
    cmd->add_option("--couplings-file", m.couplingFile, "coupling set file (one value per line)");
    cmd->add_option("--norm", m.norm, "normalization: raw | sigma2")->check(CLI::IsMember({"raw", "sigma2"}));
    if (needH) cmd->add_option("--h", m.h, "magnetic field on the central spin (units of J_Q when sigma2)");
}

template <typename Real>
CouplingSet<Real> buildCouplings(const CommonModel& m) {
    if (!m.couplingFile.empty()) {
        std::ifstream in(m.couplingFile);
        if (!in) throw CLI::ValidationError("--couplings-file", "cannot open " + m.couplingFile);
        auto cd = readCouplings<double>(in);
        return couplingsCast<Real>(cd);
    }
    if (!m.couplingList.empty()) {
        std::vector<Real> v;
        for (double j : m.couplingList) v.push_back(ScalarTraits<Real>::fromDouble(j));
        return makeCouplings<Real>(v);
    }
    if (m.N <= 0 || m.x < 0)
        throw CLI::ValidationError("--N/--x", "need either --J, --couplings-file, or both --N and --x");
    return exponentialCouplings<Real>(m.N, m.x,
                                      m.norm == "raw" ? Normalization::RAW : Normalization::SIGMA2_UNIT);
}

std::vector<Descriptor> resolveQuantities(const std::string& set, const std::vector<std::string>& names, int N) {
    if (!set.empty()) return quantitySet(set, N);
    if (names.empty()) throw CLI::ValidationError("--set", "need --set or --quantity");
    std::vector<Descriptor> out;
    for (const auto& name : names) {
        auto d = parseTableDescriptor(name);
        if (!d) throw CLI::ValidationError("--quantity", "unknown quantity " + name);
        out.push_back(*d);
    }
    return out;
}

void emit(const std::string& text, const std::string& outPath) {
    if (outPath.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(outPath);
    if (!out) throw CLI::ValidationError("--out", "cannot open " + outPath);
    out << text;
}

json boundRecord(const std::string& target, const std::string& setName, int N, double x, double h,
                 const BoundResult& res) {
    return json{{"target", target}, {"quantities", setName}, {"N", N},
                {"x", x},           {"h", h},                {"backend", res.backend},
                {"value", res.value}, {"rank", res.rank},    {"residual", res.residual},
                {"flags", res.flags()}};
}

template <typename Real>
BoundResult runBound(const CommonModel& m, const std::string& target, const std::vector<Descriptor>& qs,
                     const std::string& backend, bool bb) {
    BoundProblem<Real> p;
    p.couplings = buildCouplings<Real>(m);
    p.h = ScalarTraits<Real>::fromDouble(m.h);
    p.quantities = qs;
    p.backend = backend == "dense" ? Backend::DENSE : (backend == "symbolic" ? Backend::SYMBOLIC : Backend::TABLES);
    if (bb) {
        p.target = Descriptor::Bz();
        return fieldFieldBound(p);
    }
    p.target = target == "bz" ? Descriptor::Bz() : Descriptor::S0z();
    return solveBound(p);
}

std::vector<double> parseSweep(const std::string& spec) {
    // "a,b,c" or geometric "start:end:*factor"
    std::vector<double> out;
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        auto second = spec.find(':', colon + 1);
        if (second == std::string::npos) throw CLI::ValidationError("sweep", "range is start:end:*factor");
        double start = std::stod(spec.substr(0, colon));
        double end = std::stod(spec.substr(colon + 1, second - colon - 1));
        std::string step = spec.substr(second + 1);
        if (step.empty() || step[0] != '*') throw CLI::ValidationError("sweep", "range needs *factor step");
        double factor = std::stod(step.substr(1));
        for (double v = start; v <= end * (1 + 1e-12); v *= factor) out.push_back(v);
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}


// Expand `--config file` into command-line tokens: the file holds flat
// key=value lines mirroring the subcommand's long options. Unknown keys then
// fail in the regular parser, and a parsed run is reproducible from the file.
std::vector<std::string> expandConfigArgs(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] != "--config") continue;
        if (i + 1 >= args.size()) throw std::runtime_error("--config needs a file path");
        std::ifstream in(args[i + 1]);
        if (!in) throw std::runtime_error("cannot open config file " + args[i + 1]);
        std::vector<std::string> expanded;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw std::runtime_error("config line without '=': " + line);
            expanded.push_back("--" + line.substr(0, eq));
            expanded.push_back(line.substr(eq + 1));
        }
        args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
        args.insert(args.begin() + static_cast<long>(i), expanded.begin(), expanded.end());
        --i;
    }
    return args;
}


} // namespace

int main(int argc, char** argv) {
    CLI::App app{"central spin model: Mazur lower bounds for persisting correlations"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");

    // ---- bound ----
    auto* cmdBound = app.add_subcommand("bound", "single Mazur bound; prints a JSON record");
    cmdBound->set_help_flag("--help", "print help");
    CommonModel bm;
    std::string bTarget = "s0z", bSet, bBackend = "tables", bPrecision = "double", bOut;
    std::vector<std::string> bQuantities;
    bool bBB = false;
    addModelFlags(cmdBound, bm, true);
    cmdBound->add_option("--target", bTarget, "s0z | bz")->check(CLI::IsMember({"s0z", "bz"}));
    cmdBound->add_option("--set", bSet, "named quantity set");
    cmdBound->add_option("--quantity", bQuantities, "explicit quantity names")->delimiter(',');
    cmdBound->add_option("--backend", bBackend, "tables | dense | symbolic")
        ->check(CLI::IsMember({"tables", "dense", "symbolic"}));
    cmdBound->add_option("--precision", bPrecision, "double | longdouble | dd")
        ->check(CLI::IsMember({"double", "longdouble", "dd"}));
    cmdBound->add_flag("--bb", bBB, "field-field (BB) estimate: project B^z and divide by 12 S^B(0)");
    cmdBound->add_option("--out", bOut, "output path (default stdout)");

    // ---- scan ----
    auto* cmdScan = app.add_subcommand("scan", "sweep N, x, or h; emits CSV rows");
    cmdScan->set_help_flag("--help", "print help");
    CommonModel sm;
    std::string sTarget = "s0z", sSet = "basic3", sBackend = "tables", sPrecision = "double", sOut;
    std::string sweepN, sweepX, sweepH;
    bool sBB = false;
    addModelFlags(cmdScan, sm, true);
    cmdScan->add_option("--target", sTarget, "s0z | bz")->check(CLI::IsMember({"s0z", "bz"}));
    cmdScan->add_option("--set", sSet, "named quantity set");
    cmdScan->add_option("--N-sweep", sweepN, "N values: a,b,c or start:end:*factor");
    cmdScan->add_option("--x-sweep", sweepX, "x values");
    cmdScan->add_option("--h-sweep", sweepH, "h values");
    cmdScan->add_option("--backend", sBackend)->check(CLI::IsMember({"tables", "dense", "symbolic"}));
    cmdScan->add_option("--precision", sPrecision)->check(CLI::IsMember({"double", "longdouble", "dd"}));
    cmdScan->add_flag("--bb", sBB, "field-field (BB) estimate");
    cmdScan->add_option("--out", sOut, "output path (default stdout)");

    // ---- extrapolate ----
    auto* cmdExtrap = app.add_subcommand("extrapolate", "1/N polynomial extrapolation of an N,value CSV");
    cmdExtrap->set_help_flag("--help", "print help");
    std::string eIn, eOut;
    double eX = 0;
    cmdExtrap->add_option("--in", eIn, "input CSV: N,value")->required();
    cmdExtrap->add_option("--x", eX, "spread of the series (sets the N >= 8x filter and the degree)");
    cmdExtrap->add_option("--out", eOut);

    // ---- fit-log ----
    auto* cmdFitLog = app.add_subcommand("fit-log", "fit A ln(x/B)/x to an x,S CSV");
    cmdFitLog->set_help_flag("--help", "print help");
    std::string fIn, fOut;
    double fStart = 6, fEnd = 64;
    cmdFitLog->add_option("--in", fIn, "input CSV: x,S")->required();
    cmdFitLog->add_option("--xstart", fStart);
    cmdFitLog->add_option("--xend", fEnd);
    cmdFitLog->add_option("--out", fOut);

    // ---- solve-elements ----
    auto* cmdSolve = app.add_subcommand("solve-elements", "derive closed forms with the coefficient solver");
    cmdSolve->set_help_flag("--help", "print help");
    std::string seLhs, seRhs, seExport, seOut;
    bool seZeroField = false;
    cmdSolve->add_option("--lhs", seLhs, "left operator (e.g. S0z, Iz, IzH0^2, Bz)");
    cmdSolve->add_option("--rhs", seRhs, "right operator");
    cmdSolve->add_flag("--zero-field", seZeroField, "solve the h = 0 form");
    cmdSolve->add_option("--export-table", seExport, "write the shipped element table to a file");
    cmdSolve->add_option("--out", seOut);

    // ---- regenerate-appendix-c ----
    auto* cmdRegen = app.add_subcommand("regenerate-appendix-c",
                                        "re-derive every Sigma-polynomial element and report mismatches");
    cmdRegen->set_help_flag("--help", "print help");
    std::string rOut;
    cmdRegen->add_option("--out", rOut);

    // ---- ed ----
    auto* cmdEd = app.add_subcommand("ed", "exact-diagonalization persisting correlation");
    cmdEd->set_help_flag("--help", "print help");
    CommonModel em;
    std::string edOut;
    double edTol = 1e-10;
    addModelFlags(cmdEd, em, true);
    cmdEd->add_option("--deg-tol", edTol, "relative degeneracy tolerance");
    cmdEd->add_option("--out", edOut);

    // ---- gaussian-check ----
    auto* cmdGauss = app.add_subcommand("gaussian-check", "Monte Carlo validation of the Gaussian moments");
    cmdGauss->set_help_flag("--help", "print help");
    CommonModel gm;
    int gMMax = 4;
    long long gSamples = 1000000;
    uint64_t gSeed = 20240817;
    std::string gOut;
    addModelFlags(cmdGauss, gm, false);
    cmdGauss->add_option("--mmax", gMMax, "largest moment order");
    cmdGauss->add_option("--samples", gSamples);
    cmdGauss->add_option("--seed", gSeed);
    cmdGauss->add_option("--out", gOut);

    // ---- gaussian-bound ----
    auto* cmdGB = app.add_subcommand("gaussian-bound", "leading-order bound from {IzH0, ..., IzH0^(2m-1)}");
    cmdGB->set_help_flag("--help", "print help");
    CommonModel gbm;
    int gbMMax = 20;
    std::string gbOut;
    addModelFlags(cmdGB, gbm, false);
    cmdGB->add_option("--mmax", gbMMax);
    cmdGB->add_option("--out", gbOut);

    try {
        std::vector<std::string> args = expandConfigArgs(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (cmdBound->parsed()) {
            auto c = buildCouplings<double>(bm);
            auto qs = resolveQuantities(bSet, bQuantities, c.size());
            BoundResult res;
            if (bPrecision == "dd") res = runBound<DDReal>(bm, bTarget, qs, bBackend, bBB);
            else if (bPrecision == "longdouble") res = runBound<long double>(bm, bTarget, qs, bBackend, bBB);
            else res = runBound<double>(bm, bTarget, qs, bBackend, bBB);
            json rec = boundRecord(bBB ? "bb" : bTarget, bSet.empty() ? "custom" : bSet, c.size(),
                                   bm.x, bm.h, res);
            emit(rec.dump(2) + "\n", bOut);
            return res.illConditioned ? 2 : 0;
        }

        if (cmdScan->parsed()) {
            std::vector<double> Ns = sweepN.empty() ? std::vector<double>{} : parseSweep(sweepN);
            std::vector<double> Xs = sweepX.empty() ? std::vector<double>{} : parseSweep(sweepX);
            std::vector<double> Hs = sweepH.empty() ? std::vector<double>{} : parseSweep(sweepH);
            if (Ns.empty()) Ns = {static_cast<double>(sm.N)};
            if (Xs.empty()) Xs = {sm.x};
            if (Hs.empty()) Hs = {sm.h};
            std::ostringstream rows;
            rows << "N,x,h,set,value,rank,residual,flags\n";
            bool anyIll = false;
            for (double xv : Xs) {
                for (double nv : Ns) {
                    for (double hv : Hs) {
                        CommonModel local = sm;
                        local.N = static_cast<int>(nv);
                        local.x = xv;
                        local.h = hv;
                        auto qs = quantitySet(sSet, local.N);
                        BoundResult res;
                        if (sPrecision == "dd") res = runBound<DDReal>(local, sTarget, qs, sBackend, sBB);
                        else if (sPrecision == "longdouble")
                            res = runBound<long double>(local, sTarget, qs, sBackend, sBB);
                        else res = runBound<double>(local, sTarget, qs, sBackend, sBB);
                        anyIll = anyIll || res.illConditioned;
                        std::string flags = res.flags();
                        // points below the N >= 8x density threshold are kept
                        // but tagged: extrapolations must not use them
                        if (xv > 0 && local.N < 8 * xv)
                            flags += std::string(flags.empty() ? "" : "|") + "FILTERED";
                        char buf[256];
                        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%s,%.17g,%d,%.3e,%s\n", local.N, xv, hv,
                                      sSet.c_str(), res.value, res.rank, res.residual, flags.c_str());
                        rows << buf;
                    }
                }
            }
            emit(rows.str(), sOut);
            return anyIll ? 2 : 0;
        }

        if (cmdExtrap->parsed()) {
            std::ifstream in(eIn);
            if (!in) throw CLI::ValidationError("--in", "cannot open " + eIn);
            auto pts = readCsvPairs(in);
            Series s;
            s.x = eX;
            for (const auto& [n, v] : pts) s.points.push_back({static_cast<long long>(n), v});
            auto fit = extrapolateInvN(s);
            json rec{{"intercept", fit.intercept},
                     {"intercept_sigma", fit.interceptUncertainty},
                     {"degree", static_cast<int>(fit.coefficients.size()) - 1},
                     {"degree_sensitivity", fit.degreeSensitivity},
                     {"points_used", fit.pointsUsed},
                     {"residual_norm", fit.residualNorm},
                     {"coefficients", fit.coefficients},
                     {"uncertainties", fit.uncertainties}};
            emit(rec.dump(2) + "\n", eOut);
            return 0;
        }

        if (cmdFitLog->parsed()) {
            std::ifstream in(fIn);
            if (!in) throw CLI::ValidationError("--in", "cannot open " + fIn);
            auto pts = readCsvPairs(in);
            auto fit = fitLogOverX(pts, fStart, fEnd);
            json rec{{"A", fit.a}, {"A_sigma", fit.aErr}, {"B", fit.b}, {"B_sigma", fit.bErr},
                     {"points_used", fit.pointsUsed}, {"residual_norm", fit.residualNorm},
                     {"xstart", fStart}, {"xend", fEnd}};
            emit(rec.dump(2) + "\n", fOut);
            return 0;
        }

        if (cmdSolve->parsed()) {
            if (!seExport.empty()) {
                std::ofstream out(seExport);
                if (!out) throw CLI::ValidationError("--export-table", "cannot open " + seExport);
                ElementTable::instance().write(out);
                std::cout << "wrote " << seExport << " (" << elementTableVersion() << ")\n";
                return 0;
            }
            auto lhs = parseTableDescriptor(seLhs);
            auto rhs = parseTableDescriptor(seRhs);
            if (!lhs || !rhs) throw CLI::ValidationError("--lhs/--rhs", "unknown operator name");
            auto solved = AnsatzSolver::solveClosedForm(*lhs, *rhs, generateBasis(*lhs, *rhs, seZeroField));
            std::ostringstream os;
            os << seLhs << " " << seRhs << " : " << formatPolynomial(normalizePolynomial(solved.toPolynomial()))
               << "\n";
            emit(os.str(), seOut);
            return 0;
        }

        if (cmdRegen->parsed()) {
            auto report = regenerateAppendixC();
            std::ostringstream os;
            for (const auto& rec : report.records) {
                const char* status = rec.status == RegenerationRecord::Status::REDERIVED_MATCH ? "match"
                                     : rec.status == RegenerationRecord::Status::REDERIVED_MISMATCH ? "MISMATCH"
                                     : rec.status == RegenerationRecord::Status::ORACLE_VERIFIED ? "oracle"
                                                                                                 : "skipped";
                os << status << "  " << rec.key << "  " << rec.detail << "\n";
            }
            os << "adjudication: " << report.adjudication << "\n";
            os << "mismatches: " << report.mismatches << "\n";
            emit(os.str(), rOut);
            return report.mismatches == 0 ? 0 : 1;
        }

        if (cmdEd->parsed()) {
            auto c = buildCouplings<double>(em);
            auto res = edPersistingCorrelation(c, em.h, edTol);
            std::size_t hash = 0;
            for (double j : c.values) hash = hash * 1099511628211ull + std::hash<double>{}(j);
            json rec{{"N", c.size()},
                     {"x", em.x},
                     {"couplings_hash", hash},
                     {"h", em.h},
                     {"S_inf", res.sInf},
                     {"blocks", res.blocks},
                     {"flagged", res.flagged}};
            if (res.flagged) {
                rec["S_inf_narrow"] = res.sInfNarrow;
                rec["S_inf_wide"] = res.sInfWide;
            }
            emit(rec.dump(2) + "\n", edOut);
            return 0;
        }

        if (cmdGauss->parsed()) {
            auto c = buildCouplings<double>(gm);
            auto g = gaussianModel(c);
            std::ostringstream os;
            bool ok = true;
            os << "m,analytic,mc_mean,mc_se,pull\n";
            for (int m = 0; m <= gMMax; ++m) {
                auto mc = monteCarloMoment(m, g, gSamples, gSeed + static_cast<uint64_t>(m));
                double want = analyticMoment(m, g);
                double pull = mc.standardError > 0 ? (mc.mean - want) / mc.standardError : 0.0;
                ok = ok && std::fabs(pull) < 4.0;
                char buf[160];
                std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.3g,%.2f\n", m, want, mc.mean,
                              mc.standardError, pull);
                os << buf;
            }
            os << (ok ? "all moments within 4 standard errors\n" : "MONTE CARLO DISAGREEMENT\n");
            emit(os.str(), gOut);
            return ok ? 0 : 1;
        }

        if (cmdGB->parsed()) {
            auto c = buildCouplings<double>(gbm);
            auto res = gaussianAsymptoticBound(c, gbMMax);
            std::ostringstream os;
            os << "m,value\n";
            for (size_t i = 0; i < res.values.size(); ++i) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%zu,%.15g\n", i + 1, res.values[i]);
                os << buf;
            }
            emit(os.str(), gbOut);
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
