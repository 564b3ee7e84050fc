#pragma once

// Command implementations behind the darlington executable. Each command reads
// a problem file and returns a report with a text rendering, a JSON block and
// an exit code: 0 all certificates pass, 1 a certificate fails, 2 the input is
// malformed or invalid, 3 a computation stage fails.

#include "io.hpp"
#include "realcase.hpp"
#include "reduction.hpp"

#include <cstdlib>
#include <iomanip>
#include <sstream>

namespace darlington {

enum ExitCode : int { exit_ok = 0, exit_certificate = 1, exit_input = 2, exit_stage = 3 };

struct CommandOptions {
    std::string mode = "inner";     // inner | symmetric | minimal-symmetric
    std::string solution = "min";   // min | max
    std::optional<double> mobius;   // omega0
    std::optional<double> tol;      // certificate tolerance
    std::optional<std::string> out; // result file
};

struct Report {
    json data = json::object();
    std::vector<std::string> lines;
    int exit_code = exit_ok;

    [[nodiscard]] std::string text() const {
        std::string s;
        for (const auto& l : lines) s += l + "\n";
        return s;
    }
    void line(const std::string& l) { lines.push_back(l); }
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

inline std::string fmt(cplx z) {
    std::ostringstream os;
    os << std::setprecision(6) << z.real();
    if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

inline std::string fmt(const Polynomial& p) {
    std::string s = "[";
    const auto& c = p.coeffs();
    for (size_t k = 0; k < c.size(); ++k) s += (k ? ", " : "") + fmt(c[k]);
    return s + "]";
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

/// Certificate tolerance: the --tol flag, else DARLINGTON_TOL, else the default.
inline double resolve_tolerance(const CommandOptions& opts, double fallback) {
    if (opts.tol) return *opts.tol;
    if (const char* env = std::getenv("DARLINGTON_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0))
            throw Error(ErrorKind::InvalidInput, std::string("DARLINGTON_TOL: not a positive number: ") + env);
        return v;
    }
    return fallback;
}

inline Report error_report(const std::string& command, const std::string& stage, const Error& e, int code) {
    Report rep;
    rep.exit_code = code;
    rep.data = {{"command", command}, {"status", "error"}, {"stage", stage}, {"kind", to_string(e.kind())},
                {"message", e.what()}};
    rep.line("error [" + stage + ", " + to_string(e.kind()) + "]: " + e.what());
    return rep;
}

inline Realization problem_realization(const ProblemFile& pf) {
    if (pf.realization) return *pf.realization;
    return scalar_realization(*pf.p1, *pf.q);
}

struct Certificates {
    json items = json::object();
    bool all = true;

    void add(Report& rep, const std::string& name, bool ok, const std::string& detail) {
        items[name] = ok;
        all = all && ok;
        rep.line(std::string(ok ? "  [pass] " : "  [FAIL] ") + name + ": " + detail);
    }
};

inline void finish(Report& rep, const Certificates& certs) {
    rep.data["certificates"] = certs.items;
    rep.data["status"] = certs.all ? "pass" : "fail";
    rep.exit_code = certs.all ? exit_ok : exit_certificate;
    rep.line(std::string("status: ") + (certs.all ? "pass" : "FAIL"));
}

/// Frequency on the grid where ||S(i w)|| is smallest, if it is below one.
inline std::optional<double> suggest_mobius(const Realization& r) {
    std::optional<double> best;
    double gain = 1.0;
    for (double w : frequency_grid())
        for (double sw : {w, -w}) {
            const cplx s(0.0, sw);
            if (near_any(s, poles(r), 1e-9)) continue;
            const double g = norm2(evaluate_unchecked(r, s));
            if (g < gain) {
                gain = g;
                best = sw;
            }
        }
    return best;
}

inline void write_result(const CommandOptions& opts, Report& rep, const Realization& r) {
    if (!opts.out) return;
    json doc = realization_to_json(r);
    doc["report"] = rep.data;
    write_json(*opts.out, doc);
    rep.data["output"] = *opts.out;
    rep.line("result written to " + *opts.out);
}

}  // namespace detail

inline Report cmd_check(const std::string& path, const CommandOptions& opts = {}) {
    ProblemFile pf;
    Realization r;
    double tol = 0.0;
    try {
        pf = read_problem(path);
        r = detail::problem_realization(pf);
        tol = detail::resolve_tolerance(opts, 1e-8);
    } catch (const Error& e) {
        return detail::error_report("check", "input", e, exit_input);
    }
    Report rep;
    rep.data = {{"command", "check"}, {"file", path}};
    detail::Certificates certs;
    try {
        rep.line("check " + path);
        const Index n = r.states(), p = r.outputs(), m = r.inputs();
        rep.data["states"] = n;
        rep.data["outputs"] = p;
        rep.data["inputs"] = m;

        const DegreeCertificate kc = kalman_check(r, pf.tol.rank);
        rep.data["mcmillan_degree"] = kc.mcmillan_degree;
        certs.add(rep, "minimal", kc.minimal,
                  "reachable rank " + std::to_string(kc.reachable_rank) + ", observable rank " +
                      std::to_string(kc.observable_rank) + " of " + std::to_string(n));

        const double dnorm = norm2(r.D);
        rep.data["norm_D"] = dnorm;
        if (opts.mobius) {
            const cplx s0(0.0, *opts.mobius);
            const double g = detail::near_any(s0, poles(r), 1e-9) ? std::numeric_limits<double>::infinity()
                                                                   : norm2(detail::evaluate_unchecked(r, s0));
            rep.data["mobius"] = *opts.mobius;
            rep.data["norm_at_mobius_point"] = g;
            certs.add(rep, "strictly_contractive", g < 1.0,
                      "||S(i*" + detail::fmt(*opts.mobius) + ")|| = " + detail::fmt(g));
        } else {
            const bool ok = dnorm < 1.0 - 1e-12;
            std::string msg = "||D|| = " + detail::fmt(dnorm);
            if (!ok) {
                const auto w0 = detail::suggest_mobius(r);
                if (w0) {
                    msg += "; retry with --mobius " + detail::fmt(*w0);
                    rep.data["suggested_mobius"] = *w0;
                } else {
                    msg += "; no grid frequency with ||S(iw)|| < 1 found";
                }
            }
            certs.add(rep, "strictly_contractive", ok, msg);
        }

        const bool stable = is_stable(r);
        const double peak = stable ? grid_peak_gain(r) : std::numeric_limits<double>::infinity();
        rep.data["stable"] = stable;
        rep.data["grid_peak_gain"] = peak;
        certs.add(rep, "schur", stable && peak <= 1.0 + tol,
                  std::string(stable ? "stable" : "unstable") + ", peak gain on grid " + detail::fmt(peak));

        if (p == m) {
            const double sres = symmetry_residual(r);
            rep.data["symmetry_residual"] = sres;
            if (pf.symmetric)
                certs.add(rep, "symmetric", sres <= tol, "symmetry residual " + detail::fmt(sres));
            else
                rep.line("  [info] symmetry residual " + detail::fmt(sres));
        }
        if (pf.real) certs.add(rep, "real", is_real_realization(r), "entries real");
        if (pf.J) {
            SignatureRealization sr{r, *pf.J};
            bool ok = true;
            std::string msg = "A^T = J A J, B^T = C J";
            try {
                sr.validate();
            } catch (const Error& e) {
                ok = false;
                msg = e.what();
            }
            certs.add(rep, "signature_symmetric", ok, msg);
        }
        if (certs.all) {
            std::string summary = "minimal, ";
            if (pf.symmetric) summary += "symmetric, ";
            summary += opts.mobius ? "strictly contractive at i*omega0, Schur" : "strictly contractive at infinity, Schur";
            rep.data["summary"] = summary;
            rep.line("summary: " + summary);
        }
    } catch (const Error& e) {
        return detail::error_report("check", "check", e, exit_stage);
    }
    detail::finish(rep, certs);
    return rep;
}

inline Report cmd_synthesize(const std::string& path, const CommandOptions& opts = {}) {
    ProblemFile pf;
    Realization r;
    double tol = 0.0;
    try {
        pf = read_problem(path);
        r = detail::problem_realization(pf);
        if (opts.mode != "inner" && opts.mode != "symmetric" && opts.mode != "minimal-symmetric")
            throw Error(ErrorKind::InvalidInput, "unknown mode " + opts.mode);
        if (opts.solution != "min" && opts.solution != "max")
            throw Error(ErrorKind::InvalidInput, "unknown solution " + opts.solution);
        tol = detail::resolve_tolerance(opts, opts.mode == "minimal-symmetric" ? 1e-7 : 1e-8);
        if (opts.mode != "inner" && r.inputs() != r.outputs())
            throw Error(ErrorKind::NotSquare, "mode " + opts.mode + " needs a square transfer function");
    } catch (const Error& e) {
        return detail::error_report("synthesize", "input", e, exit_input);
    }
    Report rep;
    rep.data = {{"command", "synthesize"}, {"file", path}, {"mode", opts.mode}, {"tolerance", tol}};
    if (opts.mobius) rep.data["mobius"] = *opts.mobius;
    rep.line("synthesize " + path + " (mode " + opts.mode + ")");
    detail::Certificates certs;
    const Index p = r.outputs();
    Realization result;

    if (opts.mode == "minimal-symmetric") {
        MinimizeOptions mo;
        mo.tol = pf.tol;
        mo.mobius = opts.mobius;
        MinimalSymmetricResult res;
        try {
            res = minimize_symmetric(r, mo);
        } catch (const Error& e) {
            const std::string what = e.what();
            const auto colon = what.find(':');
            return detail::error_report("synthesize", colon == std::string::npos ? "reduction" : what.substr(0, colon),
                                        e, exit_stage);
        }
        result = res.extension;
        rep.data["n"] = res.n;
        rep.data["kappa"] = res.kappa;
        rep.data["n0"] = res.n0;
        rep.data["degree"] = res.degree;
        rep.data["initial_degree"] = res.initial_degree;
        rep.data["reductions"] = res.steps.size();
        rep.data["unitarity_residual"] = res.unitarity_residual;
        rep.data["symmetry_residual"] = res.symmetry_residual;
        rep.data["block_residual"] = res.block_residual;
        rep.line("  n = " + std::to_string(res.n) + ", kappa = " + std::to_string(res.kappa) + ", n0 = " +
                 std::to_string(res.n0) + ", degree of Sigma_Pmin = " + std::to_string(res.initial_degree) + ", " +
                 std::to_string(res.steps.size()) + " reduction(s)");
        certs.add(rep, "degree", res.degree == res.target,
                  "degree " + std::to_string(res.degree) + ", n + kappa = " + std::to_string(res.target));
        certs.add(rep, "inner", is_stable(result) && res.unitarity_residual <= tol,
                  "unitarity residual " + detail::fmt(res.unitarity_residual));
        certs.add(rep, "symmetric", res.symmetry_residual <= tol, "symmetry residual " + detail::fmt(res.symmetry_residual));
        certs.add(rep, "block", res.block_residual <= tol, "lower-right block residual " + detail::fmt(res.block_residual));
    } else {
        std::string stage = "mobius";
        try {
            Realization w = mobius_precondition(r, opts.mobius);
            stage = "minimality";
            auto [m, cert] = minimal_realization(w, pf.tol.rank);
            if (!cert.minimal) rep.line("  [info] removed " + std::to_string(w.states() - m.states()) + " hidden mode(s)");
            w = m;
            if (opts.mode == "symmetric") {
                stage = "symmetrize";
                w = symmetrize(w, pf.tol);
            }
            stage = "riccati";
            const HatData h = build_hat(w);
            const ExtremalSolutions sol = solve_extremal(h);
            const RiccatiSolution& chosen = opts.solution == "min" ? sol.minimal : sol.maximal;
            rep.data["n"] = w.states();
            rep.data["kappa"] = sol.spectrum.kappa;
            rep.data["n0"] = sol.spectrum.n0;
            rep.data["solution"] = opts.solution;
            rep.data["riccati_residual"] = chosen.residual_norm;
            rep.line("  n = " + std::to_string(w.states()) + ", kappa = " + std::to_string(sol.spectrum.kappa) +
                     ", n0 = " + std::to_string(sol.spectrum.n0) + ", P = P_" + opts.solution +
                     ", Riccati residual " + detail::fmt(chosen.residual_norm));
            stage = "extension";
            const ExtensionBlocks e = build_extension(w, chosen);
            if (opts.mode == "inner") {
                result = mobius_restore(e.full, opts.mobius);
                const double ures = unitarity_residual(result);
                const double bres = transfer_distance(r, detail::lower_right(result, p));
                rep.data["degree"] = result.states();
                rep.data["unitarity_residual"] = ures;
                rep.data["block_residual"] = bres;
                certs.add(rep, "degree", result.states() == w.states(),
                          "degree " + std::to_string(result.states()) + ", n = " + std::to_string(w.states()));
                certs.add(rep, "inner", is_stable(result) && ures <= tol, "unitarity residual " + detail::fmt(ures));
                certs.add(rep, "block", bres <= tol, "lower-right block residual " + detail::fmt(bres));
                if (opts.solution == "min") {
                    const Realization s21 = e.S21();
                    const Matrix zeros = s21.A - s21.B * s21.D.inverse() * s21.C;
                    const Vector zs = zeros.size() ? Eigen::ComplexEigenSolver<Matrix>(zeros, false).eigenvalues() : Vector();
                    double worst = -std::numeric_limits<double>::infinity();
                    for (Index i = 0; i < zs.size(); ++i) worst = std::max(worst, zs(i).real());
                    const double band = 1e-6 * (1.0 + norm2(zeros));
                    rep.data["s21_max_zero_real_part"] = zs.size() ? worst : 0.0;
                    certs.add(rep, "s21_outer", zs.size() == 0 || worst <= band,
                              "largest real part of the zeros of S21 " + detail::fmt(zs.size() ? worst : 0.0));
                }
            } else {
                stage = "symmetric";
                const SymmetricExtension sym = symmetric_unitary_extension(e, pf.tol);
                result = mobius_restore(sym.sigma, opts.mobius);
                try {
                    result = symmetrize(result, pf.tol);
                } catch (const Error&) {
                }
                const double ures = unitarity_residual(result);
                const double sres = symmetry_residual(result);
                const double bres = transfer_distance(r, detail::lower_right(result, p));
                rep.data["degree"] = sym.degree;
                rep.data["q_degree"] = sym.q.degree;
                rep.data["inner"] = sym.inner;
                rep.data["unitarity_residual"] = ures;
                rep.data["symmetry_residual"] = sres;
                rep.data["block_residual"] = bres;
                rep.line("  degree " + std::to_string(sym.degree) + ", deg Q = " + std::to_string(sym.q.degree) +
                         ", inner: " + detail::yes_no(sym.inner) + (sym.q.diagnostic.empty() ? "" : " (" + sym.q.diagnostic + ")"));
                certs.add(rep, "unitary", ures <= tol, "unitarity residual on the imaginary axis " + detail::fmt(ures));
                certs.add(rep, "symmetric", sres <= tol, "symmetry residual " + detail::fmt(sres));
                certs.add(rep, "block", bres <= tol, "lower-right block residual " + detail::fmt(bres));
            }
        } catch (const Error& e) {
            return detail::error_report("synthesize", stage, e, exit_stage);
        }
    }
    try {
        detail::write_result(opts, rep, result);
    } catch (const Error& e) {
        return detail::error_report("synthesize", "output", e, exit_input);
    }
    rep.data["realization"] = realization_to_json(result);
    detail::finish(rep, certs);
    return rep;
}

inline Report cmd_scalar(const std::string& path, const CommandOptions& opts = {}) {
    ProblemFile pf;
    double tol = 0.0;
    try {
        pf = read_problem(path);
        if (!pf.p1) throw Error(ErrorKind::InvalidInput, "scalar: the file needs \"p1\" and \"q\"");
        tol = detail::resolve_tolerance(opts, 1e-8);
    } catch (const Error& e) {
        return detail::error_report("scalar", "input", e, exit_input);
    }
    Report rep;
    rep.data = {{"command", "scalar"}, {"file", path}, {"tolerance", tol}};
    rep.line("scalar " + path);
    detail::Certificates certs;
    ScalarExtension se;
    try {
        se = scalar_minimal_extension(*pf.p1, *pf.q);
    } catch (const Error& e) {
        return detail::error_report("scalar", "factorization", e, exit_stage);
    }
    const ScalarFactorization& f = se.factorization;
    rep.data["mu"] = polynomial_to_json(f.mu);
    rep.data["r0"] = polynomial_to_json(f.r0);
    rep.data["r1"] = polynomial_to_json(f.r1);
    rep.data["r2"] = polynomial_to_json(f.r2);
    rep.data["c"] = f.c;
    rep.data["kappa"] = f.kappa;
    rep.data["denominator"] = polynomial_to_json(se.denominator);
    rep.data["n11"] = polynomial_to_json(se.n11);
    rep.data["n12"] = polynomial_to_json(se.n12);
    rep.data["n22"] = polynomial_to_json(se.n22);
    rep.data["degree"] = se.degree;
    rep.data["expected_degree"] = se.expected_degree;
    rep.data["degree_preserving_symmetric_extension"] = admits_degree_preserving_symmetric_extension(f);
    rep.data["unitarity_residual"] = se.unitarity_residual;
    rep.data["symmetry_residual"] = se.symmetry_residual;
    rep.line("  mu = " + detail::fmt(f.mu) + "  (ascending coefficients)");
    rep.line("  c = " + detail::fmt(f.c) + ", r0 = " + detail::fmt(f.r0) + ", r1 = " + detail::fmt(f.r1) +
             ", r2 = " + detail::fmt(f.r2));
    rep.line("  kappa = " + std::to_string(f.kappa) + ", degree-preserving symmetric extension: " +
             detail::yes_no(admits_degree_preserving_symmetric_extension(f)));
    rep.line("  extension over q r2 = " + detail::fmt(se.denominator) + ":");
    rep.line("    n11 = " + detail::fmt(se.n11));
    rep.line("    n12 = n21 = " + detail::fmt(se.n12));
    rep.line("    n22 = " + detail::fmt(se.n22));
    certs.add(rep, "degree", se.degree == se.expected_degree,
              "degree " + std::to_string(se.degree) + ", deg(r2 q) = " + std::to_string(se.expected_degree));
    certs.add(rep, "inner", is_stable(se.realization) && se.unitarity_residual <= tol,
              "unitarity residual " + detail::fmt(se.unitarity_residual));
    certs.add(rep, "symmetric", se.symmetry_residual <= tol, "symmetry residual " + detail::fmt(se.symmetry_residual));
    try {
        detail::write_result(opts, rep, se.realization);
    } catch (const Error& e) {
        return detail::error_report("scalar", "output", e, exit_input);
    }
    rep.data["realization"] = realization_to_json(se.realization);
    detail::finish(rep, certs);
    return rep;
}

}  // namespace darlington
