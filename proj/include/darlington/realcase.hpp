#pragma once

// Real symmetric Schur functions: real extensions correspond to real P, and
// for signature-symmetric realizations (A^T = J A J, B^T = C J) the map
// P -> J P^{-T} J transposes the extension.

#include "extension.hpp"

#include <random>
#include <string>

namespace darlington {

inline bool is_real_matrix(const Matrix& m, double tol = 1e-12) {
    return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

inline bool is_real_realization(const Realization& r, double tol = 1e-12) {
    return is_real_matrix(r.A, tol) && is_real_matrix(r.B, tol) && is_real_matrix(r.C, tol) &&
           is_real_matrix(r.D, tol);
}

struct SignatureRealization {
    Realization realization;
    Matrix J;  // diagonal, entries +-1

    void validate(double tol = 1e-10) const {
        const Realization& r = realization;
        r.validate();
        const Index n = r.states();
        if (J.rows() != n || J.cols() != n)
            throw Error(ErrorKind::InvalidInput, "signature realization: J must be n x n");
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) {
                const cplx v = J(i, j);
                const bool ok = (i == j) ? (std::abs(std::abs(v) - 1.0) == 0.0 && v.imag() == 0.0) : v == cplx(0.0);
                if (!ok) throw Error(ErrorKind::InvalidInput, "signature realization: J must be diagonal with entries +-1");
            }
        if (!is_real_realization(r)) throw Error(ErrorKind::InvalidInput, "signature realization: entries must be real");
        const double scale = std::max({1.0, norm2(r.A), norm2(r.B), norm2(r.C), norm2(r.D)});
        if (norm2(r.A.transpose() - J * r.A * J) > tol * scale || norm2(r.B.transpose() - r.C * J) > tol * scale ||
            norm2(r.C.transpose() - J * r.B) > tol * scale || norm2(r.D.transpose() - r.D) > tol * scale)
            throw Error(ErrorKind::NotSymmetric, "signature realization: A^T = J A J, B^T = C J, D^T = D violated");
    }
};

/// max over 16 fixed non-real points of ||F(conj s) - conj(F(s))|| / (1 + ||F(s)||).
inline double conjugate_symmetry_residual(const Realization& r) {
    std::mt19937_64 rng(0xc0471ULL);
    std::uniform_real_distribution<double> re(0.5, 5.0), im(0.2, 8.0), sign(-1.0, 1.0);
    const double shift = std::max(0.0, max_real_part(poles(r)));
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
        const cplx s(shift + re(rng), (sign(rng) < 0 ? -1.0 : 1.0) * im(rng));
        const Matrix v = evaluate(r, s);
        worst = std::max(worst, norm2(evaluate(r, std::conj(s)) - v.conjugate()) / (1.0 + norm2(v)));
    }
    return worst;
}

struct RealExtensionCheck {
    bool real = false;                // ||Im P|| <= 1e-9
    double imag_norm = 0.0;
    double conjugate_residual = 0.0;  // of S_P
    bool certificate_agrees = false;  // conjugate symmetry <=> real P
};

/// The extension S_P of a real S is real exactly when P is real.
inline RealExtensionCheck is_real_extension(const RiccatiSolution& sol, const Realization& r) {
    if (!is_real_realization(r)) throw Error(ErrorKind::InvalidInput, "is_real_extension: realization is not real");
    RealExtensionCheck out;
    out.imag_norm = norm2(Matrix(sol.P.imag().cast<cplx>()));
    out.real = out.imag_norm <= 1e-9;
    const ExtensionBlocks e = build_extension(r, sol);
    out.conjugate_residual = conjugate_symmetry_residual(e.full);
    out.certificate_agrees = out.real == (out.conjugate_residual <= 1e-8);
    return out;
}

inline Matrix j_conjugate(const Matrix& P, const Matrix& J) { return hermitian_part(J * P.inverse().transpose() * J); }

struct FeasibilityCandidate {
    std::string name;
    Matrix P;
    bool real = false;
    double fixed_point_residual = 0.0;  // ||J P^{-T} J - P|| / (1 + ||P||)
    double riccati_residual = 0.0;
};

struct FeasibilityReport {
    bool feasible = false;
    std::optional<Matrix> witness;
    std::vector<FeasibilityCandidate> candidates;
    std::string obstruction;
    Index kappa = 0;
    Index n0 = 0;
};

/// Degree-n real symmetric extension search over P_min, P_max and their
/// J-conjugates: a real candidate with J P^{-T} J = P gives S_P real and
/// symmetric.
inline FeasibilityReport real_symmetric_feasibility(const SignatureRealization& sr) {
    sr.validate();
    const Realization& r = sr.realization;
    const HatData h = build_hat(r);
    const ExtremalSolutions sol = solve_extremal(h);
    FeasibilityReport rep;
    rep.kappa = sol.spectrum.kappa;
    rep.n0 = sol.spectrum.n0;
    const std::vector<std::pair<std::string, Matrix>> raw{{"P_min", sol.minimal.P},
                                                          {"P_max", sol.maximal.P},
                                                          {"J P_min^-T J", j_conjugate(sol.minimal.P, sr.J)},
                                                          {"J P_max^-T J", j_conjugate(sol.maximal.P, sr.J)}};
    for (const auto& [name, P] : raw) {
        FeasibilityCandidate c;
        c.name = name;
        c.P = P;
        c.real = is_real_matrix(P, 1e-9);
        c.fixed_point_residual = norm2(j_conjugate(P, sr.J) - P) / (1.0 + norm2(P));
        c.riccati_residual = riccati_residual(h, P);
        if (!rep.feasible && c.real && c.fixed_point_residual <= 1e-8 && c.riccati_residual <= riccati_tolerance(P)) {
            rep.feasible = true;
            rep.witness = P;
        }
        rep.candidates.push_back(std::move(c));
    }
    if (!rep.feasible) {
        rep.obstruction = "no real solution among the extremal pair and its J-conjugates satisfies P = J P^{-T} J "
                          "(||J P_min^{-T} J - P_min|| / (1 + ||P_min||) = " +
                          std::to_string(rep.candidates[0].fixed_point_residual) + ", kappa = " +
                          std::to_string(rep.kappa) + ", n0 = " + std::to_string(rep.n0) + ")";
    }
    return rep;
}

}  // namespace darlington
