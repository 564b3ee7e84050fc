#pragma once

// Hatted data, Hamiltonian matrix and the extremal Hermitian solutions of
//   P Ch* Ch P + Ah P + P Ah* + Bh Bh* = 0
// obtained from invariant subspaces of the Hamiltonian.

#include "realization.hpp"

namespace darlington {

struct HatData {
    Matrix A_hat;
    Matrix BBs;  // B_hat B_hat*
    Matrix CsC;  // C_hat* C_hat
    Matrix B_hat;
    Matrix C_hat;
};

/// Requires ||D|| < 1; use mobius_precondition first when S is contractive at
/// some i*omega0 but not at infinity.
inline HatData build_hat(const Realization& r) {
    r.validate();
    const Index p = r.outputs(), m = r.inputs();
    const double dn = norm2(r.D);
    if (dn >= 1.0 - 1e-12)
        throw Error(ErrorKind::NotContractive,
                    "build_hat: ||D|| = " + std::to_string(dn) +
                        " is not < 1; S must be strictly contractive at infinity (try --mobius <omega0>)");
    const Matrix left = identity(p) - r.D * r.D.adjoint();
    const Matrix right = identity(m) - r.D.adjoint() * r.D;
    HatData h;
    h.A_hat = r.A + r.B * r.D.adjoint() * left.partialPivLu().solve(r.C);
    h.B_hat = r.B * hermitian_inv_sqrt(right);
    h.C_hat = hermitian_inv_sqrt(left) * r.C;
    h.BBs = hermitian_part(h.B_hat * h.B_hat.adjoint());
    h.CsC = hermitian_part(h.C_hat.adjoint() * h.C_hat);
    return h;
}

/// H = [[-Ah*, -Ch* Ch], [Bh Bh*, Ah]].
inline Matrix build_hamiltonian(const HatData& h) {
    const Index n = h.A_hat.rows();
    Matrix H(2 * n, 2 * n);
    H << -h.A_hat.adjoint(), -h.CsC, h.BBs, h.A_hat;
    return H;
}

/// ||H* J + J H|| with J = [[0, I], [-I, 0]].
inline double hamiltonian_defect(const Matrix& H) {
    const Index n = H.rows() / 2;
    Matrix j = Matrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = identity(n);
    j.bottomLeftCorner(n, n) = -identity(n);
    return norm2(H.adjoint() * j + j * H);
}

inline Matrix riccati_map(const HatData& h, const Matrix& P) {
    return P * h.CsC * P + h.A_hat * P + P * h.A_hat.adjoint() + h.BBs;
}

inline double riccati_residual(const HatData& h, const Matrix& P) { return norm2(riccati_map(h, P)); }

/// Acceptance threshold for a computed solution.
inline double riccati_tolerance(const Matrix& P) {
    const double pn = norm2(P);
    return 1e-8 * (1.0 + pn * pn);
}

enum class SolutionKind { minimal, maximal, other };

inline const char* to_string(SolutionKind k) {
    switch (k) {
        case SolutionKind::minimal: return "minimal";
        case SolutionKind::maximal: return "maximal";
        case SolutionKind::other: return "other";
    }
    return "?";
}

struct RiccatiSolution {
    Matrix P;
    Matrix Z;  // A_hat + P C_hat* C_hat
    SolutionKind kind = SolutionKind::other;
    double residual_norm = 0.0;
    double graph_condition = 1.0;  // condition number of X in P = Y X^{-1}
};

/// Wrap a user-supplied P after checking it is Hermitian.
inline RiccatiSolution make_solution(const HatData& h, const Matrix& P, SolutionKind kind = SolutionKind::other) {
    require_square(P, "make_solution");
    if (P.rows() != h.A_hat.rows()) throw Error(ErrorKind::InvalidInput, "make_solution: P has the wrong size");
    if (!is_hermitian(P, 1e-9)) throw Error(ErrorKind::NotHermitian, "make_solution: P is not Hermitian");
    RiccatiSolution s;
    s.P = hermitian_part(P);
    s.Z = h.A_hat + s.P * h.CsC;
    s.kind = kind;
    s.residual_norm = riccati_residual(h, s.P);
    return s;
}

// ---------------------------------------------------------------------------
// Spectrum of H
// ---------------------------------------------------------------------------

enum class HalfPlane { left, imaginary, right };

struct HCluster {
    cplx center;
    Index multiplicity = 0;
    HalfPlane side = HalfPlane::imaginary;
    std::vector<Index> jordan_blocks;
};

struct HSpectrum {
    std::vector<HCluster> clusters;
    Index kappa = 0;
    Index n0 = 0;
    std::vector<cplx> pi_roots;        // with multiplicity
    std::vector<cplx> chi_plus_roots;  // simple, in the right half-plane
    std::vector<cplx> chi_minus_roots;
    double cluster_tolerance = 0.0;
    bool ambiguous = false;
    std::vector<std::string> warnings;
};

inline HalfPlane classify(cplx z, double band) {
    if (std::abs(z.real()) <= band) return HalfPlane::imaginary;
    return z.real() > 0 ? HalfPlane::right : HalfPlane::left;
}

/// Parity split chi_H = pi^2 chi_plus chi_minus from clustered multiplicities.
inline HSpectrum analyze_spectrum(const Matrix& H, double cluster_tol = -1.0) {
    const SpectrumReport rep = eig(H, cluster_tol);
    HSpectrum out;
    out.cluster_tolerance = rep.cluster_tolerance;
    out.ambiguous = rep.ambiguous;
    if (rep.ambiguous)
        out.warnings.push_back("eigenvalue clusters closer than twice the clustering radius were merged");
    Index imag_total = 0;
    for (const auto& c : rep.clusters) {
        HCluster hc{c.center, c.multiplicity, classify(c.center, rep.cluster_tolerance), c.jordan_blocks};
        if (hc.side == HalfPlane::imaginary) hc.center = cplx(0.0, c.center.imag());
        const Index half = hc.multiplicity / 2;
        switch (hc.side) {
            case HalfPlane::right:
                if (hc.multiplicity % 2 == 1) {
                    ++out.kappa;
                    out.chi_plus_roots.push_back(hc.center);
                }
                break;
            case HalfPlane::left:
                if (hc.multiplicity % 2 == 1) out.chi_minus_roots.push_back(hc.center);
                break;
            case HalfPlane::imaginary:
                imag_total += hc.multiplicity;
                if (hc.multiplicity % 2 == 1)
                    out.warnings.push_back("imaginary-axis eigenvalue cluster with odd multiplicity");
                break;
        }
        for (Index k = 0; k < half; ++k) out.pi_roots.push_back(hc.center);
        out.clusters.push_back(std::move(hc));
    }
    out.n0 = imag_total / 2;
    return out;
}

// ---------------------------------------------------------------------------
// Extremal solutions
// ---------------------------------------------------------------------------

namespace detail {

/// Sum over k of ker(N^k) intersected with range(N^k), for N = R - lambda I
/// nilpotent on the cluster: the leading half of every Jordan chain.
inline Matrix half_chain_subspace(const Matrix& r, cplx lambda, double abs_tol) {
    const Index m = r.rows();
    const Matrix nmat = r - lambda * identity(m);
    const double nn = std::max(1.0, norm2(nmat));
    Matrix acc(m, 0);
    Matrix power = identity(m);
    for (Index k = 1; k < m; ++k) {
        power = power * nmat;
        const double thr = abs_tol * std::pow(nn, static_cast<double>(k - 1));
        const Matrix ker = null_space_abs(power, thr);
        const Matrix ran = range_abs(power, thr);
        if (ker.cols() == 0 || ran.cols() == 0) continue;
        // x = ker a = ran b
        const Matrix both = hstack(ker, -ran);
        const Matrix coef = null_space_abs(both, 1e-6);
        if (coef.cols() == 0) continue;
        acc = hstack(acc, ker * coef.topRows(ker.cols()));
    }
    return range_abs(acc, 1e-6 * std::max(1.0, acc.norm()));
}

}  // namespace detail

/// Orthonormal basis of the n-dimensional H-invariant subspace built from the
/// clusters on `side` plus the leading half of each imaginary-axis cluster.
inline Matrix extremal_subspace(const Matrix& H, HalfPlane side, double cluster_tol = -1.0) {
    const SpectrumReport rep = eig(H, cluster_tol);
    const Index n = H.rows() / 2;
    Matrix basis(H.rows(), 0);
    for (const auto& c : rep.clusters) {
        const HalfPlane s = classify(c.center, rep.cluster_tolerance);
        if (s == side) {
            basis = hstack(basis, c.basis);
        } else if (s == HalfPlane::imaginary) {
            const cplx lambda(0.0, c.center.imag());
            const Matrix half = detail::half_chain_subspace(c.restricted, lambda, rep.cluster_tolerance);
            if (2 * half.cols() != c.multiplicity)
                throw Error(ErrorKind::RiccatiFailure,
                            "extremal_subspace: imaginary-axis cluster of multiplicity " +
                                std::to_string(c.multiplicity) + " has a half-chain subspace of dimension " +
                                std::to_string(half.cols()));
            basis = hstack(basis, c.basis * half);
        }
    }
    if (basis.cols() != n)
        throw Error(ErrorKind::RiccatiFailure, "extremal_subspace: selected subspace has dimension " +
                                                   std::to_string(basis.cols()) + ", expected " + std::to_string(n));
    Eigen::HouseholderQR<Matrix> qr(basis);
    return qr.householderQ() * Matrix::Identity(2 * n, n);
}

inline RiccatiSolution solution_from_subspace(const HatData& h, const Matrix& basis, SolutionKind kind,
                                              bool refine) {
    const Index n = h.A_hat.rows();
    const Matrix x = basis.topRows(n);
    const Matrix y = basis.bottomRows(n);
    Eigen::JacobiSVD<Matrix> sv(x);
    const double smax = sv.singularValues()(0);
    const double smin = sv.singularValues()(n - 1);
    if (!(smin > 1e-12 * smax))
        throw Error(ErrorKind::RiccatiFailure,
                    "solve_extremal: graph subspace matrix X is singular (cond = " + std::to_string(smax / smin) + ")");
    Matrix P = hermitian_part(x.adjoint().partialPivLu().solve(y.adjoint()).adjoint());
    if (refine) {
        // one Newton step: Z D + D Z* = -R(P)
        const Matrix z = h.A_hat + P * h.CsC;
        try {
            const Matrix step = solve_lyapunov(z, -riccati_map(h, P));
            const Matrix candidate = hermitian_part(P + step);
            if (riccati_residual(h, candidate) < riccati_residual(h, P)) P = candidate;
        } catch (const Error&) {
        }
    }
    RiccatiSolution s = make_solution(h, P, kind);
    s.graph_condition = smax / smin;
    if (!(s.residual_norm <= riccati_tolerance(s.P)))
        throw Error(ErrorKind::RiccatiFailure,
                    "solve_extremal: residual " + std::to_string(s.residual_norm) + " above tolerance");
    return s;
}

struct ExtremalSolutions {
    RiccatiSolution minimal;
    RiccatiSolution maximal;
    HSpectrum spectrum;
};

/// Data of the equation solved by X = P^{-1}:
/// X Bh Bh* X + Ah* X + X Ah + Ch* Ch = 0.
inline HatData dual_hat(const HatData& h) {
    HatData d;
    d.A_hat = h.A_hat.adjoint();
    d.BBs = h.CsC;
    d.CsC = h.BBs;
    d.B_hat = h.C_hat.adjoint();
    d.C_hat = h.B_hat.adjoint();
    return d;
}

/// P_min (sigma(Z) in the closed left half-plane) from the right-half-plane
/// invariant subspace of H. P_max is the inverse of the minimal solution of
/// the dual equation, which stays accurate when P_max is large; the
/// left-half-plane subspace of H is the fallback.
inline ExtremalSolutions solve_extremal(const HatData& h, double cluster_tol = -1.0) {
    const Matrix H = build_hamiltonian(h);
    ExtremalSolutions out;
    out.spectrum = analyze_spectrum(H, cluster_tol);
    const bool refine = out.spectrum.n0 == 0;
    out.minimal = solution_from_subspace(h, extremal_subspace(H, HalfPlane::right, cluster_tol),
                                         SolutionKind::minimal, refine);
    try {
        const HatData d = dual_hat(h);
        const RiccatiSolution x = solution_from_subspace(
            d, extremal_subspace(build_hamiltonian(d), HalfPlane::right, cluster_tol), SolutionKind::minimal, refine);
        const auto lu = x.P.fullPivLu();
        if (!lu.isInvertible()) throw Error(ErrorKind::Singular, "dual minimal solution is singular");
        RiccatiSolution s = make_solution(h, hermitian_part(lu.inverse()), SolutionKind::maximal);
        s.graph_condition = x.graph_condition;
        if (!(s.residual_norm <= riccati_tolerance(s.P)))
            throw Error(ErrorKind::RiccatiFailure, "dual route residual above tolerance");
        out.maximal = s;
    } catch (const Error&) {
        out.maximal = solution_from_subspace(h, extremal_subspace(H, HalfPlane::left, cluster_tol),
                                             SolutionKind::maximal, refine);
    }
    return out;
}

}  // namespace darlington
