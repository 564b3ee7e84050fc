#pragma once

// Inner extensions of the same McMillan degree as S, parametrized by the
// Hermitian solutions P of the Riccati equation:
//
//   S_P = ( A | B1  B )        D11 = -D*,  D12 = (I - D*D)^{1/2},
//         ( C1| D11 D12 )      D21 = (I - DD*)^{1/2},
//         ( C | D21 D   )      C1 = -D12^{-1} (B* P^{-1} + D* C),
//                              B1 = -(P C* + B D*) D21^{-1}.

#include "riccati.hpp"

#include <string>

namespace darlington {

struct ExtensionBlocks {
    Realization full;  // inputs [u1; u], outputs [y1; y]
    Matrix D11, D12, D21;
    Matrix B1, C1;
    RiccatiSolution source;
    double unitarity_residual = 0.0;

    [[nodiscard]] Index p() const { return D21.rows(); }
    [[nodiscard]] Index m() const { return D12.rows(); }
    [[nodiscard]] Realization S() const { return {full.A, full.B.rightCols(m()), full.C.bottomRows(p()), full.D.bottomRightCorner(p(), m())}; }
    [[nodiscard]] Realization S11() const { return {full.A, B1, C1, D11}; }
    [[nodiscard]] Realization S12() const { return {full.A, full.B.rightCols(m()), C1, D12}; }
    [[nodiscard]] Realization S21() const { return {full.A, B1, full.C.bottomRows(p()), D21}; }
};

namespace detail {

inline ExtensionBlocks assemble_extension(const Realization& r, Matrix b1, Matrix c1, Matrix d11, Matrix d12,
                                          Matrix d21, RiccatiSolution source) {
    ExtensionBlocks e;
    e.full.A = r.A;
    e.full.B = hstack(b1, r.B);
    e.full.C = vstack(c1, r.C);
    e.full.D = vstack(hstack(d11, d12), hstack(d21, r.D));
    e.B1 = std::move(b1);
    e.C1 = std::move(c1);
    e.D11 = std::move(d11);
    e.D12 = std::move(d12);
    e.D21 = std::move(d21);
    e.source = std::move(source);
    e.unitarity_residual = unitarity_residual(e.full);
    return e;
}

inline void require_positive_definite(const Matrix& P, const char* where) {
    const auto he = hermitian_eigen(P);
    if (he.values.size() > 0 && !(he.values(0) > 1e-12 * std::max(1.0, he.values(he.values.size() - 1))))
        throw Error(ErrorKind::Singular, std::string(where) + ": P is not positive definite");
}

}  // namespace detail

/// S_P for a Hermitian solution P. The input must be minimal and strictly
/// contractive at infinity.
inline ExtensionBlocks build_extension(const Realization& r, const RiccatiSolution& sol) {
    r.validate();
    const HatData h = build_hat(r);
    if (!kalman_check(r).minimal) throw Error(ErrorKind::NotMinimal, "build_extension: realization is not minimal");
    const RiccatiSolution checked = make_solution(h, sol.P, sol.kind);
    if (!(checked.residual_norm <= riccati_tolerance(checked.P)))
        throw Error(ErrorKind::RiccatiFailure, "build_extension: Riccati residual " +
                                                   std::to_string(checked.residual_norm) + " above tolerance");
    detail::require_positive_definite(checked.P, "build_extension");
    const Index p = r.outputs(), m = r.inputs();
    const Matrix left = identity(p) - r.D * r.D.adjoint();
    const Matrix right = identity(m) - r.D.adjoint() * r.D;
    const Matrix d21 = hermitian_sqrt(left);
    const Matrix d12 = hermitian_sqrt(right);
    const Matrix d11 = -r.D.adjoint();
    const Matrix pinv = checked.P.inverse();
    Matrix c1 = -hermitian_inv_sqrt(right) * (r.B.adjoint() * pinv + r.D.adjoint() * r.C);
    Matrix b1 = -(checked.P * r.C.adjoint() + r.B * r.D.adjoint()) * hermitian_inv_sqrt(left);
    RiccatiSolution src = checked;
    src.graph_condition = sol.graph_condition;
    return detail::assemble_extension(r, std::move(b1), std::move(c1), d11, d12, d21, std::move(src));
}

/// diag(U2, I) S_P diag(U1, I).
inline ExtensionBlocks apply_gauge(const ExtensionBlocks& e, const Matrix& u1, const Matrix& u2) {
    if (u1.rows() != e.p() || u2.rows() != e.m() || !is_unitary(u1, 1e-10) || !is_unitary(u2, 1e-10))
        throw Error(ErrorKind::InvalidInput, "apply_gauge: gauge matrices must be unitary of the block sizes");
    const Realization s = e.S();
    return detail::assemble_extension(s, e.B1 * u1, u2 * e.C1, u2 * e.D11 * u1, u2 * e.D12, e.D21 * u1, e.source);
}

/// The unique extension of the same degree whose lower-left block is the given
/// S21 = (A, B1, C, D21): P solves A P + P A* + B1 B1* + B B* = 0 and
/// C1 = -(D11 B1* + D12 B*) P^{-1}.
inline ExtensionBlocks extension_from_left_factor(const Realization& r, const Realization& s21) {
    r.validate();
    s21.validate();
    const double scale = std::max({1.0, norm2(r.A), norm2(r.C)});
    if (s21.A.rows() != r.A.rows() || norm2(s21.A - r.A) > 1e-12 * scale || s21.C.rows() != r.C.rows() ||
        norm2(s21.C - r.C) > 1e-12 * scale)
        throw Error(ErrorKind::InvalidInput, "extension_from_left_factor: S21 must share (C, A) with S");
    const Index p = r.outputs(), m = r.inputs();
    const Matrix d21 = hermitian_sqrt(identity(p) - r.D * r.D.adjoint());
    if (s21.D.rows() != p || s21.D.cols() != p || norm2(s21.D - d21) > 1e-10)
        throw Error(ErrorKind::InvalidInput, "extension_from_left_factor: S21(infinity) must equal (I - DD*)^{1/2}");
    const Matrix P = solve_lyapunov(r.A, -(s21.B * s21.B.adjoint() + r.B * r.B.adjoint()));
    detail::require_positive_definite(P, "extension_from_left_factor");
    const Matrix d12 = hermitian_sqrt(identity(m) - r.D.adjoint() * r.D);
    const Matrix d11 = -r.D.adjoint();
    Matrix c1 = -(d11 * s21.B.adjoint() + d12 * r.B.adjoint()) * P.inverse();
    const HatData h = build_hat(r);
    return detail::assemble_extension(r, s21.B, std::move(c1), d11, d12, d21, make_solution(h, P));
}

// ---------------------------------------------------------------------------
// Comparing extensions
// ---------------------------------------------------------------------------

struct QFactor {
    Realization realization;  // minimal
    Index degree = 0;
    Index gamma_rank = 0;  // rank(P_tilde - P)
    bool inner_flag = false;
    HermitianOrder order = HermitianOrder::incomparable;
    bool stable = false;  // pole-location certificate of the minimized Q
    std::string diagnostic;
};

inline double gamma_threshold(const Matrix& p, const Matrix& pt) {
    return 1e-7 * std::max({1.0, norm2(p), norm2(pt)});
}

/// Q = S21^{-1} S21~ where S21~ belongs to P_tilde:
/// Q = (Z, (P~ - P) C* D21^{-1}, -D21^{-1} C, I), restricted to the range of
/// P~ - P (which is Z-invariant).
inline QFactor q_factor(const ExtensionBlocks& e, const Matrix& p_tilde) {
    const Matrix& P = e.source.P;
    const Matrix gamma = hermitian_part(p_tilde - P);
    const Realization s21 = e.S21();
    const Matrix d21inv = e.D21.inverse();
    const Matrix z = s21.A - s21.B * d21inv * s21.C;
    const auto he = hermitian_eigen(gamma);
    const double thr = gamma_threshold(P, p_tilde);
    std::vector<Index> keep;
    for (Index i = 0; i < he.values.size(); ++i)
        if (std::abs(he.values(i)) > thr) keep.push_back(i);
    const Index r = static_cast<Index>(keep.size());
    Matrix v(P.rows(), r);
    RealVector lam(r);
    for (Index j = 0; j < r; ++j) {
        v.col(j) = he.vectors.col(keep[static_cast<size_t>(j)]);
        lam(j) = he.values(keep[static_cast<size_t>(j)]);
    }
    const Realization raw{v.adjoint() * z * v, lam.cast<cplx>().asDiagonal() * v.adjoint() * s21.C.adjoint() * d21inv,
                          -d21inv * s21.C * v, identity(e.p())};
    QFactor q;
    q.gamma_rank = r;
    auto [minq, cert] = minimal_realization(raw);
    q.realization = minq;
    q.degree = cert.mcmillan_degree;
    q.order = hermitian_order(P, hermitian_part(p_tilde), thr);
    q.stable = is_stable(minq);
    const bool order_inner = q.order == HermitianOrder::less_equal || q.order == HermitianOrder::equal;
    q.inner_flag = order_inner;
    if (order_inner != q.stable)
        q.diagnostic = std::string("Loewner order test (") + to_string(q.order) +
                       ") and pole-location test disagree; order test used";
    if (q.degree != q.gamma_rank)
        q.diagnostic += (q.diagnostic.empty() ? "" : "; ") + std::string("degree of Q differs from rank(P~ - P)");
    return q;
}

/// Q = S21^{-1} S21~ for two extensions of the same S.
inline QFactor compare_extensions(const ExtensionBlocks& e1, const ExtensionBlocks& e2) {
    if (e1.full.A.rows() != e2.full.A.rows() || norm2(e1.full.A - e2.full.A) > 1e-12 * (1.0 + norm2(e1.full.A)) ||
        e1.p() != e2.p() || e1.m() != e2.m() || transfer_distance(e1.S(), e2.S()) > 1e-10)
        throw Error(ErrorKind::InvalidInput, "compare_extensions: the extensions do not share the same S block");
    return q_factor(e1, e2.source.P);
}

// ---------------------------------------------------------------------------
// Symmetric unitary extension
// ---------------------------------------------------------------------------

struct SymmetricExtension {
    Realization sigma;  // minimal
    QFactor q;
    Index degree = 0;
    bool inner = false;
    double unitarity_residual = 0.0;
    double symmetry_residual = 0.0;
};

/// Sigma_P = S_P diag(Q, I) with Q = S21^{-1} S12^T, which for a symmetric
/// realization is the Q factor towards P^{-T}.
inline SymmetricExtension symmetric_unitary_extension(const ExtensionBlocks& e, const Tolerances& tol = {}) {
    const Realization s = e.S();
    if (!is_symmetric_realization(s, tol.symmetry))
        throw Error(ErrorKind::NotSymmetric, "symmetric_unitary_extension: source realization is not symmetric");
    SymmetricExtension out;
    const Matrix pt = hermitian_part(e.source.P.inverse().transpose());
    out.q = q_factor(e, pt);
    const Realization qi = direct_sum(out.q.realization, constant_realization(identity(e.m())));
    auto [sig, cert] = minimal_realization(multiply(e.full, qi));
    out.sigma = sig;
    out.degree = cert.mcmillan_degree;
    out.inner = out.q.inner_flag;
    out.unitarity_residual = unitarity_residual(sig);
    out.symmetry_residual = symmetry_residual(sig);
    return out;
}

}  // namespace darlington
