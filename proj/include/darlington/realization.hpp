#pragma once

// State-space realizations S(s) = C (sI - A)^{-1} B + D and their algebra:
// evaluation, products and inverses, minimality, symmetric realizations and
// the Moebius change of variable that moves a point of strict contractivity
// on the imaginary axis to infinity.

#include "linalg.hpp"

#include <optional>
#include <random>
#include <utility>

namespace darlington {

struct Realization {
    Matrix A;
    Matrix B;
    Matrix C;
    Matrix D;

    [[nodiscard]] Index states() const { return A.rows(); }
    [[nodiscard]] Index inputs() const { return D.cols(); }
    [[nodiscard]] Index outputs() const { return D.rows(); }

    void validate() const {
        if (A.rows() != A.cols()) throw Error(ErrorKind::InvalidInput, "realization: A must be square");
        if (B.rows() != A.rows() || C.cols() != A.rows() || B.cols() != D.cols() || C.rows() != D.rows())
            throw Error(ErrorKind::InvalidInput,
                        "realization: incompatible dimensions A " + std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()) + ", B " + std::to_string(B.rows()) + "x" +
                            std::to_string(B.cols()) + ", C " + std::to_string(C.rows()) + "x" +
                            std::to_string(C.cols()) + ", D " + std::to_string(D.rows()) + "x" +
                            std::to_string(D.cols()));
        if (!all_finite(A) || !all_finite(B) || !all_finite(C) || !all_finite(D))
            throw Error(ErrorKind::InvalidInput, "realization: non-finite entries");
    }
};

inline Realization make_realization(Matrix a, Matrix b, Matrix c, Matrix d) {
    Realization r{std::move(a), std::move(b), std::move(c), std::move(d)};
    r.validate();
    return r;
}

/// Realization of a constant matrix (no states).
inline Realization constant_realization(const Matrix& d) {
    return {Matrix(0, 0), Matrix(0, d.cols()), Matrix(d.rows(), 0), d};
}

inline std::vector<cplx> poles(const Realization& r) {
    std::vector<cplx> out;
    if (r.states() == 0) return out;
    const SchurForm s = schur(r.A);
    for (Index i = 0; i < r.states(); ++i) out.push_back(s.T(i, i));
    return out;
}

inline double max_real_part(const std::vector<cplx>& values) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& v : values) m = std::max(m, v.real());
    return m;
}

namespace detail {

inline Matrix evaluate_unchecked(const Realization& r, cplx s) {
    if (r.states() == 0) return r.D;
    Matrix shifted = -r.A;
    shifted.diagonal().array() += s;
    return r.C * shifted.partialPivLu().solve(r.B) + r.D;
}

inline bool near_any(cplx s, const std::vector<cplx>& pts, double tol) {
    for (const auto& p : pts)
        if (std::abs(s - p) <= tol * (1.0 + std::abs(p))) return true;
    return false;
}

}  // namespace detail

/// Transfer function value at s. Throws PoleEvaluation when s lies within the
/// clustering radius of an eigenvalue of A.
inline Matrix evaluate(const Realization& r, cplx s) {
    if (r.states() > 0) {
        const double tol = default_cluster_radius(r.A);
        for (const auto& p : poles(r))
            if (std::abs(s - p) <= tol)
                throw Error(ErrorKind::PoleEvaluation, "evaluate: s is (numerically) a pole of the realization");
    }
    return detail::evaluate_unchecked(r, s);
}

/// Value at s = infinity.
inline Matrix value_at_infinity(const Realization& r) { return r.D; }

/// S'(s) = -C (sI - A)^{-2} B.
inline Matrix evaluate_derivative(const Realization& r, cplx s) {
    if (r.states() == 0) return Matrix::Zero(r.outputs(), r.inputs());
    Matrix shifted = -r.A;
    shifted.diagonal().array() += s;
    const auto lu = shifted.partialPivLu();
    return -(r.C * lu.solve(lu.solve(r.B)));
}

// ---------------------------------------------------------------------------
// Sample sets
// ---------------------------------------------------------------------------

/// 61 frequencies: 0 and +-10^k j for k = -2..2, j in {1, 1.5, 2, 3, 5, 7}.
inline std::vector<double> frequency_grid() {
    std::vector<double> w{0.0};
    for (int k = -2; k <= 2; ++k)
        for (double j : {1.0, 1.5, 2.0, 3.0, 5.0, 7.0}) {
            const double v = j * std::pow(10.0, k);
            w.push_back(v);
            w.push_back(-v);
        }
    return w;
}

/// 32 probe points: i*omega for omega in {0, +-0.1, +-1, +-10, +-100} and 23
/// fixed pseudo-random points right of max_re + 1.
inline std::vector<cplx> probe_points(double max_re) {
    std::vector<cplx> pts;
    for (double w : {0.0, 0.1, -0.1, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0}) pts.emplace_back(0.0, w);
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> re(1.0, 6.0), im(-10.0, 10.0);
    const double base = std::isfinite(max_re) ? max_re : 0.0;
    while (pts.size() < 32) pts.emplace_back(base + re(rng), im(rng));
    return pts;
}

/// max over the probe points of ||S1(s) - S2(s)|| / (1 + ||S1(s)||), skipping
/// points that sit on a pole of either realization.
inline double transfer_distance(const Realization& r1, const Realization& r2) {
    if (r1.outputs() != r2.outputs() || r1.inputs() != r2.inputs())
        throw Error(ErrorKind::InvalidInput, "transfer_distance: size mismatch");
    auto p1 = poles(r1);
    auto p2 = poles(r2);
    std::vector<cplx> all = p1;
    all.insert(all.end(), p2.begin(), p2.end());
    double worst = 0.0;
    for (const auto& s : probe_points(max_real_part(all))) {
        if (detail::near_any(s, all, 1e-6)) continue;
        const Matrix v1 = detail::evaluate_unchecked(r1, s);
        const Matrix v2 = detail::evaluate_unchecked(r2, s);
        worst = std::max(worst, norm2(v1 - v2) / (1.0 + norm2(v1)));
    }
    return worst;
}

/// max over the probe points of ||S(s) - S(s)^T|| / (1 + ||S(s)||).
inline double symmetry_residual(const Realization& r) {
    if (r.outputs() != r.inputs()) return std::numeric_limits<double>::infinity();
    const auto pl = poles(r);
    double worst = 0.0;
    for (const auto& s : probe_points(max_real_part(pl))) {
        if (detail::near_any(s, pl, 1e-6)) continue;
        const Matrix v = detail::evaluate_unchecked(r, s);
        worst = std::max(worst, norm2(v - v.transpose()) / (1.0 + norm2(v)));
    }
    return worst;
}

/// max over the 61-point frequency grid of ||S(iw) S(iw)* - I||.
inline double unitarity_residual(const Realization& r) {
    if (r.outputs() != r.inputs()) return std::numeric_limits<double>::infinity();
    const auto pl = poles(r);
    double worst = 0.0;
    for (double w : frequency_grid()) {
        const cplx s(0.0, w);
        if (detail::near_any(s, pl, 1e-9)) return std::numeric_limits<double>::infinity();
        const Matrix v = detail::evaluate_unchecked(r, s);
        worst = std::max(worst, norm2(v * v.adjoint() - identity(v.rows())));
    }
    return worst;
}

/// All poles strictly inside the left half-plane (beyond the clustering band).
inline bool is_stable(const Realization& r) {
    if (r.states() == 0) return true;
    const double band = default_cluster_radius(r.A);
    for (const auto& p : poles(r))
        if (p.real() >= -band) return false;
    return true;
}

/// Stable and unitary on the frequency grid to `tol`.
inline bool is_inner(const Realization& r, double tol = 1e-8) {
    return is_stable(r) && unitarity_residual(r) <= tol;
}

/// sup of ||S(iw)|| over the frequency grid.
inline double grid_peak_gain(const Realization& r) {
    double g = 0.0;
    const auto pl = poles(r);
    for (double w : frequency_grid()) {
        const cplx s(0.0, w);
        if (detail::near_any(s, pl, 1e-9)) return std::numeric_limits<double>::infinity();
        g = std::max(g, norm2(detail::evaluate_unchecked(r, s)));
    }
    return g;
}

// ---------------------------------------------------------------------------
// Realization algebra
// ---------------------------------------------------------------------------

/// Cascade: the realization of S2 S1 (signal through `first`, then `second`),
/// in the lower block-triangular form [[A1, 0], [B2 C1, A2]].
inline Realization compose(const Realization& first, const Realization& second) {
    if (second.inputs() != first.outputs())
        throw Error(ErrorKind::InvalidInput, "compose: inner dimensions do not match");
    const Index n1 = first.states(), n2 = second.states();
    Realization out;
    out.A = Matrix::Zero(n1 + n2, n1 + n2);
    out.A.topLeftCorner(n1, n1) = first.A;
    out.A.bottomLeftCorner(n2, n1) = second.B * first.C;
    out.A.bottomRightCorner(n2, n2) = second.A;
    out.B = vstack(first.B, second.B * first.D);
    out.C = hstack(second.D * first.C, second.C);
    out.D = second.D * first.D;
    return out;
}

/// Realization of left(s) * right(s).
inline Realization multiply(const Realization& left, const Realization& right) { return compose(right, left); }

/// Realization of S^{-1} for invertible D.
inline Realization invert(const Realization& r) {
    require_square(r.D, "invert");
    const auto lu = r.D.fullPivLu();
    if (!lu.isInvertible() || r.D.size() == 0 ||
        Eigen::JacobiSVD<Matrix>(r.D).singularValues().tail(1)(0) <= 1e-13 * std::max(1.0, norm2(r.D)))
        throw Error(ErrorKind::Singular, "invert: D is singular");
    const Matrix dinv = lu.inverse();
    return {r.A - r.B * dinv * r.C, r.B * dinv, -dinv * r.C, dinv};
}

/// Para-hermitian conjugate S*(s) = S(-conj(s))^*.
inline Realization para_conjugate(const Realization& r) {
    return {-r.A.adjoint(), -r.C.adjoint(), r.B.adjoint(), r.D.adjoint()};
}

inline Realization transpose(const Realization& r) {
    return {r.A.transpose(), r.C.transpose(), r.B.transpose(), r.D.transpose()};
}

/// (T A T^{-1}, T B, C T^{-1}, D).
inline Realization similarity(const Realization& r, const Matrix& t, const Matrix& tinv) {
    return {t * r.A * tinv, t * r.B, r.C * tinv, r.D};
}

/// diag(S1, S2).
inline Realization direct_sum(const Realization& r1, const Realization& r2) {
    return {block_diag(r1.A, r2.A), block_diag(r1.B, r2.B), block_diag(r1.C, r2.C), block_diag(r1.D, r2.D)};
}

inline Realization scale(const Realization& r, cplx k) { return {r.A, r.B, k * r.C, k * r.D}; }

// ---------------------------------------------------------------------------
// Minimality
// ---------------------------------------------------------------------------

struct DegreeCertificate {
    Index mcmillan_degree = 0;
    Index reachable_rank = 0;
    Index observable_rank = 0;
    bool minimal = false;
    std::optional<Matrix> reduction_transform;  // x_min = T x
    double tolerance = 0.0;
};

/// Orthonormal basis of the Krylov space span{B, AB, A^2 B, ...}, built one
/// block at a time with SVD rank decisions at rank_tol * max(||A||, ||B||).
inline Matrix reachable_subspace(const Matrix& a, const Matrix& b, double rank_tol) {
    const Index n = a.rows();
    const double thr = rank_tol * std::max({norm2(a), norm2(b), 1e-300});
    Matrix basis(n, 0);
    Matrix next = b;
    for (Index it = 0; it <= n && basis.cols() < n; ++it) {
        if (next.cols() == 0) break;
        for (int pass = 0; pass < 2; ++pass)
            if (basis.cols() > 0) next -= basis * (basis.adjoint() * next);
        const Matrix fresh = range_abs(next, thr);
        if (fresh.cols() == 0) break;
        basis = hstack(basis, fresh);
        next = a * fresh;
    }
    // final re-orthonormalization
    if (basis.cols() > 0) {
        Eigen::HouseholderQR<Matrix> qr(basis);
        basis = qr.householderQ() * Matrix::Identity(n, basis.cols());
    }
    return basis;
}

/// Kalman decomposition by two orthogonal staircase passes: restrict to the
/// reachable subspace, then to the orthogonal complement of the unobservable one.
inline std::pair<Realization, DegreeCertificate> minimal_realization(const Realization& r,
                                                                     double rank_tol = Tolerances{}.rank) {
    r.validate();
    DegreeCertificate cert;
    cert.tolerance = rank_tol;
    const Index n = r.states();
    if (n == 0) {
        cert.minimal = true;
        cert.reduction_transform = Matrix(0, 0);
        return {r, cert};
    }
    const Matrix v = reachable_subspace(r.A, r.B, rank_tol);
    cert.reachable_rank = v.cols();
    const Realization reach{v.adjoint() * r.A * v, v.adjoint() * r.B, r.C * v, r.D};
    const Matrix w = reachable_subspace(reach.A.adjoint(), reach.C.adjoint(), rank_tol);
    const Realization out{w.adjoint() * reach.A * w, w.adjoint() * reach.B, reach.C * w, r.D};
    cert.observable_rank = reachable_subspace(r.A.adjoint(), r.C.adjoint(), rank_tol).cols();
    cert.mcmillan_degree = out.states();
    cert.minimal = (cert.reachable_rank == n && cert.observable_rank == n);
    cert.reduction_transform = (v * w).adjoint();
    return {out, cert};
}

/// Reachability / observability ranks and the McMillan degree.
inline DegreeCertificate kalman_check(const Realization& r, double rank_tol = Tolerances{}.rank) {
    return minimal_realization(r, rank_tol).second;
}

/// Split a realization without imaginary-axis poles into its stable part and
/// its anti-stable part: S = S_stable + S_antistable (D kept in the stable part).
inline std::pair<Realization, Realization> stable_projection(const Realization& r) {
    const Index n = r.states();
    if (n == 0) return {r, constant_realization(Matrix::Zero(r.outputs(), r.inputs()))};
    SchurForm s = schur(r.A);
    std::vector<bool> sel(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) sel[static_cast<size_t>(i)] = s.T(i, i).real() < 0.0;
    const Index k = reorder_schur(s, sel);
    const Matrix t11 = s.T.topLeftCorner(k, k);
    const Matrix t12 = s.T.topRightCorner(k, n - k);
    const Matrix t22 = s.T.bottomRightCorner(n - k, n - k);
    // T11 X - X T22 = -T12 decouples the two blocks
    const Matrix x = (k > 0 && n - k > 0) ? solve_sylvester(t11, -t22, -t12) : Matrix::Zero(k, n - k);
    const Matrix bq = s.Q.adjoint() * r.B;
    const Matrix cq = r.C * s.Q;
    const Matrix b1 = bq.topRows(k) - x * bq.bottomRows(n - k);
    const Matrix b2 = bq.bottomRows(n - k);
    const Matrix c1 = cq.leftCols(k);
    const Matrix c2 = cq.leftCols(k) * x + cq.rightCols(n - k);
    Realization stable{t11, b1, c1, r.D};
    Realization anti{t22, b2, c2, Matrix::Zero(r.outputs(), r.inputs())};
    return {stable, anti};
}

/// Square-root balanced truncation of a stable realization, keeping Hankel
/// singular values above hsv_tol * max. For inner functions every Hankel
/// singular value of a minimal realization equals one, so the decision is
/// scale free.
struct BalancedResult {
    Realization realization;
    RealVector hankel_singular_values;
};

inline BalancedResult balanced_minimal(const Realization& r, double hsv_tol = 1e-6) {
    r.validate();
    const Index n = r.states();
    if (n == 0) return {r, RealVector(0)};
    for (const auto& p : poles(r))
        if (p.real() >= 0.0)
            throw Error(ErrorKind::InvalidInput, "balanced_minimal: realization is not stable");
    const Matrix wc = solve_lyapunov(r.A, -(r.B * r.B.adjoint()));
    const Matrix wo = solve_lyapunov(r.A.adjoint(), -(r.C.adjoint() * r.C));
    const Matrix lc = psd_factor(wc);
    const Matrix lo = psd_factor(wo);
    Eigen::JacobiSVD<Matrix> dec(lo.adjoint() * lc, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector hsv = dec.singularValues();
    Index k = 0;
    const double top = hsv.size() > 0 ? hsv(0) : 0.0;
    for (Index i = 0; i < hsv.size(); ++i)
        if (hsv(i) > hsv_tol * top && top > 0.0) ++k;
    const RealVector inv_root = hsv.head(k).unaryExpr([](double x) { return 1.0 / std::sqrt(x); });
    const Matrix t = lc * dec.matrixV().leftCols(k) * inv_root.cast<cplx>().asDiagonal();
    const Matrix ti = inv_root.cast<cplx>().asDiagonal() * dec.matrixU().leftCols(k).adjoint() * lo.adjoint();
    return {{ti * r.A * t, ti * r.B, r.C * t, r.D}, hsv};
}

// ---------------------------------------------------------------------------
// Symmetric realizations
// ---------------------------------------------------------------------------

inline bool is_symmetric_realization(const Realization& r, double tol = 1e-9) {
    if (r.inputs() != r.outputs()) return false;
    const double scale = std::max({1.0, norm2(r.A), norm2(r.B), norm2(r.D)});
    return norm2(r.A - r.A.transpose()) <= tol * scale && norm2(r.B - r.C.transpose()) <= tol * scale &&
           norm2(r.D - r.D.transpose()) <= tol * scale;
}

namespace detail {
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}
}  // namespace detail

/// Symmetric minimal realization (A = A^T, B = C^T, D = D^T) of a symmetric
/// transfer function given by a minimal realization. Solves T A = A^T T,
/// T B = C^T, B^T T = C for the unique invertible symmetric T, factors
/// T = M^T M through Takagi and returns (M A M^{-1}, M B, C M^{-1}, D).
inline Realization symmetrize(const Realization& r, const Tolerances& tol = {}) {
    r.validate();
    if (r.inputs() != r.outputs()) throw Error(ErrorKind::NotSymmetric, "symmetrize: transfer function is not square");
    if (is_symmetric_realization(r, tol.symmetry)) return r;
    const auto cert = kalman_check(r, tol.rank);
    if (!cert.minimal) throw Error(ErrorKind::NotMinimal, "symmetrize: realization is not minimal");
    if (symmetry_residual(r) > 1e-8)
        throw Error(ErrorKind::NotSymmetric, "symmetrize: transfer function is not symmetric on the probe grid");
    const Index n = r.states();
    const Index p = r.inputs();
    const Matrix in = identity(n);
    const Matrix at = r.A.transpose();
    Matrix sys(n * n + 2 * n * p, n * n);
    sys.topRows(n * n) = detail::kron(r.A.transpose(), in) - detail::kron(in, at);
    sys.middleRows(n * n, n * p) = detail::kron(r.B.transpose(), in);
    sys.bottomRows(n * p) = detail::kron(in, r.B.transpose());
    Vector rhs = Vector::Zero(n * n + 2 * n * p);
    const Matrix ct = r.C.transpose();
    rhs.segment(n * n, n * p) = Eigen::Map<const Vector>(ct.data(), n * p);
    rhs.segment(n * n + n * p, n * p) = Eigen::Map<const Vector>(r.C.data(), n * p);
    const Vector t = sys.completeOrthogonalDecomposition().solve(rhs);
    const double res = (sys * t - rhs).norm() / std::max(1.0, rhs.norm());
    if (res > 1e-7) throw Error(ErrorKind::NotSymmetric, "symmetrize: no symmetric similarity exists (residual " +
                                                             std::to_string(res) + ")");
    const Matrix tm = symmetric_part(Eigen::Map<const Matrix>(t.data(), n, n));
    Tolerances loose = tol;
    loose.symmetry = 1e-6;
    const TakagiResult tk = takagi(tm, loose);
    if (tk.kernel_dim > 0) throw Error(ErrorKind::Singular, "symmetrize: symmetrizer is singular");
    const RealVector root = tk.lambda.cwiseSqrt();
    const Matrix m = root.cast<cplx>().asDiagonal() * tk.U.transpose();
    const Matrix minv = tk.U.conjugate() * root.cwiseInverse().cast<cplx>().asDiagonal();
    Realization out = similarity(r, m, minv);
    out.A = symmetric_part(out.A);
    const Matrix b = (out.B + out.C.transpose()) / 2.0;
    out.B = b;
    out.C = b.transpose();
    out.D = symmetric_part(out.D);
    return out;
}

// ---------------------------------------------------------------------------
// Moebius change of variable
// ---------------------------------------------------------------------------

/// Realization of w -> S(i omega0 + 1/w). The map w = 1/(s - i omega0) keeps
/// the right half-plane and sends i omega0 to infinity, so the new value at
/// infinity is S(i omega0). Without omega0 the realization is returned as is.
inline Realization mobius_precondition(const Realization& r, std::optional<double> omega0) {
    r.validate();
    if (!omega0) return r;
    const cplx s0(0.0, *omega0);
    const Index n = r.states();
    if (n == 0) return r;
    for (const auto& p : poles(r))
        if (std::abs(p - s0) <= default_cluster_radius(r.A))
            throw Error(ErrorKind::PoleEvaluation, "mobius_precondition: i*omega0 is a pole");
    const Matrix value = detail::evaluate_unchecked(r, s0);
    if (norm2(value) >= 1.0)
        throw Error(ErrorKind::NotContractive, "mobius_precondition: S is not strictly contractive at i*omega0");
    Matrix f = -r.A;
    f.diagonal().array() += s0;
    const Matrix g = f.inverse();
    return {-g, g * r.B, -r.C * g, r.D + r.C * g * r.B};
}

/// Inverse of mobius_precondition: realization of s -> T(1/(s - i omega0)).
inline Realization mobius_restore(const Realization& r, std::optional<double> omega0) {
    r.validate();
    if (!omega0 || r.states() == 0) return r;
    const auto lu = r.A.fullPivLu();
    if (!lu.isInvertible()) throw Error(ErrorKind::Singular, "mobius_restore: state matrix is singular");
    const Matrix e = lu.inverse();
    Matrix a = e;
    a.diagonal().array() += cplx(0.0, *omega0);
    return {a, e * r.B, -r.C * e, r.D - r.C * e * r.B};
}

}  // namespace darlington
