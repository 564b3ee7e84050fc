#pragma once

// Dense complex linear algebra used throughout the library: Schur forms with
// eigenvalue reordering, clustered spectra with Jordan structure, SVD-based
// rank decisions, Takagi factorization, Sylvester/Lyapunov solvers and the
// Loewner order on Hermitian matrices.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace darlington {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

enum class ErrorKind {
    InvalidInput,
    NotSquare,
    NonConvergence,
    NotSymmetric,
    NotHermitian,
    PoleEvaluation,
    NotContractive,
    Singular,
    NotMinimal,
    RiccatiFailure,
    NotInner,
    ReductionFailure,
    Parse,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::NotSquare: return "not-square";
        case ErrorKind::NonConvergence: return "non-convergence";
        case ErrorKind::NotSymmetric: return "not-symmetric";
        case ErrorKind::NotHermitian: return "not-hermitian";
        case ErrorKind::PoleEvaluation: return "pole-evaluation";
        case ErrorKind::NotContractive: return "not-strictly-contractive";
        case ErrorKind::Singular: return "singular";
        case ErrorKind::NotMinimal: return "not-minimal";
        case ErrorKind::RiccatiFailure: return "riccati-failure";
        case ErrorKind::NotInner: return "not-inner";
        case ErrorKind::ReductionFailure: return "reduction-failure";
        case ErrorKind::Parse: return "parse";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Numerical tolerances shared by every module. `cluster` is relative: the
/// absolute clustering radius for a matrix M is cluster * (1 + ||M||).
struct Tolerances {
    double rank = 1e-9;
    double cluster = 1e-7;
    double symmetry = 1e-9;
    double psd = 1e-9;
};

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

inline bool all_finite(const Matrix& m) {
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

/// Spectral norm (largest singular value). Zero for empty matrices.
inline double norm2(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

inline Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }
inline Matrix symmetric_part(const Matrix& m) { return (m + m.transpose()) / 2.0; }

inline double relative_asymmetry(const Matrix& m) {
    return norm2(m - m.transpose()) / std::max(1.0, norm2(m));
}

inline bool is_hermitian(const Matrix& m, double tol) {
    return m.rows() == m.cols() && norm2(m - m.adjoint()) <= tol * std::max(1.0, norm2(m));
}

inline bool is_unitary(const Matrix& m, double tol) {
    return m.rows() == m.cols() && norm2(m.adjoint() * m - identity(m.rows())) <= tol;
}

inline void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols())
        throw Error(ErrorKind::NotSquare, std::string(what) + ": expected a square matrix, got " +
                                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void require_finite(const Matrix& m, const char* what) {
    if (!all_finite(m)) throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite entries");
}

inline Matrix hstack(const Matrix& a, const Matrix& b) {
    if (a.cols() > 0 && b.cols() > 0 && a.rows() != b.rows())
        throw Error(ErrorKind::InvalidInput, "hstack: row mismatch");
    const Index rows = a.cols() > 0 ? a.rows() : (b.cols() > 0 ? b.rows() : std::max(a.rows(), b.rows()));
    Matrix out(rows, a.cols() + b.cols());
    if (a.cols() > 0) out.leftCols(a.cols()) = a;
    if (b.cols() > 0) out.rightCols(b.cols()) = b;
    return out;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.rows() > 0 && b.rows() > 0 && a.cols() != b.cols())
        throw Error(ErrorKind::InvalidInput, "vstack: column mismatch");
    const Index cols = a.rows() > 0 ? a.cols() : (b.rows() > 0 ? b.cols() : std::max(a.cols(), b.cols()));
    Matrix out(a.rows() + b.rows(), cols);
    if (a.rows() > 0) out.topRows(a.rows()) = a;
    if (b.rows() > 0) out.bottomRows(b.rows()) = b;
    return out;
}

inline Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

// ---------------------------------------------------------------------------
// Singular value decomposition
// ---------------------------------------------------------------------------

struct SvdResult {
    Matrix U;
    RealVector sigma;
    Matrix V;
    Index rank = 0;
    double tolerance = 0.0;  // relative threshold used for the rank decision

    /// Orthonormal basis of the kernel (last cols - rank right singular vectors).
    [[nodiscard]] Matrix kernel() const { return V.rightCols(V.cols() - rank); }
    /// Orthonormal basis of the range.
    [[nodiscard]] Matrix range() const { return U.leftCols(rank); }
};

/// Full SVD M = U diag(sigma) V*; rank counts sigma_i > rank_tol * sigma_max.
inline SvdResult svd(const Matrix& m, double rank_tol = Tolerances{}.rank) {
    require_finite(m, "svd");
    SvdResult out;
    out.tolerance = rank_tol;
    if (m.rows() == 0 || m.cols() == 0) {
        out.U = identity(m.rows());
        out.V = identity(m.cols());
        out.sigma = RealVector::Zero(0);
        return out;
    }
    Eigen::JacobiSVD<Matrix> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.U = dec.matrixU();
    out.V = dec.matrixV();
    out.sigma = dec.singularValues();
    const double smax = out.sigma(0);
    for (Index i = 0; i < out.sigma.size(); ++i)
        if (out.sigma(i) > rank_tol * smax && smax > 0.0) ++out.rank;
    return out;
}

/// Orthonormal kernel basis using an absolute singular value threshold.
inline Matrix null_space_abs(const Matrix& m, double abs_tol) {
    if (m.cols() == 0) return Matrix(0, 0);
    if (m.rows() == 0) return identity(m.cols());
    Eigen::JacobiSVD<Matrix> dec(m, Eigen::ComputeFullV);
    Index r = 0;
    for (Index i = 0; i < dec.singularValues().size(); ++i)
        if (dec.singularValues()(i) > abs_tol) ++r;
    return dec.matrixV().rightCols(m.cols() - r);
}

/// Orthonormal range basis using an absolute singular value threshold.
inline Matrix range_abs(const Matrix& m, double abs_tol) {
    if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
    Eigen::JacobiSVD<Matrix> dec(m, Eigen::ComputeFullU);
    Index r = 0;
    for (Index i = 0; i < dec.singularValues().size(); ++i)
        if (dec.singularValues()(i) > abs_tol) ++r;
    return dec.matrixU().leftCols(r);
}

// ---------------------------------------------------------------------------
// Hermitian utilities
// ---------------------------------------------------------------------------

struct HermitianEigen {
    RealVector values;  // ascending
    Matrix vectors;
};

inline HermitianEigen hermitian_eigen(const Matrix& m) {
    require_square(m, "hermitian_eigen");
    if (m.rows() == 0) return {RealVector(0), Matrix(0, 0)};
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::NonConvergence, "hermitian_eigen: solver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

/// f applied to the eigenvalues of a Hermitian matrix.
inline Matrix hermitian_function(const Matrix& m, const std::function<double(double)>& f) {
    const auto he = hermitian_eigen(m);
    RealVector fv = he.values.unaryExpr(f);
    return he.vectors * fv.cast<cplx>().asDiagonal() * he.vectors.adjoint();
}

inline Matrix hermitian_sqrt(const Matrix& m) {
    return hermitian_function(m, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

/// M^{-1/2} for Hermitian positive definite M.
inline Matrix hermitian_inv_sqrt(const Matrix& m) {
    const auto he = hermitian_eigen(m);
    if (he.values.size() > 0 && he.values(0) <= 0.0)
        throw Error(ErrorKind::Singular, "hermitian_inv_sqrt: matrix is not positive definite");
    return hermitian_function(m, [](double x) { return 1.0 / std::sqrt(x); });
}

/// Factor L with L L* = M for Hermitian positive semidefinite M (negative
/// eigenvalues from rounding are clipped).
inline Matrix psd_factor(const Matrix& m) {
    const auto he = hermitian_eigen(m);
    RealVector root = he.values.unaryExpr([](double x) { return std::sqrt(std::max(x, 0.0)); });
    return he.vectors * root.cast<cplx>().asDiagonal();
}

enum class HermitianOrder { less_equal, greater_equal, equal, incomparable };

inline const char* to_string(HermitianOrder o) {
    switch (o) {
        case HermitianOrder::less_equal: return "less_equal";
        case HermitianOrder::greater_equal: return "greater_equal";
        case HermitianOrder::equal: return "equal";
        case HermitianOrder::incomparable: return "incomparable";
    }
    return "?";
}

/// Loewner order of P relative to Q, read off the signed eigenvalues of Q - P.
/// `psd_tol` is relative to max(1, ||P||, ||Q||).
inline HermitianOrder hermitian_order(const Matrix& p, const Matrix& q, double psd_tol = Tolerances{}.psd) {
    if (p.rows() != q.rows() || p.cols() != q.cols())
        throw Error(ErrorKind::InvalidInput, "hermitian_order: size mismatch");
    const double scale = std::max({1.0, norm2(p), norm2(q)});
    if (!is_hermitian(p, 1e-8) || !is_hermitian(q, 1e-8))
        throw Error(ErrorKind::NotHermitian, "hermitian_order: inputs must be Hermitian");
    const auto he = hermitian_eigen(q - p);
    if (he.values.size() == 0) return HermitianOrder::equal;
    const double tol = psd_tol * scale;
    const double lo = he.values.minCoeff();
    const double hi = he.values.maxCoeff();
    if (lo >= -tol && hi <= tol) return HermitianOrder::equal;
    if (lo >= -tol) return HermitianOrder::less_equal;
    if (hi <= tol) return HermitianOrder::greater_equal;
    return HermitianOrder::incomparable;
}

// ---------------------------------------------------------------------------
// Schur form and reordering
// ---------------------------------------------------------------------------

/// M = Q T Q* with Q unitary and T upper triangular.
struct SchurForm {
    Matrix Q;
    Matrix T;
    [[nodiscard]] Vector eigenvalues() const { return T.diagonal(); }
};

inline SchurForm schur(const Matrix& m) {
    require_square(m, "schur");
    require_finite(m, "schur");
    const Index n = m.rows();
    if (n == 0) return {Matrix(0, 0), Matrix(0, 0)};
    Eigen::ComplexSchur<Matrix> cs(n);
    cs.setMaxIterations(100 * n);
    cs.compute(m);
    if (cs.info() != Eigen::Success)
        throw Error(ErrorKind::NonConvergence,
                    "schur: QR iteration did not converge within " + std::to_string(100 * n) + " sweeps");
    return {cs.matrixU(), cs.matrixT()};
}

/// Exchange the adjacent diagonal entries k and k+1 of the Schur form.
inline void swap_schur(SchurForm& s, Index k) {
    const Index n = s.T.rows();
    const cplx a = s.T(k, k);
    const cplx b = s.T(k, k + 1);
    const cplx c = s.T(k + 1, k + 1);
    // eigenvector of [[a,b],[0,c]] for c becomes the first column of the rotation
    cplx x1 = b;
    cplx x2 = c - a;
    const double nrm = std::hypot(std::abs(x1), std::abs(x2));
    if (nrm == 0.0) return;  // equal eigenvalues with zero coupling: already swapped
    x1 /= nrm;
    x2 /= nrm;
    Eigen::Matrix2cd g;
    g << x1, -std::conj(x2), x2, std::conj(x1);
    s.T.block(k, k, 2, n - k) = g.adjoint() * s.T.block(k, k, 2, n - k);
    s.T.block(0, k, k + 2, 2) = s.T.block(0, k, k + 2, 2) * g;
    s.Q.middleCols(k, 2) = s.Q.middleCols(k, 2) * g;
    s.T(k + 1, k) = 0.0;
}

/// Reorder so that diagonal positions flagged in `select` move to the top,
/// preserving relative order. Returns the number of selected eigenvalues.
inline Index reorder_schur(SchurForm& s, std::vector<bool> select) {
    const Index n = s.T.rows();
    Index target = 0;
    for (Index j = 0; j < n; ++j) {
        if (!select[static_cast<size_t>(j)]) continue;
        for (Index k = j - 1; k >= target; --k) {
            swap_schur(s, k);
            std::swap(select[static_cast<size_t>(k)], select[static_cast<size_t>(k + 1)]);
        }
        ++target;
    }
    return target;
}

/// Orthonormal basis of the invariant subspace for the eigenvalues accepted by `pick`.
inline Matrix invariant_subspace(const Matrix& m, const std::function<bool(cplx)>& pick) {
    auto s = schur(m);
    std::vector<bool> sel(static_cast<size_t>(m.rows()));
    for (Index i = 0; i < m.rows(); ++i) sel[static_cast<size_t>(i)] = pick(s.T(i, i));
    const Index k = reorder_schur(s, sel);
    return s.Q.leftCols(k);
}

// ---------------------------------------------------------------------------
// Clustered spectra
// ---------------------------------------------------------------------------

/// Partition of values into clusters by single linkage at `tol`, then repeated
/// merging of clusters whose centers are within 2*tol. `merged` reports whether
/// the second pass had to merge anything (an ambiguous clustering).
inline std::vector<std::vector<Index>> cluster_values(const std::vector<cplx>& values, double tol,
                                                      bool* merged = nullptr) {
    const Index n = static_cast<Index>(values.size());
    std::vector<Index> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), Index{0});
    std::function<Index(Index)> find = [&](Index i) {
        while (parent[static_cast<size_t>(i)] != i) i = parent[static_cast<size_t>(i)];
        return i;
    };
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (std::abs(values[static_cast<size_t>(i)] - values[static_cast<size_t>(j)]) <= tol)
                parent[static_cast<size_t>(find(j))] = find(i);

    std::vector<std::vector<Index>> groups;
    std::vector<Index> slot(static_cast<size_t>(n), -1);
    for (Index i = 0; i < n; ++i) {
        const Index r = find(i);
        if (slot[static_cast<size_t>(r)] < 0) {
            slot[static_cast<size_t>(r)] = static_cast<Index>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<size_t>(slot[static_cast<size_t>(r)])].push_back(i);
    }

    auto center = [&](const std::vector<Index>& g) {
        cplx c = 0.0;
        for (Index i : g) c += values[static_cast<size_t>(i)];
        return c / static_cast<double>(g.size());
    };
    if (merged) *merged = false;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t a = 0; a < groups.size() && !changed; ++a)
            for (size_t b = a + 1; b < groups.size() && !changed; ++b)
                if (std::abs(center(groups[a]) - center(groups[b])) <= 2.0 * tol) {
                    groups[a].insert(groups[a].end(), groups[b].begin(), groups[b].end());
                    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(b));
                    changed = true;
                    if (merged) *merged = true;
                }
    }
    return groups;
}

struct SpectralCluster {
    cplx center;            // mean of the member eigenvalues
    Index multiplicity = 0; // algebraic multiplicity
    Matrix basis;           // orthonormal basis of the spectral subspace
    Matrix restricted;      // basis* M basis (upper triangular)
    std::vector<Index> jordan_blocks;  // partial multiplicities, descending
};

struct SpectrumReport {
    std::vector<SpectralCluster> clusters;
    double cluster_tolerance = 0.0;  // absolute radius actually used
    std::vector<cplx> eigenvalues;
    bool ambiguous = false;

    [[nodiscard]] Index dimension() const {
        Index d = 0;
        for (const auto& c : clusters) d += c.multiplicity;
        return d;
    }
};

/// Partial multiplicities of the (single) eigenvalue `center` of the small
/// matrix `r`, from kernel dimensions of powers of r - center I.
inline std::vector<Index> jordan_structure(const Matrix& r, cplx center, double abs_tol) {
    const Index m = r.rows();
    const Matrix nmat = r - center * identity(m);
    const double nn = std::max(1.0, norm2(nmat));
    std::vector<Index> kerdim(static_cast<size_t>(m + 2), 0);
    Matrix power = identity(m);
    for (Index k = 1; k <= m; ++k) {
        power = power * nmat;
        const double thr = abs_tol * std::pow(nn, static_cast<double>(k - 1));
        kerdim[static_cast<size_t>(k)] = null_space_abs(power, thr).cols();
    }
    kerdim[static_cast<size_t>(m)] = m;
    kerdim[static_cast<size_t>(m + 1)] = m;
    for (Index k = 1; k <= m; ++k)
        kerdim[static_cast<size_t>(k)] = std::max(kerdim[static_cast<size_t>(k)], kerdim[static_cast<size_t>(k - 1)]);
    std::vector<Index> blocks;
    for (Index k = m; k >= 1; --k) {
        const Index at_least_k = kerdim[static_cast<size_t>(k)] - kerdim[static_cast<size_t>(k - 1)];
        const Index at_least_k1 = kerdim[static_cast<size_t>(k + 1)] - kerdim[static_cast<size_t>(k)];
        for (Index c = 0; c < at_least_k - at_least_k1; ++c) blocks.push_back(k);
    }
    return blocks;
}

inline double default_cluster_radius(const Matrix& m, double rel = Tolerances{}.cluster) {
    return rel * (1.0 + norm2(m));
}

/// Clustered eigen-decomposition. Each cluster carries an orthonormal basis of
/// its spectral subspace and its Jordan block sizes. `cluster_tol < 0` selects
/// the default radius 1e-7 (1 + ||M||).
inline SpectrumReport eig(const Matrix& m, double cluster_tol = -1.0) {
    require_square(m, "eig");
    require_finite(m, "eig");
    SpectrumReport rep;
    rep.cluster_tolerance = cluster_tol < 0 ? default_cluster_radius(m) : cluster_tol;
    const Index n = m.rows();
    if (n == 0) return rep;
    const SchurForm base = schur(m);
    for (Index i = 0; i < n; ++i) rep.eigenvalues.push_back(base.T(i, i));
    const auto groups = cluster_values(rep.eigenvalues, rep.cluster_tolerance, &rep.ambiguous);
    for (const auto& g : groups) {
        SchurForm s = base;
        std::vector<bool> sel(static_cast<size_t>(n), false);
        for (Index i : g) sel[static_cast<size_t>(i)] = true;
        const Index k = reorder_schur(s, sel);
        SpectralCluster c;
        c.multiplicity = k;
        c.basis = s.Q.leftCols(k);
        c.restricted = s.T.topLeftCorner(k, k);
        c.center = c.restricted.trace() / static_cast<double>(k);
        c.jordan_blocks = jordan_structure(c.restricted, c.center, rep.cluster_tolerance);
        rep.clusters.push_back(std::move(c));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Takagi factorization
// ---------------------------------------------------------------------------

/// F = U diag(lambda) U^T with U unitary and lambda >= 0, ascending. The
/// first `kernel_dim` columns of U (zero Takagi values) span ker(conj(F));
/// their conjugates span ker(F).
struct TakagiResult {
    Matrix U;
    RealVector lambda;
    Index kernel_dim = 0;
};

inline TakagiResult takagi(const Matrix& f, const Tolerances& tol = {}) {
    require_square(f, "takagi");
    require_finite(f, "takagi");
    const Index n = f.rows();
    const double fn = norm2(f);
    if (norm2(f - f.transpose()) > tol.symmetry * std::max(fn, 1e-300) && fn > 0.0)
        throw Error(ErrorKind::NotSymmetric, "takagi: input is not symmetric to tolerance");
    TakagiResult out;
    if (n == 0) return out;
    const Matrix fs = symmetric_part(f);

    const SvdResult sv = svd(fs.conjugate(), tol.rank);
    const Index k = n - sv.rank;
    const Matrix kernel = sv.kernel();

    // Real symmetric embedding: eigenvalue s with eigenvector (x, y) gives
    // F conj(u) = s u for u = x + i y.
    RealMatrix emb(2 * n, 2 * n);
    const RealMatrix re = fs.real();
    const RealMatrix im = fs.imag();
    emb << re, im, im, -re;
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(emb);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "takagi: embedding eigensolver failed");

    out.U.resize(n, n);
    out.lambda = RealVector::Zero(n);
    if (k > 0) out.U.leftCols(k) = kernel;
    // the n - k largest eigenvalues of the embedding are the nonzero Takagi values
    const Index r = n - k;
    for (Index j = 0; j < r; ++j) {
        const Index col = 2 * n - r + j;
        const RealVector v = es.eigenvectors().col(col);
        Vector u(n);
        for (Index i = 0; i < n; ++i) u(i) = cplx(v(i), v(n + i));
        out.U.col(k + j) = u.normalized();
        out.lambda(k + j) = std::max(0.0, es.eigenvalues()(col));
    }
    out.kernel_dim = k;
    return out;
}

// ---------------------------------------------------------------------------
// Sylvester and Lyapunov equations
// ---------------------------------------------------------------------------

/// Solve A X + X B = C by Bartels-Stewart on complex Schur forms.
inline Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c) {
    require_square(a, "solve_sylvester(A)");
    require_square(b, "solve_sylvester(B)");
    if (c.rows() != a.rows() || c.cols() != b.rows())
        throw Error(ErrorKind::InvalidInput, "solve_sylvester: dimension mismatch");
    const Index n = a.rows(), m = b.rows();
    if (n == 0 || m == 0) return Matrix::Zero(n, m);
    const SchurForm sa = schur(a);
    const SchurForm sb = schur(b);
    const Matrix f = sa.Q.adjoint() * c * sb.Q;
    Matrix y = Matrix::Zero(n, m);
    const double scale = std::max({1.0, norm2(a), norm2(b)});
    for (Index j = 0; j < m; ++j) {
        Vector rhs = f.col(j);
        for (Index k = 0; k < j; ++k) rhs -= sb.T(k, j) * y.col(k);
        Matrix tri = sa.T;
        tri.diagonal().array() += sb.T(j, j);
        for (Index i = 0; i < n; ++i)
            if (std::abs(tri(i, i)) < 1e-14 * scale)
                throw Error(ErrorKind::Singular, "solve_sylvester: A and -B share an eigenvalue");
        y.col(j) = tri.triangularView<Eigen::Upper>().solve(rhs);
    }
    return sa.Q * y * sb.Q.adjoint();
}

/// Solve A X + X A* = Q.
inline Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
    return hermitian_part(solve_sylvester(a, a.adjoint(), q));
}

}  // namespace darlington
