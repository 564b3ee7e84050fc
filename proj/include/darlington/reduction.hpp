#pragma once

// Degree reduction of symmetric inner functions by two-sided division with
// elementary Blaschke factors B(s) = I + (b(s) - 1) u u*, b(s) = (s - xi)/(s + conj(xi)),
// and the pipeline producing a minimal-degree symmetric inner extension.

#include "extension.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace darlington {

struct BlaschkeFactor {
    cplx xi;
    Vector u;

    void validate() const {
        if (!(xi.real() > 0.0)) throw Error(ErrorKind::InvalidInput, "BlaschkeFactor: xi must lie in Re s > 0");
        if (std::abs(u.norm() - 1.0) > 1e-12) throw Error(ErrorKind::InvalidInput, "BlaschkeFactor: u must be a unit vector");
    }
};

inline cplx blaschke_scalar(cplx xi, cplx s) { return (s - xi) / (s + std::conj(xi)); }

inline Matrix blaschke_eval(const BlaschkeFactor& f, cplx s) {
    const Index p = f.u.size();
    return identity(p) + (blaschke_scalar(f.xi, s) - 1.0) * f.u * f.u.adjoint();
}

/// B(s)^{-1} = I + (1/b(s) - 1) u u*.
inline Matrix blaschke_inverse_eval(const BlaschkeFactor& f, cplx s) {
    const Index p = f.u.size();
    return identity(p) + (1.0 / blaschke_scalar(f.xi, s) - 1.0) * f.u * f.u.adjoint();
}

inline Realization blaschke_realization(const BlaschkeFactor& f) {
    f.validate();
    const double g = std::sqrt(2.0 * f.xi.real());
    const Index p = f.u.size();
    return {Matrix::Constant(1, 1, -std::conj(f.xi)), g * f.u.adjoint(), -g * f.u, identity(p)};
}

inline Realization blaschke_inverse_realization(const BlaschkeFactor& f) {
    f.validate();
    const double g = std::sqrt(2.0 * f.xi.real());
    const Index p = f.u.size();
    return {Matrix::Constant(1, 1, f.xi), g * f.u.adjoint(), g * f.u, identity(p)};
}

// ---------------------------------------------------------------------------
// Zeros of inner functions
// ---------------------------------------------------------------------------

struct InnerZero {
    cplx xi;
    Index multiplicity = 0;
    std::vector<Index> jordan_blocks;  // partial multiplicities of the zero
    Matrix kernel;                     // orthonormal basis of ker T(xi)
};

struct ZeroStructure {
    std::vector<InnerZero> zeros;
    double cluster_tolerance = 0.0;

    [[nodiscard]] Index total_multiplicity() const {
        Index m = 0;
        for (const auto& z : zeros) m += z.multiplicity;
        return m;
    }
};

namespace detail {

/// The `count` right singular vectors of m for its smallest singular values.
inline Matrix smallest_right_vectors(const Matrix& m, Index count) {
    Eigen::JacobiSVD<Matrix> dec(m, Eigen::ComputeFullV);
    return dec.matrixV().rightCols(count);
}

}  // namespace detail

/// Zeros of an inner T in the right half-plane: clustered eigenvalues of
/// A - B D^{-1} C. The kernel dimension of T(xi) is the number of Jordan
/// blocks of the cluster.
inline ZeroStructure zero_structure(const Realization& t, double cluster_tol = -1.0, double inner_tol = 1e-7) {
    t.validate();
    if (!is_stable(t) || unitarity_residual(t) > inner_tol)
        throw Error(ErrorKind::NotInner, "zero_structure: function is not inner on the frequency grid");
    const auto lu = t.D.fullPivLu();
    if (!lu.isInvertible()) throw Error(ErrorKind::Singular, "zero_structure: D is singular");
    const Matrix az = t.A - t.B * lu.solve(t.C);
    const SpectrumReport rep = eig(az, cluster_tol);
    ZeroStructure out;
    out.cluster_tolerance = rep.cluster_tolerance;
    for (const auto& c : rep.clusters) {
        if (c.center.real() <= rep.cluster_tolerance) continue;
        InnerZero z;
        z.xi = c.center;
        z.multiplicity = c.multiplicity;
        z.jordan_blocks = c.jordan_blocks;
        const Index d = std::min<Index>(static_cast<Index>(c.jordan_blocks.size()), t.inputs());
        z.kernel = detail::smallest_right_vectors(detail::evaluate_unchecked(t, z.xi), d);
        out.zeros.push_back(std::move(z));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Interpolation vector
// ---------------------------------------------------------------------------

enum class ReductionCase { single_direction, vanishing_takagi_value, balanced_takagi_pair };

inline const char* to_string(ReductionCase c) {
    switch (c) {
        case ReductionCase::single_direction: return "single kernel direction";
        case ReductionCase::vanishing_takagi_value: return "case (i): vanishing quadratic form direction";
        case ReductionCase::balanced_takagi_pair: return "case (ii): balanced Takagi pair";
    }
    return "?";
}

struct ReductionVector {
    Vector u;
    ReductionCase which = ReductionCase::single_direction;
    Index kernel_dim = 0;
    double kernel_residual = 0.0;     // ||T(xi) u||
    double derivative_residual = 0.0; // |u^T T'(xi) u|
};

/// Unit u with T(xi) u = 0 and u^T T'(xi) u = 0. With `free_coords` set, u is
/// restricted to the form [u~; 0] with u~ of that length.
inline ReductionVector find_reduction_vector(const Realization& t, const InnerZero& zero,
                                             std::optional<Index> free_coords = std::nullopt,
                                             double residual_tol = 1e-7) {
    if (zero.multiplicity < 2)
        throw Error(ErrorKind::ReductionFailure, "find_reduction_vector: zero has multiplicity 1 (reduction exhausted)");
    const Index p = t.inputs();
    const cplx xi = zero.xi;
    const Matrix value = detail::evaluate_unchecked(t, xi);
    const Matrix deriv = evaluate_derivative(t, xi);
    Matrix kernel = zero.kernel;
    if (free_coords) {
        const Index q = *free_coords;
        const Matrix restricted = value.leftCols(q);
        Eigen::JacobiSVD<Matrix> dec(restricted, Eigen::ComputeFullV);
        // singular values at the level of the unrestricted kernel count as zero
        const Eigen::JacobiSVD<Matrix> full(value);
        const Index d = zero.kernel.cols();
        const double level = d > 0 ? full.singularValues()(p - d) : 0.0;
        const double thr = std::max(1e-6, 100.0 * level);
        Index k = 0;
        for (Index i = 0; i < dec.singularValues().size(); ++i)
            if (dec.singularValues()(i) <= thr) ++k;
        k += q - dec.singularValues().size();
        kernel = Matrix::Zero(p, k);
        kernel.topRows(q) = dec.matrixV().rightCols(k);
    }
    const Index d = kernel.cols();
    if (d == 0)
        throw Error(ErrorKind::ReductionFailure, "find_reduction_vector: T(xi) has no admissible kernel direction");
    ReductionVector out;
    out.kernel_dim = d;
    Vector x;
    if (d == 1) {
        x = kernel.col(0);
        out.which = ReductionCase::single_direction;
    } else {
        const Matrix f = symmetric_part(kernel.transpose() * deriv * kernel);
        Tolerances loose;
        loose.symmetry = 1e-6;
        const TakagiResult tk = takagi(f, loose);
        Vector y = Vector::Zero(d);
        const double fscale = std::max(1.0, tk.lambda(d - 1));
        if (tk.lambda(0) <= 1e-9 * fscale) {
            y(0) = 1.0;
            out.which = ReductionCase::vanishing_takagi_value;
        } else {
            const double l1 = tk.lambda(0), l2 = tk.lambda(1);
            y(0) = std::sqrt(l2);
            y(1) = cplx(0.0, std::sqrt(l1));
            y /= std::sqrt(l1 + l2);
            out.which = ReductionCase::balanced_takagi_pair;
        }
        x = kernel * (tk.U.conjugate() * y);
    }
    out.u = x / x.norm();
    out.kernel_residual = (value * out.u).norm();
    out.derivative_residual = std::abs((out.u.transpose() * deriv * out.u)(0, 0));
    const double scale = 1.0 + norm2(deriv);
    if (out.kernel_residual > residual_tol * scale || out.derivative_residual > residual_tol * scale)
        throw Error(ErrorKind::ReductionFailure,
                    "find_reduction_vector: interpolation conditions not met (||T(xi)u|| = " +
                        std::to_string(out.kernel_residual) + ", |u^T T'(xi) u| = " +
                        std::to_string(out.derivative_residual) + ")");
    return out;
}

// ---------------------------------------------------------------------------
// One reduction step
// ---------------------------------------------------------------------------

/// R = B^{-T} T B^{-1}. The product realization carries the two poles at xi,
/// which cancel under the interpolation conditions: they are split off by a
/// stable/anti-stable decoupling, and the remaining non-minimal part is
/// removed by balanced truncation. Throws unless the degree drops by exactly 2.
inline Realization reduce_once(const Realization& t, const BlaschkeFactor& f, double hsv_tol = 1e-4) {
    t.validate();
    f.validate();
    const Index before = t.states();
    const Realization binv = blaschke_inverse_realization(f);
    const Realization product = multiply(transpose(binv), multiply(t, binv));
    auto [stable, anti] = stable_projection(product);
    if (anti.states() != 2)
        throw Error(ErrorKind::ReductionFailure,
                    "reduce_once: expected 2 right half-plane poles, found " + std::to_string(anti.states()));
    // the anti-stable remainder must vanish for the division to be analytic
    double leak = 0.0;
    for (double w : {0.0, 1.0, -1.0, 10.0}) leak = std::max(leak, norm2(evaluate(anti, {0.0, w})));
    if (leak > 1e-6)
        throw Error(ErrorKind::ReductionFailure,
                    "reduce_once: division leaves a right half-plane pole (residue " + std::to_string(leak) + ")");
    const BalancedResult bal = balanced_minimal(stable, hsv_tol);
    const Realization& out = bal.realization;
    if (out.states() != before - 2)
        throw Error(ErrorKind::ReductionFailure, "reduce_once: degree went from " + std::to_string(before) + " to " +
                                                     std::to_string(out.states()) + " instead of dropping by 2");
    return out;
}

// ---------------------------------------------------------------------------
// Minimal symmetric inner extension
// ---------------------------------------------------------------------------

struct MinimizeOptions {
    Tolerances tol;
    std::optional<double> mobius;   // omega0 for the change of variable
    double cluster_tol = -1.0;      // absolute; < 0 selects the default radius
    double max_cluster_rel = 1e-3;  // loosest relative radius tried for zero clustering
    double hsv_tol = 1e-4;
};

struct ReductionStep {
    cplx xi;
    Vector u;
    Index multiplicity = 0;
    ReductionCase which = ReductionCase::single_direction;
    Index degree_before = 0;
    Index degree_after = 0;
    double unitarity_residual = 0.0;
    double symmetry_residual = 0.0;
    double cluster_tolerance = 0.0;
};

struct MinimalSymmetricResult {
    Realization extension;  // 2p x 2p, lower-right block = S
    Index degree = 0;
    Index target = 0;  // n + kappa
    Index n = 0;
    Index kappa = 0;
    Index n0 = 0;
    Index initial_degree = 0;  // degree of Sigma_{P_min}
    Matrix P_min;
    Matrix P_max;
    std::vector<ReductionStep> steps;
    double unitarity_residual = 0.0;
    double symmetry_residual = 0.0;
    double block_residual = 0.0;
    bool symmetric_realization = false;
};

namespace detail {

inline std::string stage(const std::string& name, const Error& e) { return name + ": " + e.what(); }

/// Lower-right block of a 2p x 2p realization.
inline Realization lower_right(const Realization& r, Index p) {
    return {r.A, r.B.rightCols(p), r.C.bottomRows(p), r.D.bottomRightCorner(p, p)};
}

}  // namespace detail

/// Symmetric inner extension of minimal degree n + kappa for a symmetric Schur
/// function strictly contractive at infinity (or at i*omega0 with opts.mobius).
inline MinimalSymmetricResult minimize_symmetric(const Realization& input, const MinimizeOptions& opts = {}) {
    MinimalSymmetricResult res;
    Realization r;
    try {
        input.validate();
        if (input.inputs() != input.outputs())
            throw Error(ErrorKind::NotSymmetric, "transfer function is not square");
        r = mobius_precondition(input, opts.mobius);
        auto [m, cert] = minimal_realization(r, opts.tol.rank);
        if (!cert.minimal) r = m;
        r = symmetrize(r, opts.tol);
    } catch (const Error& e) {
        throw Error(e.kind(), detail::stage("symmetrize", e));
    }
    const Index p = r.outputs();
    res.n = r.states();

    SymmetricExtension sym;
    try {
        const HatData h = build_hat(r);
        const ExtremalSolutions sol = solve_extremal(h, opts.cluster_tol);
        res.kappa = sol.spectrum.kappa;
        res.n0 = sol.spectrum.n0;
        res.P_min = sol.minimal.P;
        res.P_max = sol.maximal.P;
        sym = symmetric_unitary_extension(build_extension(r, sol.minimal), opts.tol);
    } catch (const Error& e) {
        throw Error(e.kind(), detail::stage("extension", e));
    }
    res.target = res.n + res.kappa;
    res.initial_degree = sym.degree;
    Realization sigma = sym.sigma;

    const double base_rel = Tolerances{}.cluster;
    while (sigma.states() > res.target) {
        bool reduced = false;
        std::string last_error = "no zero of multiplicity >= 2";
        for (double rel = base_rel; rel <= opts.max_cluster_rel * 1.0001 && !reduced; rel *= 10.0) {
            const Matrix az = sigma.A - sigma.B * sigma.D.fullPivLu().solve(sigma.C);
            const double radius =
                (opts.cluster_tol >= 0.0 && rel == base_rel) ? opts.cluster_tol : default_cluster_radius(az, rel);
            ZeroStructure zs;
            try {
                zs = zero_structure(sigma, radius);
            } catch (const Error& e) {
                throw Error(e.kind(), detail::stage("reduction", e));
            }
            std::vector<const InnerZero*> order;
            for (const auto& z : zs.zeros)
                if (z.multiplicity >= 2) order.push_back(&z);
            std::stable_sort(order.begin(), order.end(), [](const InnerZero* a, const InnerZero* b) {
                if (a->multiplicity != b->multiplicity) return a->multiplicity > b->multiplicity;
                return std::abs(a->xi) < std::abs(b->xi);
            });
            for (const InnerZero* z : order) {
                try {
                    const ReductionVector rv = find_reduction_vector(sigma, *z, p);
                    Realization next = reduce_once(sigma, {z->xi, rv.u}, opts.hsv_tol);
                    ReductionStep step;
                    step.xi = z->xi;
                    step.u = rv.u;
                    step.multiplicity = z->multiplicity;
                    step.which = rv.which;
                    step.degree_before = sigma.states();
                    step.degree_after = next.states();
                    step.unitarity_residual = unitarity_residual(next);
                    step.symmetry_residual = symmetry_residual(next);
                    step.cluster_tolerance = radius;
                    res.steps.push_back(step);
                    sigma = std::move(next);
                    reduced = true;
                    break;
                } catch (const Error& e) {
                    last_error = e.what();
                }
            }
        }
        if (!reduced)
            throw Error(ErrorKind::ReductionFailure,
                        "reduction: stuck at degree " + std::to_string(sigma.states()) + " above the target " +
                            std::to_string(res.target) + " (" + last_error + ")");
    }
    if (sigma.states() != res.target)
        throw Error(ErrorKind::ReductionFailure, "reduction: final degree " + std::to_string(sigma.states()) +
                                                     " differs from n + kappa = " + std::to_string(res.target));

    sigma = mobius_restore(sigma, opts.mobius);
    try {
        sigma = symmetrize(sigma, opts.tol);
        res.symmetric_realization = true;
    } catch (const Error&) {
        res.symmetric_realization = false;
    }
    res.extension = sigma;
    res.degree = sigma.states();
    res.unitarity_residual = unitarity_residual(sigma);
    res.symmetry_residual = symmetry_residual(sigma);
    res.block_residual = transfer_distance(input, detail::lower_right(sigma, p));
    return res;
}

}  // namespace darlington
