#pragma once

// Scalar case: S = p1/q. The explicit minimal symmetric inner extension is
// built from the parity split of mu = q q* - p1 p1*.

#include "realization.hpp"

#include <string>
#include <vector>

namespace darlington {

/// Polynomial with complex coefficients in ascending degree.
class Polynomial {
public:
    Polynomial() : c_{cplx(0.0)} {}
    Polynomial(std::initializer_list<cplx> coeffs) : c_(coeffs) { trim(); }
    explicit Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial constant(cplx v) { return Polynomial(std::vector<cplx>{v}); }

    /// lead * prod (s - r).
    static Polynomial from_roots(const std::vector<cplx>& roots, cplx lead = 1.0) {
        Polynomial p = constant(lead);
        for (const auto& r : roots) p = p * Polynomial({-r, 1.0});
        return p;
    }

    [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] bool is_zero() const { return c_.size() == 1 && c_[0] == cplx(0.0); }
    [[nodiscard]] cplx lead() const { return c_.back(); }
    [[nodiscard]] const std::vector<cplx>& coeffs() const { return c_; }
    [[nodiscard]] cplx operator[](int k) const { return k < static_cast<int>(c_.size()) ? c_[static_cast<size_t>(k)] : 0.0; }

    [[nodiscard]] cplx operator()(cplx s) const {
        cplx v = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * s + *it;
        return v;
    }

    /// p*(s) = conj(p(-conj(s))): conjugated coefficients with alternating sign.
    [[nodiscard]] Polynomial para() const {
        std::vector<cplx> out(c_.size());
        for (size_t k = 0; k < c_.size(); ++k) out[k] = (k % 2 ? -1.0 : 1.0) * std::conj(c_[k]);
        return Polynomial(out);
    }

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (const auto& v : c_) s += std::norm(v);
        return std::sqrt(s);
    }

    /// Drop leading coefficients below rel * ||p||.
    [[nodiscard]] Polynomial trimmed(double rel) const {
        std::vector<cplx> out = c_;
        const double thr = rel * norm();
        while (out.size() > 1 && std::abs(out.back()) <= thr) out.pop_back();
        return Polynomial(out);
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<cplx> out(std::max(a.c_.size(), b.c_.size()), 0.0);
        for (size_t k = 0; k < out.size(); ++k) out[k] = a[static_cast<int>(k)] + b[static_cast<int>(k)];
        return Polynomial(out);
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }
    friend Polynomial operator*(cplx k, const Polynomial& a) {
        std::vector<cplx> out = a.c_;
        for (auto& v : out) v *= k;
        return Polynomial(out);
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        std::vector<cplx> out(a.c_.size() + b.c_.size() - 1, 0.0);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(out);
    }

private:
    void trim() {
        if (c_.empty()) c_.push_back(0.0);
        while (c_.size() > 1 && c_.back() == cplx(0.0)) c_.pop_back();
    }
    std::vector<cplx> c_;
};

inline Polynomial power(const Polynomial& p, int k) {
    Polynomial out = Polynomial::constant(1.0);
    for (int i = 0; i < k; ++i) out = out * p;
    return out;
}

struct RootCluster {
    cplx center;
    int multiplicity = 0;
};

/// Roots from the companion matrix, clustered at radius tol_rel * (1 + max |root|).
inline std::vector<RootCluster> poly_roots(const Polynomial& p, double tol_rel = 1e-6) {
    if (p.is_zero()) throw Error(ErrorKind::InvalidInput, "poly_roots: zero polynomial");
    const int d = p.degree();
    std::vector<RootCluster> out;
    if (d == 0) return out;
    Matrix comp = Matrix::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -p[i] / p.lead();
    const SchurForm s = schur(comp);
    std::vector<cplx> roots;
    double rmax = 0.0;
    for (int i = 0; i < d; ++i) {
        roots.push_back(s.T(i, i));
        rmax = std::max(rmax, std::abs(s.T(i, i)));
    }
    const auto groups = cluster_values(roots, tol_rel * (1.0 + rmax), nullptr);
    for (const auto& g : groups) {
        cplx c = 0.0;
        for (Index i : g) c += roots[static_cast<size_t>(i)];
        out.push_back({c / static_cast<double>(g.size()), static_cast<int>(g.size())});
    }
    return out;
}

/// Smallest singular value of the Sylvester matrix of (a, b), relative to
/// its largest: zero iff a and b share a root.
inline double coprimality_margin(const Polynomial& a, const Polynomial& b) {
    const int m = a.degree(), n = b.degree();
    if (m + n == 0) return 1.0;
    Matrix syl = Matrix::Zero(m + n, m + n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) syl(i, i + k) = a[m - k];
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) syl(n + i, i + k) = b[n - k];
    Eigen::JacobiSVD<Matrix> sv(syl);
    return sv.singularValues()(m + n - 1) / sv.singularValues()(0);
}

// ---------------------------------------------------------------------------
// mu and its parity split
// ---------------------------------------------------------------------------

/// mu = c (r1 r1*)^2 r2 r2* r0^2 with r1, r2 stable, r2 with simple roots and
/// r0 collecting the imaginary-axis roots at half multiplicity, normalized so
/// that r0* = r0.
struct ScalarFactorization {
    Polynomial mu;
    Polynomial r0;
    Polynomial r1;
    Polynomial r2;
    double c = 0.0;
    Index kappa = 0;
    std::vector<RootCluster> mu_roots;
    double split_residual = 0.0;  // coefficient error of the reassembled mu, relative
};

namespace detail {

inline void check_scalar_problem(const Polynomial& p1, const Polynomial& q) {
    if (q.is_zero()) throw Error(ErrorKind::InvalidInput, "scalar problem: q is zero");
    if (p1.degree() > q.degree()) throw Error(ErrorKind::InvalidInput, "scalar problem: deg p1 > deg q (not proper)");
    for (const auto& r : poly_roots(q))
        if (!(r.center.real() < 0.0)) throw Error(ErrorKind::InvalidInput, "scalar problem: q is not stable");
    if (!p1.is_zero() && q.degree() > 0 && coprimality_margin(p1, q) < 1e-10)
        throw Error(ErrorKind::InvalidInput, "scalar problem: p1 and q have a common root");
    for (double w : frequency_grid()) {
        const cplx s(0.0, w);
        if (std::abs(p1(s)) > std::abs(q(s)) * (1.0 + 1e-9))
            throw Error(ErrorKind::NotContractive,
                        "scalar problem: |p1(iw)| > |q(iw)| at w = " + std::to_string(w));
    }
}

}  // namespace detail

inline ScalarFactorization compute_mu(const Polynomial& p1, const Polynomial& q) {
    detail::check_scalar_problem(p1, q);
    ScalarFactorization f;
    f.mu = (q * q.para() - p1 * p1.para()).trimmed(1e-13);
    if (f.mu.is_zero() || f.mu.norm() <= 1e-13 * (q.norm() * q.norm()))
        throw Error(ErrorKind::NotContractive, "compute_mu: mu vanishes identically (S is inner)");
    f.mu_roots = poly_roots(f.mu);
    const double band = 1e-6 * (1.0 + [&] {
                            double m = 0.0;
                            for (const auto& r : f.mu_roots) m = std::max(m, std::abs(r.center));
                            return m;
                        }());
    std::vector<cplx> r0_roots, r1_roots, r2_roots;
    for (const auto& r : f.mu_roots) {
        if (std::abs(r.center.real()) <= band) {
            if (r.multiplicity % 2 != 0)
                throw Error(ErrorKind::NotContractive,
                            "compute_mu: imaginary-axis root of mu with odd multiplicity (|S| > 1 nearby)");
            for (int k = 0; k < r.multiplicity / 2; ++k) r0_roots.push_back(cplx(0.0, r.center.imag()));
        } else if (r.center.real() < 0.0) {
            for (int k = 0; k < r.multiplicity / 2; ++k) r1_roots.push_back(r.center);
            if (r.multiplicity % 2 == 1) r2_roots.push_back(r.center);
        }
    }
    f.r1 = Polynomial::from_roots(r1_roots);
    f.r2 = Polynomial::from_roots(r2_roots);
    // (-i s - w) = -i (s - i w) is its own para-conjugate
    f.r0 = Polynomial::from_roots(r0_roots, std::pow(cplx(0.0, -1.0), static_cast<double>(r0_roots.size())));
    f.kappa = static_cast<Index>(r2_roots.size());
    const Polynomial r11 = f.r1 * f.r1.para();
    const Polynomial shape = r11 * r11 * f.r2 * f.r2.para() * f.r0 * f.r0;
    if (shape.degree() != f.mu.degree())
        throw Error(ErrorKind::InvalidInput, "compute_mu: root multiplicities of mu are not para-symmetric");
    const cplx ratio = f.mu.lead() / shape.lead();
    if (std::abs(ratio.imag()) > 1e-6 * std::abs(ratio) || ratio.real() <= 0.0)
        throw Error(ErrorKind::InvalidInput, "compute_mu: parity split constant is not positive");
    f.c = ratio.real();
    f.split_residual = (f.mu - f.c * shape).norm() / f.mu.norm();
    return f;
}

/// Stable p2 with p2 p2* = m for m >= 0 on the imaginary axis.
inline Polynomial spectral_factor_poly(const Polynomial& m) {
    if (m.is_zero()) throw Error(ErrorKind::InvalidInput, "spectral_factor_poly: zero polynomial");
    for (double w : frequency_grid()) {
        const cplx v = m(cplx(0.0, w));
        if (v.real() < -1e-10 * m.norm())
            throw Error(ErrorKind::InvalidInput, "spectral_factor_poly: m is negative on the imaginary axis");
    }
    const auto roots = poly_roots(m);
    double rmax = 0.0;
    for (const auto& r : roots) rmax = std::max(rmax, std::abs(r.center));
    const double band = 1e-6 * (1.0 + rmax);
    std::vector<cplx> stable;
    for (const auto& r : roots) {
        if (std::abs(r.center.real()) <= band) {
            if (r.multiplicity % 2 != 0)
                throw Error(ErrorKind::InvalidInput, "spectral_factor_poly: imaginary-axis root of odd multiplicity");
            for (int k = 0; k < r.multiplicity / 2; ++k) stable.push_back(cplx(0.0, r.center.imag()));
        } else if (r.center.real() < 0.0) {
            for (int k = 0; k < r.multiplicity; ++k) stable.push_back(r.center);
        }
    }
    const int d = static_cast<int>(stable.size());
    if (2 * d != m.degree())
        throw Error(ErrorKind::InvalidInput, "spectral_factor_poly: roots are not symmetric about the imaginary axis");
    const cplx lead_sq = m.lead() * (d % 2 ? -1.0 : 1.0);
    if (lead_sq.real() <= 0.0) throw Error(ErrorKind::InvalidInput, "spectral_factor_poly: leading coefficient has the wrong sign");
    const Polynomial p2 = Polynomial::from_roots(stable, std::sqrt(lead_sq.real()));
    if ((p2 * p2.para() - m).norm() > 1e-8 * m.norm())
        throw Error(ErrorKind::InvalidInput, "spectral_factor_poly: reassembled factor does not match");
    return p2;
}

// ---------------------------------------------------------------------------
// Realizations of scalar and 2x2 rational functions
// ---------------------------------------------------------------------------

/// Controllable canonical realization of N(s)/den(s) for a column of
/// numerators, deg N <= deg den.
inline Realization column_realization(const std::vector<Polynomial>& nums, const Polynomial& den) {
    const int d = den.degree();
    const Index rows = static_cast<Index>(nums.size());
    Realization r{Matrix::Zero(d, d), Matrix::Zero(d, 1), Matrix::Zero(rows, d), Matrix::Zero(rows, 1)};
    const cplx lead = den.lead();
    for (int i = 0; i + 1 < d; ++i) r.A(i, i + 1) = 1.0;
    for (int i = 0; i < d; ++i) r.A(d - 1, i) = -den[i] / lead;
    if (d > 0) r.B(d - 1, 0) = 1.0;
    for (Index k = 0; k < rows; ++k) {
        const Polynomial& n = nums[static_cast<size_t>(k)];
        if (n.degree() > d) throw Error(ErrorKind::InvalidInput, "column_realization: improper entry");
        const cplx dk = n[d] / lead;
        r.D(k, 0) = dk;
        for (int i = 0; i < d; ++i) r.C(k, i) = (n[i] - dk * den[i]) / lead;
    }
    return r;
}

/// Realization of p1/q.
inline Realization scalar_realization(const Polynomial& p1, const Polynomial& q) {
    return column_realization({p1}, q);
}

struct ScalarExtension {
    Realization realization;  // 2x2, symmetric, inner
    Index degree = 0;
    Index expected_degree = 0;  // deg(r2 q)
    ScalarFactorization factorization;
    Polynomial denominator;  // q r2
    Polynomial n11, n12, n22;
    double unitarity_residual = 0.0;
    double symmetry_residual = 0.0;
};

/// [[-p1* r2*/(q r2), sqrt(c) r1 r1* r2* r0 / q], [same, p1/q]] over the
/// common denominator q r2.
inline ScalarExtension scalar_minimal_extension(const Polynomial& p1, const Polynomial& q) {
    ScalarExtension e;
    e.factorization = compute_mu(p1, q);
    const auto& f = e.factorization;
    e.denominator = q * f.r2;
    e.n11 = -1.0 * (p1.para() * f.r2.para());
    e.n12 = std::sqrt(f.c) * (f.r1 * f.r1.para() * f.r2.para() * f.r0 * f.r2);
    e.n22 = p1 * f.r2;
    e.expected_degree = e.denominator.degree();
    const Realization col1 = column_realization({e.n11, e.n12}, e.denominator);
    const Realization col2 = column_realization({e.n12, e.n22}, e.denominator);
    const Realization stacked{block_diag(col1.A, col2.A), block_diag(col1.B, col2.B), hstack(col1.C, col2.C),
                              hstack(col1.D, col2.D)};
    auto [m, cert] = minimal_realization(stacked);
    e.degree = cert.mcmillan_degree;
    Realization out = m;
    if (is_stable(m)) out = balanced_minimal(m, 1e-9).realization;
    try {
        out = symmetrize(out);
    } catch (const Error&) {
    }
    e.realization = out;
    e.unitarity_residual = unitarity_residual(out);
    e.symmetry_residual = symmetry_residual(out);
    return e;
}

/// A degree-preserving symmetric inner extension exists iff every
/// right-half-plane zero of 1 - S S* has even multiplicity.
inline bool admits_degree_preserving_symmetric_extension(const ScalarFactorization& f) { return f.kappa == 0; }

}  // namespace darlington
