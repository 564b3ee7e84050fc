#pragma once

// Shared generators and small oracles for the test binaries.

#include <darlington/realization.hpp>

#include <random>

namespace testing_support {

using namespace darlington;

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng, double spread = 1.0) {
    std::normal_distribution<double> nd(0.0, spread);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = cplx(nd(rng), nd(rng));
    return m;
}

inline Matrix random_unitary(Index n, std::mt19937_64& rng) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
    return qr.householderQ() * identity(n);
}

inline Matrix random_symmetric(Index n, std::mt19937_64& rng, double spread = 1.0) {
    const Matrix m = random_matrix(n, n, rng, spread);
    return (m + m.transpose()) / 2.0;
}

/// Dense log-frequency sampling of sup ||S(iw)||.
inline double dense_peak_gain(const Realization& r) {
    double g = norm2(r.D);
    for (int k = -4000; k <= 4000; ++k) {
        const double w = (k < 0 ? -1.0 : 1.0) * std::pow(10.0, -3.0 + 6.0 * std::abs(k) / 4000.0);
        g = std::max(g, norm2(detail::evaluate_unchecked(r, cplx(0.0, k == 0 ? 0.0 : w))));
    }
    return g;
}

/// Random minimal symmetric realization (A = A^T stable, C = B^T, D = D^T)
/// scaled so that the grid peak gain is `peak` and ||D|| <= peak.
inline Realization random_symmetric_schur(Index p, Index n, std::mt19937_64& rng, double peak = 0.9) {
    for (;;) {
        Matrix a = random_symmetric(n, rng);
        const double shift = max_real_part(poles({a, Matrix(n, 0), Matrix(0, n), Matrix(0, 0)}));
        std::uniform_real_distribution<double> margin(0.2, 1.5);
        a.diagonal().array() -= shift + margin(rng);
        const Matrix b = random_matrix(n, p, rng);
        Matrix d = random_symmetric(p, rng, 0.5);
        Realization r{a, b, b.transpose(), d};
        if (!kalman_check(r).minimal) continue;
        const double g = dense_peak_gain(r);
        const double k = peak / g;
        r.B *= std::sqrt(k);
        r.C *= std::sqrt(k);
        r.D *= k;
        return r;
    }
}

}  // namespace testing_support

#include <darlington/scalar.hpp>

namespace testing_support {

/// Random scalar Schur function p1/q: q stable of degree d with random
/// (possibly complex) roots, deg p1 <= d, scaled to grid peak `peak`.
inline std::pair<Polynomial, Polynomial> random_scalar_problem(int d, std::mt19937_64& rng, double peak = 0.9) {
    std::uniform_real_distribution<double> re(0.3, 3.0), im(-2.0, 2.0), coin(0.0, 1.0);
    for (;;) {
        std::vector<cplx> qr, pr;
        for (int k = 0; k < d; ++k) qr.emplace_back(-re(rng), coin(rng) < 0.5 ? 0.0 : im(rng));
        const int dp = static_cast<int>(coin(rng) * (d + 1));
        for (int k = 0; k < std::min(dp, d); ++k) pr.emplace_back(im(rng), im(rng));
        const Polynomial q = Polynomial::from_roots(qr);
        Polynomial p1 = Polynomial::from_roots(pr, cplx(im(rng), im(rng)));
        if (coprimality_margin(p1, q) < 1e-6) continue;
        const Realization r = scalar_realization(p1, q);
        const double g = dense_peak_gain(r);
        p1 = (peak / g) * p1;
        return {p1, q};
    }
}

}  // namespace testing_support
