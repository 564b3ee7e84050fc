#include <darlington/reduction.hpp>
#include <darlington/scalar.hpp>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace darlington;

namespace {

const double r3 = std::sqrt(3.0);

double coeff_distance(const Polynomial& a, const Polynomial& b) { return (a - b).norm(); }

std::vector<double> sorted_real_roots(const Polynomial& p) {
    std::vector<double> out;
    for (const auto& r : poly_roots(p))
        for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.center.real());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(Polynomials, ParaConjugate) {
    const Polynomial p{1.0, 1.0};
    EXPECT_LT(coeff_distance(p.para(), Polynomial{1.0, -1.0}), 1e-15);
    const Polynomial c{cplx(1, 2), cplx(0, 3), 4.0};
    EXPECT_LT(std::abs(c.para()(cplx(0.3, 0.7)) - std::conj(c(-std::conj(cplx(0.3, 0.7))))), 1e-13);
}

TEST(Polynomials, SquaredModulusOnImaginaryAxis) {
    const Polynomial q{1.0, 1.0};
    const cplx v = (q * q.para())(cplx(0.0, 2.0));
    EXPECT_NEAR(v.real(), 5.0, 1e-14);
    EXPECT_NEAR(v.imag(), 0.0, 1e-14);
}

TEST(Polynomials, RootsOfBiquadratic) {
    const Polynomial p{3.0, 0.0, -4.0, 0.0, 1.0};
    const auto roots = poly_roots(p);
    EXPECT_EQ(roots.size(), 4u);
    for (const auto& r : roots) EXPECT_EQ(r.multiplicity, 1);
    const auto re = sorted_real_roots(p);
    EXPECT_NEAR(re[0], -r3, 1e-12);
    EXPECT_NEAR(re[1], -1.0, 1e-12);
    EXPECT_NEAR(re[2], 1.0, 1e-12);
    EXPECT_NEAR(re[3], r3, 1e-12);
}

TEST(Polynomials, RootsRejectZero) {
    EXPECT_THROW(poly_roots(Polynomial{}), Error);
}

TEST(ComputeMu, ConstantOverFirstOrder) {
    const auto f = compute_mu(Polynomial{0.5}, Polynomial{1.0, 1.0});
    EXPECT_LT(coeff_distance(f.mu, Polynomial{0.75, 0.0, -1.0}), 1e-14);
    EXPECT_LT(coeff_distance(f.r1, Polynomial{1.0}), 1e-14);
    EXPECT_LT(coeff_distance(f.r2, Polynomial{r3 / 2.0, 1.0}), 1e-12);
    EXPECT_EQ(f.kappa, 1);
    EXPECT_LT(f.split_residual, 1e-12);
}

TEST(ComputeMu, PerfectSquare) {
    const Polynomial p1 = 0.6 * Polynomial{1.0, -2.0, 1.0};
    const Polynomial q{1.0, 2.0, 1.0};
    const auto f = compute_mu(p1, q);
    EXPECT_LT(coeff_distance(f.mu, 0.64 * Polynomial{1.0, 0.0, -2.0, 0.0, 1.0}), 1e-13);
    EXPECT_LT(coeff_distance(f.r1, Polynomial{1.0, 1.0}), 1e-6);
    EXPECT_LT(coeff_distance(f.r2, Polynomial{1.0}), 1e-14);
    EXPECT_EQ(f.kappa, 0);
    EXPECT_NEAR(f.c, 0.64, 1e-10);
    EXPECT_TRUE(admits_degree_preserving_symmetric_extension(f));
}

TEST(ComputeMu, FourSimpleRoots) {
    const auto f = compute_mu(Polynomial{-1.0, 1.0}, Polynomial{2.0, 3.0, 1.0});
    EXPECT_LT(coeff_distance(f.mu, Polynomial{3.0, 0.0, -4.0, 0.0, 1.0}), 1e-13);
    EXPECT_EQ(f.kappa, 2);
    EXPECT_FALSE(admits_degree_preserving_symmetric_extension(f));
}

TEST(ComputeMu, ImaginaryRootsGoToEvenPart) {
    // 1/(s+1): mu = -s^2, a double root at 0
    const auto f = compute_mu(Polynomial{1.0}, Polynomial{1.0, 1.0});
    EXPECT_EQ(f.kappa, 0);
    EXPECT_EQ(f.r0.degree(), 1);
    EXPECT_LT(coeff_distance(f.r0.para(), f.r0), 1e-15);
}

TEST(ComputeMu, Errors) {
    EXPECT_THROW(compute_mu(Polynomial{0.5}, Polynomial{-1.0, 1.0}), Error);   // unstable q
    EXPECT_THROW(compute_mu(Polynomial{2.0}, Polynomial{1.0, 1.0}), Error);    // |S(0)| = 2
    EXPECT_THROW(compute_mu(Polynomial{0.5, 0.5}, Polynomial{2.0, 3.0, 1.0}), Error);  // common root -1
    EXPECT_THROW(compute_mu(Polynomial{1.0, 1.0, 1.0}, Polynomial{1.0, 1.0}), Error);  // improper
}

TEST(SpectralFactor, Examples) {
    EXPECT_LT(coeff_distance(spectral_factor_poly(Polynomial{1.0, 0.0, -1.0}), Polynomial{1.0, 1.0}), 1e-12);
    EXPECT_LT(coeff_distance(spectral_factor_poly(0.64 * Polynomial{1.0, 0.0, -2.0, 0.0, 1.0}),
                             0.8 * Polynomial{1.0, 2.0, 1.0}),
              1e-6);
    EXPECT_LT(coeff_distance(spectral_factor_poly(Polynomial{0.75, 0.0, -1.0}), Polynomial{r3 / 2.0, 1.0}), 1e-12);
}

TEST(SpectralFactor, RejectsNegative) {
    EXPECT_THROW(spectral_factor_poly(Polynomial{-1.0, 0.0, 1.0}), Error);
}

TEST(ScalarExtension, ConstantOverFirstOrder) {
    const Polynomial p1{0.5}, q{1.0, 1.0};
    const auto e = scalar_minimal_extension(p1, q);
    EXPECT_EQ(e.degree, 2);
    EXPECT_EQ(e.expected_degree, 2);
    EXPECT_LE(e.unitarity_residual, 1e-8);
    EXPECT_LE(e.symmetry_residual, 1e-10);
    EXPECT_TRUE(is_stable(e.realization));
    for (double w : {0.0, 0.7, -4.0}) {
        const cplx s(0.0, w);
        EXPECT_LT(std::abs(evaluate(e.realization, s)(1, 1) - p1(s) / q(s)), 1e-10);
    }
}

TEST(ScalarExtension, ConstantTimesBlaschke) {
    const Polynomial p1 = 0.9 * Polynomial{1.0, -1.0}, q{1.0, 1.0};
    const auto e = scalar_minimal_extension(p1, q);
    EXPECT_LT(coeff_distance(e.factorization.mu, 0.19 * Polynomial{1.0, 0.0, -1.0}), 1e-13);
    EXPECT_EQ(e.factorization.kappa, 1);
    EXPECT_EQ(e.degree, 2);
    EXPECT_LE(e.unitarity_residual, 1e-8);
}

TEST(ScalarExtension, ExplicitEntriesForLowpass) {
    // 1/(s+1): [[-1/(s+1), -i s/(s+1)], [-i s/(s+1), 1/(s+1)]]
    const auto e = scalar_minimal_extension(Polynomial{1.0}, Polynomial{1.0, 1.0});
    EXPECT_EQ(e.degree, 1);
    for (double w : {0.0, 0.5, -3.0}) {
        const cplx s(0.0, w);
        const Matrix v = evaluate(e.realization, s);
        EXPECT_LT(std::abs(v(0, 0) + 1.0 / (s + 1.0)), 1e-12);
        EXPECT_LT(std::abs(v(0, 1) + cplx(0, 1) * s / (s + 1.0)), 1e-12);
        EXPECT_LT(std::abs(v(1, 0) - v(0, 1)), 1e-12);
        EXPECT_LT(std::abs(v(1, 1) - 1.0 / (s + 1.0)), 1e-12);
    }
    EXPECT_LE(e.unitarity_residual, 1e-10);
}

TEST(ScalarExtension, AgreesWithMatrixPipeline) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 6; ++t) {
        const auto [p1, q] = testing_support::random_scalar_problem(1 + t % 4, rng);
        const auto e = scalar_minimal_extension(p1, q);
        EXPECT_EQ(e.degree, e.expected_degree);
        EXPECT_LE(e.unitarity_residual, 1e-8);
        const auto res = minimize_symmetric(scalar_realization(p1, q));
        EXPECT_EQ(res.kappa, e.factorization.kappa);
        EXPECT_EQ(res.degree, e.degree);
    }
}
