#include <darlington/extension.hpp>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace darlington;

namespace {

const double r3 = std::sqrt(3.0);

Realization diag_f(double zeta) { return {-zeta * identity(2), identity(2), identity(2), Matrix::Zero(2, 2)}; }

Realization first_order(cplx a, cplx b, cplx c, cplx d) {
    return {Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b), Matrix::Constant(1, 1, c), Matrix::Constant(1, 1, d)};
}

Matrix complex_p() {
    Matrix p(2, 2);
    p << 2.0, cplx(0, r3), cplx(0, -r3), 2.0;
    return p;
}

}  // namespace

TEST(BuildExtension, DiagZetaMinimalSolution) {
    const Realization r = diag_f(2.0);
    const HatData h = build_hat(r);
    const auto sol = solve_extremal(h);
    const ExtensionBlocks e = build_extension(r, sol.minimal);
    EXPECT_LT(norm2(e.D11), 1e-15);
    EXPECT_LT(norm2(e.D12 - identity(2)), 1e-15);
    EXPECT_LT(norm2(e.D21 - identity(2)), 1e-15);
    EXPECT_LE(e.unitarity_residual, 1e-8);
    EXPECT_EQ(kalman_check(e.full).mcmillan_degree, 2);
    EXPECT_TRUE(is_unitary(e.full.D, 1e-14));
    EXPECT_LT(transfer_distance(e.S(), r), 1e-14);
}

TEST(BuildExtension, ScalarSpectralFactorOracle) {
    const Realization r = first_order(-1.0, 1.0, 0.5, 0.0);
    const auto sol = solve_extremal(build_hat(r));
    const ExtensionBlocks e = build_extension(r, sol.minimal);
    EXPECT_LE(e.unitarity_residual, 1e-8);
    // |S21(iw)|^2 + |S(iw)|^2 = 1 and S21 outer
    for (double w : frequency_grid()) {
        const cplx s21 = evaluate(e.S21(), {0, w})(0, 0);
        const cplx s = 0.5 / cplx(1.0, w);
        EXPECT_NEAR(std::norm(s21) + std::norm(s), 1.0, 1e-12);
    }
    for (const auto& z : poles(invert(e.S21()))) EXPECT_LT(z.real(), 1e-9);
}

TEST(BuildExtension, RandomInstancesAreInner) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 10; ++t) {
        const Realization r = testing_support::random_symmetric_schur(1 + t % 3, 1 + t % 5, rng);
        const auto sol = solve_extremal(build_hat(r));
        for (const auto* s : {&sol.minimal, &sol.maximal}) {
            const ExtensionBlocks e = build_extension(r, *s);
            EXPECT_LE(e.unitarity_residual, 1e-8);
            EXPECT_EQ(kalman_check(e.full).mcmillan_degree, r.states());
            const Matrix lyap = r.A * s->P + s->P * r.A.adjoint() + e.B1 * e.B1.adjoint() + r.B * r.B.adjoint();
            EXPECT_LT(norm2(lyap), 1e-8 * (1.0 + norm2(s->P)));
        }
        // distinct P give distinct S21
        EXPECT_GT(transfer_distance(build_extension(r, sol.minimal).S21(), build_extension(r, sol.maximal).S21()),
                  1e-8);
    }
}

TEST(BuildExtension, RejectsBadResidual) {
    const Realization r = diag_f(2.0);
    const HatData h = build_hat(r);
    EXPECT_THROW(build_extension(r, make_solution(h, identity(2))), Error);
}

TEST(Gauge, IdentityAndRandom) {
    std::mt19937_64 rng(5);
    const Realization r = testing_support::random_symmetric_schur(2, 3, rng);
    const auto sol = solve_extremal(build_hat(r));
    const ExtensionBlocks e = build_extension(r, sol.minimal);
    const ExtensionBlocks same = apply_gauge(e, identity(2), identity(2));
    EXPECT_LT(transfer_distance(same.full, e.full), 1e-15);
    const ExtensionBlocks g =
        apply_gauge(e, testing_support::random_unitary(2, rng), testing_support::random_unitary(2, rng));
    EXPECT_LE(g.unitarity_residual, 1e-8);
    EXPECT_LT(transfer_distance(g.S(), r), 1e-14);
    EXPECT_THROW(apply_gauge(e, 2.0 * identity(2), identity(2)), Error);
}

TEST(Gauge, TransposedGaugeKeepsSymmetry) {
    const Realization r = diag_f(2.0);
    const HatData h = build_hat(r);
    const ExtensionBlocks e = build_extension(r, make_solution(h, complex_p()));
    std::mt19937_64 rng(6);
    const Matrix u2 = testing_support::random_unitary(2, rng);
    const ExtensionBlocks g = apply_gauge(e, u2.transpose(), u2);
    EXPECT_LT(symmetry_residual(g.full), 1e-12);
    EXPECT_LE(g.unitarity_residual, 1e-8);
}

TEST(LeftFactor, RoundTripReproducesP) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 5; ++t) {
        const Realization r = testing_support::random_symmetric_schur(2, 3, rng);
        const auto sol = solve_extremal(build_hat(r));
        const ExtensionBlocks e = build_extension(r, sol.maximal);
        const ExtensionBlocks back = extension_from_left_factor(r, e.S21());
        EXPECT_LT(norm2(back.source.P - sol.maximal.P), 1e-9 * std::max(1.0, norm2(sol.maximal.P)));
        EXPECT_LT(norm2(back.C1 - e.C1), 1e-8 * std::max(1.0, norm2(e.C1)));
    }
}

TEST(LeftFactor, HandBuiltDegreeOne) {
    // A = -1, B = 1, C = 1/2, D = 0 and the outer factor with B1 = -p C*:
    // -2p + p^2/4 + 1 = 0, minimal root p = 4 - 2 sqrt(3)
    const double p = 4.0 - 2.0 * r3;
    const Realization r = first_order(-1.0, 1.0, 0.5, 0.0);
    const Realization s21 = first_order(-1.0, -p * 0.5, 0.5, 1.0);
    const ExtensionBlocks e = extension_from_left_factor(r, s21);
    EXPECT_NEAR(e.source.P(0, 0).real(), p, 1e-12);
    EXPECT_LE(e.unitarity_residual, 1e-10);
}

TEST(LeftFactor, RejectsWrongValueAtInfinity) {
    const Realization r = first_order(-1.0, 1.0, 0.5, 0.0);
    EXPECT_THROW(extension_from_left_factor(r, first_order(-1.0, 0.3, 0.5, 0.5)), Error);
}

TEST(Compare, SameExtensionGivesConstantIdentity) {
    const Realization r = diag_f(2.0);
    const auto sol = solve_extremal(build_hat(r));
    const ExtensionBlocks e = build_extension(r, sol.minimal);
    const QFactor q = compare_extensions(e, e);
    EXPECT_EQ(q.degree, 0);
    EXPECT_LT(norm2(q.realization.D - identity(2)), 1e-15);
}

TEST(Compare, MinToMaxInnerAndReverse) {
    const Realization r = diag_f(2.0);
    const auto sol = solve_extremal(build_hat(r));
    const ExtensionBlocks emin = build_extension(r, sol.minimal);
    const ExtensionBlocks emax = build_extension(r, sol.maximal);
    const QFactor q = compare_extensions(emin, emax);
    EXPECT_EQ(q.degree, 2);
    EXPECT_EQ(q.gamma_rank, 2);
    EXPECT_TRUE(q.inner_flag);
    EXPECT_TRUE(q.stable);
    EXPECT_TRUE(is_inner(q.realization));
    const QFactor qr = compare_extensions(emax, emin);
    EXPECT_EQ(qr.degree, 2);
    EXPECT_FALSE(qr.inner_flag);
    EXPECT_FALSE(qr.stable);
    EXPECT_LT(unitarity_residual(qr.realization), 1e-8);
}

TEST(Compare, ClosedFormMatchesProduct) {
    std::mt19937_64 rng(9);
    const Realization r = testing_support::random_symmetric_schur(2, 3, rng);
    const auto sol = solve_extremal(build_hat(r));
    const ExtensionBlocks emin = build_extension(r, sol.minimal);
    const ExtensionBlocks emax = build_extension(r, sol.maximal);
    const QFactor q = compare_extensions(emin, emax);
    const Realization product = multiply(invert(emin.S21()), emax.S21());
    EXPECT_LT(transfer_distance(product, q.realization), 1e-8);
}

TEST(SymmetricExtension, ComplexSolutionGivesConstantQ) {
    const Realization r = diag_f(2.0);
    const HatData h = build_hat(r);
    const Matrix p = complex_p();
    EXPECT_LT(norm2(p * p.transpose() - identity(2)), 1e-10);
    const auto se = symmetric_unitary_extension(build_extension(r, make_solution(h, p)));
    EXPECT_EQ(se.q.degree, 0);
    EXPECT_EQ(se.degree, 2);
    EXPECT_TRUE(se.inner);
    EXPECT_LE(se.unitarity_residual, 1e-8);
    EXPECT_LE(se.symmetry_residual, 1e-8);
}

TEST(SymmetricExtension, MinimalSolutionHasDegreeFour) {
    const Realization r = diag_f(2.0);
    const auto sol = solve_extremal(build_hat(r));
    const auto se = symmetric_unitary_extension(build_extension(r, sol.minimal));
    EXPECT_EQ(se.q.degree, 2);
    EXPECT_TRUE(se.inner);
    EXPECT_EQ(se.degree, 4);
    EXPECT_LE(se.unitarity_residual, 1e-8);
    EXPECT_LE(se.symmetry_residual, 1e-8);
    EXPECT_TRUE(is_stable(se.sigma));
}

TEST(SymmetricExtension, MaximalSolutionIsNotInner) {
    const Realization r = diag_f(2.0);
    const auto sol = solve_extremal(build_hat(r));
    const auto se = symmetric_unitary_extension(build_extension(r, sol.maximal));
    EXPECT_FALSE(se.inner);
    EXPECT_EQ(se.q.degree, 2);
    EXPECT_LE(se.unitarity_residual, 1e-8);
}

TEST(SymmetricExtension, RandomInstancesDegreeBound) {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 10; ++t) {
        const Realization r = testing_support::random_symmetric_schur(1 + t % 3, 1 + t % 4, rng);
        const HatData h = build_hat(r);
        const auto sol = solve_extremal(h);
        const auto se = symmetric_unitary_extension(build_extension(r, sol.minimal));
        EXPECT_TRUE(se.inner);
        EXPECT_GE(se.q.degree, sol.spectrum.kappa);
        EXPECT_EQ(se.degree, 2 * r.states() - sol.spectrum.n0);
        EXPECT_LE(se.unitarity_residual, 1e-8);
        EXPECT_LE(se.symmetry_residual, 1e-8);
    }
}

TEST(SymmetricExtension, RejectsNonSymmetricRealization) {
    std::mt19937_64 rng(11);
    Realization r = testing_support::random_symmetric_schur(2, 2, rng);
    const Matrix t = testing_support::random_matrix(2, 2, rng) + 3.0 * identity(2);
    r = similarity(r, t, t.inverse());
    const auto sol = solve_extremal(build_hat(r));
    EXPECT_THROW(symmetric_unitary_extension(build_extension(r, sol.minimal)), Error);
}
