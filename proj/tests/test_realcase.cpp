#include <darlington/realcase.hpp>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace darlington;

namespace {

const double r3 = std::sqrt(3.0);

Realization diag_f(double zeta) { return {-zeta * identity(2), identity(2), identity(2), Matrix::Zero(2, 2)}; }

Matrix complex_p() {
    Matrix p(2, 2);
    p << 2.0, cplx(0, r3), cplx(0, -r3), 2.0;
    return p;
}

Matrix signature(std::initializer_list<double> d) {
    Matrix j = Matrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
    Index i = 0;
    for (double v : d) j(i, i) = v, ++i;
    return j;
}

// A = J M - sigma I with M real symmetric, C = B^T J, D real symmetric
SignatureRealization random_signature(Index n, Index p, Index positive, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix j = identity(n);
    for (Index i = positive; i < n; ++i) j(i, i) = -1.0;
    for (;;) {
        Matrix m(n, n), b(n, p), d(p, p);
        for (Index a = 0; a < n; ++a)
            for (Index c = 0; c <= a; ++c) m(a, c) = m(c, a) = nd(rng);
        for (Index a = 0; a < n; ++a)
            for (Index c = 0; c < p; ++c) b(a, c) = nd(rng);
        for (Index a = 0; a < p; ++a)
            for (Index c = 0; c <= a; ++c) d(a, c) = d(c, a) = 0.3 * nd(rng);
        Matrix a = j * m;
        a.diagonal().array() -= max_real_part(poles({a, Matrix(n, 0), Matrix(0, n), Matrix(0, 0)})) + 0.5;
        Realization r{a, b, b.transpose() * j, d};
        if (!kalman_check(r).minimal) continue;
        const double k = 0.8 / testing_support::dense_peak_gain(r);
        r.B *= std::sqrt(k);
        r.C *= std::sqrt(k);
        r.D *= k;
        return {r, j};
    }
}

}  // namespace

TEST(RealExtension, DiagZetaOne) {
    const Realization r = diag_f(1.0);
    const auto sol = solve_extremal(build_hat(r));
    const auto chk = is_real_extension(sol.minimal, r);
    EXPECT_TRUE(chk.real);
    EXPECT_TRUE(chk.certificate_agrees);
}

TEST(RealExtension, ComplexSolutionGivesComplexExtension) {
    const Realization r = diag_f(2.0);
    const auto chk = is_real_extension(make_solution(build_hat(r), complex_p()), r);
    EXPECT_FALSE(chk.real);
    EXPECT_GT(chk.conjugate_residual, 1e-3);
    EXPECT_TRUE(chk.certificate_agrees);
}

TEST(RealExtension, RealMinimalSolutionIsNotSymmetric) {
    const Realization r = diag_f(2.0);
    const auto sol = solve_extremal(build_hat(r));
    const auto chk = is_real_extension(sol.minimal, r);
    EXPECT_TRUE(chk.real);
    EXPECT_GT(norm2(sol.minimal.P * sol.minimal.P.transpose() - identity(2)), 0.5);
    EXPECT_GT(symmetry_residual(build_extension(r, sol.minimal).full), 1e-3);
}

TEST(RealExtension, RejectsComplexRealization) {
    Realization r = diag_f(2.0);
    r.A(0, 0) = cplx(-2.0, 0.5);
    const auto sol = solve_extremal(build_hat(r));
    EXPECT_THROW(is_real_extension(sol.minimal, r), Error);
}

TEST(Feasibility, DiagZetaOneFeasible) {
    const auto rep = real_symmetric_feasibility({diag_f(1.0), identity(2)});
    EXPECT_TRUE(rep.feasible);
    ASSERT_TRUE(rep.witness.has_value());
    EXPECT_LT(norm2(*rep.witness - identity(2)), 1e-7);
    const Realization r = diag_f(1.0);
    const ExtensionBlocks e = build_extension(r, make_solution(build_hat(r), *rep.witness));
    EXPECT_LE(e.unitarity_residual, 1e-7);
    EXPECT_LE(symmetry_residual(e.full), 1e-7);
    EXPECT_LE(conjugate_symmetry_residual(e.full), 1e-7);
}

TEST(Feasibility, DiagZetaTwoInfeasible) {
    const auto rep = real_symmetric_feasibility({diag_f(2.0), identity(2)});
    EXPECT_FALSE(rep.feasible);
    EXPECT_FALSE(rep.obstruction.empty());
    EXPECT_EQ(rep.candidates.size(), 4u);
}

TEST(Feasibility, ScalarFamilyOnTheBoundary) {
    // a = -c^2 / (1 - d) with d = 0, c = 1
    const Realization r{Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0),
                        Matrix::Zero(1, 1)};
    EXPECT_TRUE(real_symmetric_feasibility({r, identity(1)}).feasible);
    Realization off = r;
    off.A(0, 0) = -1.5;
    EXPECT_FALSE(real_symmetric_feasibility({off, identity(1)}).feasible);
}

TEST(Feasibility, RejectsBrokenSignature) {
    Realization r = diag_f(2.0);
    r.A(0, 1) = 0.5;
    EXPECT_THROW(real_symmetric_feasibility({r, signature({1.0, 1.0})}), Error);
}

TEST(Signature, TwoStateIndefiniteExample) {
    Matrix a(2, 2), b(2, 1);
    a << -1.0, 0.6, -0.6, -2.0;
    b << 0.8, 0.5;
    const Matrix j = signature({1.0, -1.0});
    const SignatureRealization sr{{a, b, b.transpose() * j, Matrix::Constant(1, 1, 0.1)}, j};
    EXPECT_NO_THROW(sr.validate());
    const auto sol = solve_extremal(build_hat(sr.realization));
    EXPECT_TRUE(is_real_matrix(sol.minimal.P, 1e-9));
    EXPECT_TRUE(is_real_matrix(sol.maximal.P, 1e-9));
    const auto rep = real_symmetric_feasibility(sr);
    EXPECT_EQ(rep.candidates.size(), 4u);
}

TEST(Signature, JConjugateTransposesTheExtension) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 6; ++t) {
        const Index n = 2 + t % 3;
        const SignatureRealization sr = random_signature(n, 1 + t % 2, 1 + t % n, rng);
        const Realization& r = sr.realization;
        const HatData h = build_hat(r);
        const auto sol = solve_extremal(h);
        EXPECT_TRUE(is_real_matrix(sol.minimal.P, 1e-9));
        EXPECT_TRUE(is_real_matrix(sol.maximal.P, 1e-9));
        EXPECT_TRUE(is_real_extension(sol.minimal, r).real);
        EXPECT_TRUE(is_real_extension(sol.maximal, r).real);
        const Matrix pt = j_conjugate(sol.minimal.P, sr.J);
        EXPECT_LE(riccati_residual(h, pt), riccati_tolerance(pt));
        const ExtensionBlocks e = build_extension(r, sol.minimal);
        const ExtensionBlocks et = build_extension(r, make_solution(h, pt));
        EXPECT_LT(transfer_distance(transpose(e.full), et.full), 1e-8);
    }
}
