#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace lure;
using namespace lure::testing;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }
Mat m1(double a) { return Mat::Constant(1, 1, a); }

QviProblem box_qvi(Mat a, Vec b, Mat d, double lo, double hi) {
    const Index n = b.size();
    return QviProblem(LipschitzMap::affine(std::move(a), std::move(b)), std::move(d),
                      MonotoneOperator::box(Vec::Constant(n, lo), Vec::Constant(n, hi)));
}

}  // namespace

TEST(QviLowering, ScalarExample) {
    const LureSystem sys = qvi_to_inclusion(scalar_qvi());
    EXPECT_TRUE(is_identity(sys.B()));
    EXPECT_TRUE(is_identity(sys.C()));
    EXPECT_EQ(validate(sys).mode, ValidationMode::Strict);
    SolverConfig cfg;
    cfg.tol = 1e-10;
    EXPECT_NEAR(equilibrium(sys, cfg).solution(0), 4.0 / 3.0, 1e-8);
}

TEST(QviLowering, RelayAsBoxQvi) {
    Mat a(2, 2);
    a << 9, -1, 1, 8;
    const QviProblem p = box_qvi(a, Vec::Zero(2), Mat::Zero(2, 2), -1.0, 1.0);
    const SolverReport rep = solve_qvi(p, SolverConfig{}, Vec{{1.0, 2.0}});
    ASSERT_TRUE(rep.converged());
    EXPECT_LE(rep.solution.norm(), 1e-7);
}

TEST(QviProblemTest, RejectsNonMonotoneD) {
    EXPECT_THROW(box_qvi(m1(1.0), v1(0.0), m1(-0.5), -1, 1), InvalidProblem);
    EXPECT_THROW(box_qvi(Mat::Identity(2, 2), Vec::Zero(2), m1(0.5), -1, 1), DimensionError);
}

TEST(MovingSet, ScalarExample) {
    const MovingSet k = moving_set_check(scalar_qvi(), v1(4.0 / 3.0));
    ASSERT_TRUE(k.lower && k.upper);
    EXPECT_NEAR((*k.lower)(0), -2.0 / 3.0, 1e-15);
    EXPECT_NEAR((*k.upper)(0), 4.0 / 3.0, 1e-15);
    EXPECT_TRUE(k.contains);
}

TEST(MovingSet, ConstantWhenForceVanishesOrDIsZero) {
    const MovingSet at_zero_force = moving_set_check(scalar_qvi(), v1(2.0));
    EXPECT_DOUBLE_EQ((*at_zero_force.lower)(0), -1.0);
    EXPECT_DOUBLE_EQ((*at_zero_force.upper)(0), 1.0);
    EXPECT_FALSE(at_zero_force.contains);

    Rng rng(51);
    const QviProblem p = box_qvi(Mat::Identity(2, 2), Vec{{-2.0, 1.0}}, Mat::Zero(2, 2), -1, 1);
    for (int k = 0; k < 10; ++k) {
        const MovingSet s = moving_set_check(p, random_vec(rng, 2));
        EXPECT_EQ(*s.lower, Vec::Constant(2, -1.0));
        EXPECT_EQ(*s.upper, Vec::Constant(2, 1.0));
    }
}

TEST(MovingSet, BallTranslates) {
    const QviProblem p(LipschitzMap::affine(Mat::Identity(2, 2), Vec::Zero(2)),
                       0.5 * Mat::Identity(2, 2), MonotoneOperator::ball(Vec::Zero(2), 1.0));
    const MovingSet s = moving_set_check(p, Vec{{2.0, 0.0}});
    ASSERT_TRUE(s.center.has_value());
    EXPECT_EQ(*s.center, (Vec{{-1.0, 0.0}}));
    EXPECT_DOUBLE_EQ(s.radius, 1.0);
    EXPECT_FALSE(s.contains);
}

TEST(SolveQvi, Examples) {
    SolverConfig cfg;
    cfg.tol = 1e-10;
    EXPECT_NEAR(solve_qvi(scalar_qvi(), cfg).solution(0), 4.0 / 3.0, 1e-8);
    const QviProblem inside = box_qvi(m1(1.0), v1(-0.3), m1(0.0), -1, 1);
    EXPECT_NEAR(solve_qvi(inside, cfg).solution(0), 0.3, 1e-9);
    const QviProblem outside = box_qvi(m1(1.0), v1(-5.0), m1(0.0), -1, 1);
    EXPECT_NEAR(solve_qvi(outside, cfg).solution(0), 1.0, 1e-9);
}

TEST(SolveQvi, GeneralOperatorForm) {
    // 0 in f(x) + Sign(x + D f(x)), f(x) = x - 2, D = 0.5: x + 0.5(x - 2) > 0 forces f(x) = -1.
    const QviProblem p(LipschitzMap::affine(m1(1.0), v1(-2.0)), m1(0.5), MonotoneOperator::sign(1));
    SolverConfig cfg;
    cfg.tol = 1e-10;
    const SolverReport rep = solve_qvi(p, cfg);
    ASSERT_TRUE(rep.converged());
    EXPECT_NEAR(rep.solution(0), 1.0, 1e-8);
    EXPECT_THROW(moving_set_check(p, v1(1.0)), std::invalid_argument);
}

TEST(QviResidual, HandCertifiedSolutionPassesInclusion) {
    const QviProblem p = scalar_qvi();
    EXPECT_LE(qvi_residual(p, v1(4.0 / 3.0)), 1e-15);
    EXPECT_LE(inclusion_residual(qvi_to_inclusion(p), v1(4.0 / 3.0)).value(), 1e-12);
    EXPECT_GT(qvi_residual(p, v1(1.0)), 1e-2);
}

TEST(DualConstantsTest, Examples) {
    const DualConstants id = dual_constants(LipschitzMap::affine(m1(1.0), v1(0.0)), m1(0.0));
    EXPECT_DOUBLE_EQ(id.mu_inv, 1.0);
    EXPECT_DOUBLE_EQ(id.lip_inv, 1.0);
    EXPECT_DOUBLE_EQ(id.mu_phi, 1.0);
    EXPECT_DOUBLE_EQ(id.lip_phi, 1.0);

    const DualConstants s = dual_constants(scalar_qvi().f, m1(0.5));
    EXPECT_DOUBLE_EQ(s.mu_inv, 1.0);
    EXPECT_DOUBLE_EQ(s.lip_inv, 1.0);
    EXPECT_NEAR(s.mu_phi, 1.0 / 2.25, 1e-15);
    EXPECT_DOUBLE_EQ(s.lip_phi, 1.0);

    const DualConstants two = dual_constants(LipschitzMap::affine(m1(2.0), v1(0.0)), m1(0.0));
    EXPECT_DOUBLE_EQ(two.mu_inv, 0.5);
    EXPECT_DOUBLE_EQ(two.lip_inv, 0.5);
    EXPECT_DOUBLE_EQ(two.mu_phi, 2.0);
    EXPECT_DOUBLE_EQ(two.lip_phi, 2.0);

    EXPECT_THROW(dual_constants(LipschitzMap::affine(m1(0.0), v1(0.0)), m1(0.0)),
                 std::invalid_argument);
}

TEST(EvalPhi, Examples) {
    EXPECT_NEAR(eval_phi(LipschitzMap::affine(m1(2.0), v1(0.0)), m1(0.5), v1(3.0)).value(0), 3.0,
                1e-14);
    const auto f = scalar_qvi().f;
    EXPECT_EQ(eval_phi(f, m1(0.0), v1(7.0)).value, f(v1(7.0)));
    EXPECT_NEAR(eval_phi(f, m1(0.5), v1(1.0)).value(0), -2.0 / 3.0, 1e-14);
}

TEST(EvalPhi, CertifiedInverseForNonlinearMaps) {
    Rng rng(52);
    for (int k = 0; k < 40; ++k) {
        const Index n = uniform_int(rng, 1, 3);
        const auto f = LipschitzMap::affine_tanh(random_monotone_mat(rng, n, 0.5),
                                                 random_vec(rng, n), uniform(rng, 0.0, 2.0));
        const Mat s = random_mat(rng, n, n, k % 2 == 0 ? 0.1 : 1.5);  // both contraction regimes
        const Mat d = s * s.transpose();
        const Vec y = random_vec(rng, n);
        const InnerSolve u = eval_phi(f, d, y, 1e-10);
        ASSERT_TRUE(u.converged) << k;
        EXPECT_LE((f(y - d * u.value) - u.value).norm(), 1e-10) << k;
    }
}

TEST(EvalPhi, DifferenceQuotientsWithinConstants) {
    Rng rng(53);
    for (int k = 0; k < 20; ++k) {
        const auto f = LipschitzMap::affine_tanh(m1(uniform(rng, 0.3, 2.0)), v1(uniform(rng, -1, 1)),
                                                 uniform(rng, 0.0, 1.0));
        const Mat d = m1(uniform(rng, 0.0, 2.0));
        const DualConstants c = dual_constants(f, d);
        for (int j = 0; j < 10; ++j) {
            const double y1 = uniform(rng, -5, 5);
            const double y2 = y1 + uniform(rng, 0.1, 2.0);
            const double q = (eval_phi(f, d, v1(y2), 1e-12).value(0) -
                              eval_phi(f, d, v1(y1), 1e-12).value(0)) /
                             (y2 - y1);
            EXPECT_GE(q, c.mu_phi - 1e-8) << k;
            EXPECT_LE(q, c.lip_phi + 1e-8) << k;
        }
    }
}

TEST(EvalPhi, SingularSystemRejected) {
    // I + A D singular: A = -2, D = 0.5.
    EXPECT_THROW(eval_phi(LipschitzMap::affine(m1(-2.0), v1(0.0)), m1(0.5), v1(1.0)),
                 InvalidProblem);
}

TEST(SolveQviDual, ScalarExample) {
    SolverConfig cfg;
    cfg.tol = 1e-12;
    const QviDualReport r = solve_qvi_dual(scalar_qvi(), cfg);
    ASSERT_TRUE(r.dual.converged());
    EXPECT_NEAR(r.y_star(0), 1.0, 1e-10);
    EXPECT_NEAR(r.x_star(0), 4.0 / 3.0, 1e-10);
    EXPECT_LE(r.qvi_residual, 1e-10);
}

TEST(SolveQviDual, ZeroDMatchesPrimal) {
    const QviProblem p = box_qvi(2.0 * Mat::Identity(2, 2), Vec{{-5.0, 0.4}}, Mat::Zero(2, 2), -1, 1);
    SolverConfig cfg;
    cfg.tol = 1e-11;
    const QviDualReport r = solve_qvi_dual(p, cfg);
    EXPECT_EQ(r.y_star, r.x_star);
    EXPECT_LE((r.x_star - Vec{{1.0, -0.2}}).norm(), 1e-10);
}

TEST(SolveQviDual, RejectsMerelyMonotone) {
    Mat skew(2, 2);
    skew << 0, 1, -1, 0;
    const QviProblem p = box_qvi(skew, Vec::Zero(2), Mat::Zero(2, 2), -1, 1);
    EXPECT_THROW(solve_qvi_dual(p, SolverConfig{}), std::invalid_argument);
}

TEST(SolveQviDual, AgreesWithPrimalOnRandomInstances) {
    // The dual step mu_phi / lip_phi^2 degrades like (mu / L)^4, so the
    // instances are kept well conditioned: A = a I + small skew part.
    Rng rng(54);
    for (int k = 0; k < 30; ++k) {
        const Index n = uniform_int(rng, 1, 4);
        const Mat kk = random_mat(rng, n, n, 0.3);
        const Mat a = uniform(rng, 1.0, 2.0) * Mat::Identity(n, n) + (kk - kk.transpose());
        const Mat s = random_mat(rng, n, n, 0.4);
        const QviProblem p = box_qvi(a, random_vec(rng, n), s * s.transpose(), -1.5, 1.0);
        SolverConfig cfg;
        cfg.tol = 1e-10;
        cfg.max_iter = 500000;
        const SolverReport primal = solve_qvi(p, cfg);
        const QviDualReport dual = solve_qvi_dual(p, cfg);
        ASSERT_TRUE(primal.converged()) << k;
        ASSERT_TRUE(dual.dual.converged()) << k << " " << dual.dual.message;
        EXPECT_LE((primal.solution - dual.x_star).norm(), 20 * 1e-8) << k;
    }
}
