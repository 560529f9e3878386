#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace lure;
using namespace lure::testing;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

ResolventOracle catalog_oracle(MonotoneOperator op) {
    return [op = std::move(op)](double g, const Vec& x) {
        InnerSolve r;
        r.value = op.resolvent(g, x);
        return r;
    };
}

FixedResolvent fixed_oracle(MonotoneOperator op, double gamma) {
    return [op = std::move(op), gamma](const Vec& x) {
        InnerSolve r;
        r.value = op.resolvent(gamma, x);
        return r;
    };
}

ResolventOracle relay_g() {
    const LureSystem sys = relay_system();
    return [g = composed_g(sys)](double gamma, const Vec& w) { return resolvent_G(g, gamma, w); };
}

LipschitzMap relay_f() { return relay_system().f(); }

}  // namespace

TEST(Tseng, RelayConvergesAtCompliantStep) {
    SolverConfig cfg;
    cfg.gamma = 0.1;
    const SolverReport rep = tseng_solve(relay_f(), relay_g(), relay_x0(), cfg);
    ASSERT_TRUE(rep.converged()) << rep.message;
    EXPECT_LE(rep.solution.norm(), 1e-6);
    EXPECT_LE(rep.certified_residual, cfg.tol);
    EXPECT_EQ(rep.residual_history.size(), static_cast<std::size_t>(rep.iterations));
}

TEST(Tseng, RelaySingleStepAtLargeStep) {
    // y0 = J_{0.5 G}((1,2) - 0.5 (7,17)) = (-2,-6); x1 = y0 - 0.5 (f(y0) - f(x0)).
    SolverConfig cfg;
    cfg.gamma = 0.5;
    cfg.max_iter = 1;
    const SolverReport rep = tseng_solve(relay_f(), relay_g(), relay_x0(), cfg);
    EXPECT_EQ(rep.status, SolverStatus::MaxIterReached);
    EXPECT_NEAR(rep.solution(0), 7.5, 1e-10);
    EXPECT_NEAR(rep.solution(1), 27.5, 1e-10);
    EXPECT_NEAR(rep.residual_history[0], (Vec{{3.0, 8.0}}).norm() / 0.5, 1e-10);
}

TEST(Tseng, RelayDivergesAtLargeStep) {
    SolverConfig cfg;
    cfg.gamma = 0.5;
    const SolverReport rep = tseng_solve(relay_f(), relay_g(), relay_x0(), cfg);
    EXPECT_EQ(rep.status, SolverStatus::Diverged);
    EXPECT_LT(rep.iterations, 50);
}

TEST(Tseng, DefaultStepIsBelowBound) {
    const SolverReport rep = tseng_solve(relay_f(), relay_g(), relay_x0(), SolverConfig{});
    EXPECT_NEAR(rep.gamma, 0.9 / relay_f().lipschitz(), 1e-15);
    EXPECT_TRUE(rep.converged());
}

TEST(Tseng, ProjectionOfZeroForce) {
    SolverConfig cfg;
    cfg.gamma = 1.0;
    const auto f = LipschitzMap::affine(Mat::Zero(1, 1), v1(0.0));
    const SolverReport rep =
        tseng_solve(f, catalog_oracle(MonotoneOperator::box(v1(-1.0), v1(1.0))), v1(5.0), cfg);
    ASSERT_TRUE(rep.converged());
    EXPECT_DOUBLE_EQ(rep.solution(0), 1.0);
    EXPECT_LE(rep.iterations, 2);
}

TEST(Tseng, StationarityCertificate) {
    // (x - gamma f(x) - y)/gamma lies in G(y), so v = (x - y)/gamma + f(y) - f(x) lies in
    // f(y) + G(y), with |v| <= residual (1 + gamma L) <= tol (2 + gamma L).
    Rng rng(31);
    for (int k = 0; k < 30; ++k) {
        const Index n = uniform_int(rng, 1, 4);
        const auto op = random_catalog(rng, n);
        const auto f = LipschitzMap::affine(random_monotone_mat(rng, n, 0.1), random_vec(rng, n));
        SolverConfig cfg;
        cfg.tol = 1e-8;
        cfg.max_iter = 100000;
        const SolverReport rep = tseng_solve(f, catalog_oracle(op), random_vec(rng, n), cfg);
        ASSERT_TRUE(rep.converged()) << op.name();
        const double g = rep.gamma;
        const Vec& x = rep.iterates.back();
        const Vec& y = rep.solution;
        EXPECT_LE(op.graph_residual(y, (x - g * f(x) - y) / g), 1e-10) << op.name();
        const Vec v = (x - y) / g + f(y) - f(x);
        EXPECT_LE(v.norm(), cfg.tol * (2.0 + g * f.lipschitz())) << op.name();
    }
}

TEST(Tseng, InnerFailureRejectsStep) {
    SolverConfig cfg;
    cfg.gamma = 0.1;
    const ResolventOracle failing = [](double, const Vec& x) {
        InnerSolve r;
        r.value = x;
        r.converged = false;
        return r;
    };
    const SolverReport rep = tseng_solve(relay_f(), failing, relay_x0(), cfg);
    EXPECT_EQ(rep.status, SolverStatus::StepRejected);
}

TEST(ProximalPoint, IdentityHalvesIterates) {
    SolverConfig cfg;
    cfg.gamma = 1.0;
    cfg.tol = 1e-10;
    const SolverReport rep =
        proximal_point_solve(fixed_oracle(MonotoneOperator::identity(1), 1.0), v1(8.0), cfg);
    ASSERT_TRUE(rep.converged());
    ASSERT_GE(rep.iterates.size(), 3u);
    EXPECT_DOUBLE_EQ(rep.iterates[0](0), 8.0);
    EXPECT_DOUBLE_EQ(rep.iterates[1](0), 4.0);
    EXPECT_DOUBLE_EQ(rep.iterates[2](0), 2.0);
    EXPECT_NEAR(rep.solution(0), 0.0, 1e-9);
}

TEST(ProximalPoint, ProjectionInOneStep) {
    SolverConfig cfg;
    cfg.gamma = 1.0;
    const SolverReport rep = proximal_point_solve(
        fixed_oracle(MonotoneOperator::box(v1(-1.0), v1(1.0)), 1.0), v1(5.0), cfg);
    ASSERT_TRUE(rep.converged());
    EXPECT_DOUBLE_EQ(rep.solution(0), 1.0);
}

TEST(ProximalPoint, RelayThroughH) {
    SolverConfig cfg;
    cfg.gamma = 0.05;
    const HResolvent h(relay_system(), 0.05);
    const SolverReport rep = proximal_point_solve([&](const Vec& x) { return h(x); }, relay_x0(), cfg);
    ASSERT_TRUE(rep.converged());
    EXPECT_LE(rep.solution.norm(), 1e-6);
}

TEST(ProximalPoint, ResidualsNonIncreasing) {
    Rng rng(32);
    for (int k = 0; k < 20; ++k) {
        const Index n = uniform_int(rng, 1, 4);
        const auto op = random_catalog(rng, n);
        SolverConfig cfg;
        cfg.gamma = uniform(rng, 0.2, 2.0);
        cfg.max_iter = 200;
        const SolverReport rep =
            proximal_point_solve(fixed_oracle(op, *cfg.gamma), random_vec(rng, n), cfg);
        for (std::size_t i = 1; i < rep.residual_history.size(); ++i) {
            EXPECT_LE(rep.residual_history[i], rep.residual_history[i - 1] + 1e-12) << op.name();
        }
    }
}

TEST(ProximalPoint, RequiresStep) {
    EXPECT_THROW(proximal_point_solve(fixed_oracle(MonotoneOperator::zero(1), 1.0), v1(0.0),
                                      SolverConfig{}),
                 std::invalid_argument);
}

TEST(ProjectedFb, ScalarDualProblem) {
    const auto phi = LipschitzMap::affine(Mat::Constant(1, 1, 1.0 / 1.5), v1(-2.0 / 1.5));
    SolverConfig cfg;
    cfg.tol = 1e-12;
    const SolverReport rep =
        fb_strongly_monotone_solve(phi, MonotoneOperator::box(v1(-1.0), v1(1.0)), v1(0.0), cfg);
    ASSERT_TRUE(rep.converged());
    EXPECT_NEAR(rep.solution(0), 1.0, 1e-12);
}

TEST(ProjectedFb, UnconstrainedIdentity) {
    const double inf = std::numeric_limits<double>::infinity();
    const auto phi = LipschitzMap::affine(Mat::Identity(2, 2), Vec::Zero(2));
    const auto whole = MonotoneOperator::box(Vec::Constant(2, -inf), Vec::Constant(2, inf));
    const SolverReport rep = fb_strongly_monotone_solve(phi, whole, Vec{{3.0, -1.0}}, SolverConfig{});
    ASSERT_TRUE(rep.converged());
    EXPECT_LE(rep.solution.norm(), 1e-12);
}

TEST(ProjectedFb, ShiftedIdentityInsideSet) {
    const Vec a = Vec{{0.4, -0.2}};
    const auto phi = LipschitzMap::affine(Mat::Identity(2, 2), -a);
    const SolverReport rep = fb_strongly_monotone_solve(
        phi, MonotoneOperator::ball(Vec::Zero(2), 1.0), Vec::Zero(2), SolverConfig{});
    ASSERT_TRUE(rep.converged());
    EXPECT_LE((rep.solution - a).norm(), 1e-12);
}

TEST(ProjectedFb, ContractionFactor) {
    Rng rng(33);
    for (int k = 0; k < 20; ++k) {
        const double slope = uniform(rng, 0.2, 3.0);
        const double shift = uniform(rng, -3.0, 3.0);
        const auto phi = LipschitzMap::affine(Mat::Constant(1, 1, slope), v1(shift));
        const auto omega = MonotoneOperator::box(v1(-1.0), v1(1.0));
        SolverConfig cfg;
        cfg.tol = 1e-13;
        const SolverReport rep = fb_strongly_monotone_solve(phi, omega, v1(uniform(rng, -1, 1)), cfg);
        ASSERT_TRUE(rep.converged());
        // Oracle: projection of the unconstrained zero onto [-1, 1].
        const double ystar = std::clamp(-shift / slope, -1.0, 1.0);
        EXPECT_NEAR(rep.solution(0), ystar, 1e-10);
        for (std::size_t i = 0; i + 1 < rep.iterates.size(); ++i) {
            const double prev = std::abs(rep.iterates[i](0) - ystar);
            const double next = std::abs(rep.iterates[i + 1](0) - ystar);
            // mu = L here, so the bound is 0; projected gradient on a line is exact.
            EXPECT_LE(next, 1e-12 + 1e-9 * prev) << k;
        }
    }
}

TEST(ProjectedFb, RejectsMerelyMonotone) {
    const auto phi = LipschitzMap::affine(Mat::Zero(1, 1), v1(0.0));
    EXPECT_THROW(fb_strongly_monotone_solve(phi, MonotoneOperator::box(v1(-1.0), v1(1.0)), v1(0.0),
                                            SolverConfig{}),
                 std::invalid_argument);
}
