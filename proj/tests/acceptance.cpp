// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "support/generators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

using namespace lure;
using namespace lure::testing;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome relay_equilibrium() {
    const LureSystem sys = relay_system();
    SolverConfig cfg;
    cfg.gamma = 0.1;
    cfg.tol = 1e-10;
    cfg.max_iter = 2000;
    const SolverReport good = equilibrium(sys, cfg, relay_x0(), Route::Tseng);
    cfg.gamma = 0.5;
    const SolverReport bad = equilibrium(sys, cfg, relay_x0(), Route::Tseng);
    const double norm = good.solution.norm();
    const bool pass = good.converged() && norm <= 1e-6 && good.iterations <= 2000 &&
                      bad.status == SolverStatus::Diverged;
    char buf[200];
    std::snprintf(buf, sizeof buf, "gamma=0.1: %s, |x*|=%.2e, %d iters; gamma=0.5: %s",
                  to_string(good.status), norm, good.iterations, to_string(bad.status));
    return {pass, buf};
}

Outcome relay_time_stepping() {
    const LureSystem sys = relay_system();
    const Trajectory ex = simulate(sys, Scheme::Explicit, relay_x0(), 0.04, 40.0);
    double min_norm = std::numeric_limits<double>::infinity();
    for (const Vec& x : ex.states) min_norm = std::min(min_norm, x.norm());
    const Trajectory si = simulate(sys, Scheme::SemiImplicit, relay_x0(), 0.04, 10.0);
    const double final_norm = si.states.back().norm();
    const bool pass = ex.completed && si.completed && min_norm > 1e-3 && final_norm <= 1e-2 &&
                      std::abs(si.times.back() - 10.0) < 1e-9;
    char buf[200];
    std::snprintf(buf, sizeof buf, "explicit min|x_n|=%.3e; semi-implicit |x(10)|=%.3e", min_norm,
                  final_norm);
    return {pass, buf};
}

Outcome b_resolvent_oracle() {
    Rng rng(101);
    const double gammas[] = {0.1, 0.5, 2.0};
    double worst = 0.0;
    double worst_d0 = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Index n = uniform_int(rng, 1, 6);
        const MonotoneOperator op = random_catalog(rng, n);
        const Vec d = random_nonneg_diag(rng, n);
        const double gamma = gammas[trial % 3];
        const Vec x = random_vec(rng, n);
        const InnerSolve r = resolvent_B(ComposedOperatorB(op, d.asDiagonal()), gamma, x);
        const Vec lam = (x - r.value) / gamma;
        worst = std::max(worst, op.graph_residual(r.value - d.asDiagonal() * lam, lam));
        if (!r.converged) worst = std::max(worst, 1.0);

        const InnerSolve r0 = resolvent_B(ComposedOperatorB(op, Mat::Zero(n, n)), gamma, x);
        worst_d0 = std::max(worst_d0, (r0.value - op.resolvent(gamma, x)).norm());
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "max membership residual %.2e; D=0 deviation %.2e", worst,
                  worst_d0);
    return {worst <= 1e-8 && worst_d0 <= 1e-10, buf};
}

Outcome moreau_identity() {
    Rng rng(202);
    double worst_sum = 0.0;
    double worst_graph = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Index n = uniform_int(rng, 1, 6);
        const MonotoneOperator op = random_catalog(rng, n);
        const double gamma = std::exp(uniform(rng, std::log(0.05), std::log(20.0)));
        const Vec x = random_vec(rng, n);
        const Vec u = op.inverse_resolvent(gamma, x);
        // x = J_{gamma F^{-1}}(x) + gamma J_{F / gamma}(x / gamma)
        worst_sum =
            std::max(worst_sum, (u + gamma * op.resolvent(1.0 / gamma, x / gamma) - x).norm());
        // u = J_{gamma F^{-1}}(x) iff u in F((x - u) / gamma)
        worst_graph = std::max(worst_graph, op.graph_residual((x - u) / gamma, u) /
                                                std::max(1.0, x.norm()));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "max identity gap %.2e; max inverse-graph residual %.2e",
                  worst_sum, worst_graph);
    return {worst_sum <= 1e-10 && worst_graph <= 1e-10, buf};
}

Outcome h_resolvent_proximal_point() {
    const LureSystem sys = relay_system();
    const double gamma = 0.05;
    const HResolvent h(sys, gamma);
    const double cap = 0.5 / h.lipschitz_g();
    double worst_inner = 0.0;
    bool inner_ok = true;
    const FixedResolvent oracle = [&](const Vec& x) {
        InnerSolve r = h(x);
        worst_inner = std::max(worst_inner, r.residual);
        inner_ok = inner_ok && r.converged;
        return r;
    };
    SolverConfig cfg;
    cfg.gamma = gamma;
    cfg.tol = 1e-9;
    const SolverReport rep = proximal_point_solve(oracle, relay_x0(), cfg);
    cfg.gamma = gamma;
    const SolverReport routed = equilibrium(sys, cfg, relay_x0(), Route::ProximalPoint);
    const double err = rep.solution.norm();
    const bool pass = gamma <= cap && rep.converged() && err <= 1e-5 && inner_ok &&
                      worst_inner <= 1e-10 && routed.converged() && routed.solution.norm() <= 1e-5;
    char buf[200];
    std::snprintf(buf, sizeof buf, "0.5/L_g=%.4f; |x*|=%.2e after %d steps; max inner residual %.2e",
                  cap, err, rep.iterations, worst_inner);
    return {pass, buf};
}

Outcome qvi_primal_dual() {
    const QviProblem p = scalar_qvi();
    SolverConfig cfg;
    cfg.tol = 1e-11;
    const SolverReport primal = solve_qvi(p, cfg);
    const QviDualReport dual = solve_qvi_dual(p, cfg);
    const double x_p = primal.solution(0);
    const double x_d = dual.x_star(0);
    const double y_d = dual.y_star(0);
    const double m = dual.constants.mu_phi;
    const double l = dual.constants.lip_phi;
    const double bound = std::sqrt(1.0 - m * m / (l * l)) + 0.05;
    const bool pass = primal.converged() && dual.dual.converged() &&
                      std::abs(x_p - 4.0 / 3.0) <= 1e-8 && std::abs(x_d - 4.0 / 3.0) <= 1e-8 &&
                      std::abs(y_d - 1.0) <= 1e-8 && std::abs(x_p - x_d) <= 1e-8 &&
                      dual.observed_contraction <= bound;
    char buf[220];
    std::snprintf(buf, sizeof buf, "primal x*=%.12f; dual y*=%.12f x*=%.12f; contraction %.3f <= %.3f",
                  x_p, y_d, x_d, dual.observed_contraction, bound);
    return {pass, buf};
}

Outcome qvi_equivalence() {
    Rng rng(707);
    int failures = 0;
    double worst_inc = 0.0;
    double worst_qvi = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = uniform_int(rng, 1, 5);
        const Mat a = random_monotone_mat(rng, n, 0.2);
        const Vec b = random_vec(rng, n);
        const Mat s = random_mat(rng, n, n, 0.7);
        const Mat d = s * s.transpose();
        Vec lo(n);
        Vec hi(n);
        for (Index i = 0; i < n; ++i) {
            lo(i) = uniform(rng, -2.0, 0.0);
            hi(i) = lo(i) + uniform(rng, 0.5, 3.0);
        }
        const QviProblem p(LipschitzMap::affine(a, b), d, MonotoneOperator::box(lo, hi));
        SolverConfig cfg;
        cfg.tol = 1e-9;
        cfg.max_iter = 200000;
        const SolverReport rep = solve_qvi(p, cfg);
        const double inc = inclusion_residual(qvi_to_inclusion(p), rep.solution).value();
        const double q = qvi_residual(p, rep.solution);
        worst_inc = std::max(worst_inc, inc);
        worst_qvi = std::max(worst_qvi, q);
        if (!rep.converged() || inc > 1e-6 || q > 1e-6) ++failures;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/100 failed; max inclusion %.2e, max QVI %.2e", failures,
                  worst_inc, worst_qvi);
    return {failures == 0, buf};
}

Outcome nash_games() {
    const LinearCostGame lin = linear_game();
    const NashCertificate c1 = certify_equilibrium(lin, Vec{{1.0, 1.0}}, 1e-8);

    const ProxCostGame prox = prox_game();
    SolverConfig cfg;
    cfg.tol = 1e-11;
    const SolverReport rep = equilibrium(assemble_prox_game(prox), cfg);
    const Vec& x = rep.solution;
    const bool on_segment = std::abs(x(0)) <= 1e-8 && x(1) >= -2.0 - 1e-8 && x(1) <= 1e-8;
    const NashCertificate c2 = certify_equilibrium(prox, x, 1e-8);
    char buf[200];
    std::snprintf(buf, sizeof buf, "linear game (1,1): %s; prox game x=(%.3e, %.6f): %s",
                  c1.all_passed ? "certified" : "rejected", x(0), x(1),
                  c2.all_passed ? "certified" : "rejected");
    return {c1.all_passed && rep.converged() && on_segment && c2.all_passed, buf};
}

Outcome g_resolvent_dual_path() {
    Rng rng(909);
    double worst = 0.0;
    double worst_id = 0.0;
    const double gammas[] = {0.1, 0.5, 2.0};
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = uniform_int(rng, 1, 5);
        const Index m = uniform_int(rng, 1, 5);
        // Normal cones only with surjective C, so that range C meets dom B
        // in its interior and the multiplier exists.
        const MonotoneOperator op =
            random_catalog(rng, m, m <= n ? Family::Any : Family::FullDomain);
        const Vec d = random_nonneg_diag(rng, m);
        Mat c = random_mat(rng, m, n);
        if (m == n && is_identity(c)) c(0, 0) += 1.0;
        const double gamma = gammas[trial % 3];
        const ComposedOperatorB b(op, d.asDiagonal());
        const Vec w = random_vec(rng, n);
        const InnerSolve r = resolvent_G(ComposedOperatorG(b, c), gamma, w);
        const Vec& v = r.multiplier;
        const double stationarity = (r.value - w + gamma * c.transpose() * v).norm();
        const double member = op.graph_residual(c * r.value - d.asDiagonal() * v, v);
        worst = std::max({worst, stationarity, member, r.converged ? 0.0 : 1.0});

        const Vec x = random_vec(rng, m);
        const InnerSolve gi = resolvent_G(ComposedOperatorG(b, Mat::Identity(m, m)), gamma, x);
        const InnerSolve bi = resolvent_B(b, gamma, x);
        worst_id = std::max(worst_id, (gi.value - bi.value).norm());
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "max certificate %.2e; C=I deviation %.2e", worst, worst_id);
    return {worst <= 1e-6 && worst_id <= 1e-8, buf};
}

Outcome passivity_validator() {
    const ValidationReport strict = validate(relay_system());
    const ValidationReport bad = validate(relay_system(-Mat::Identity(2, 2)));
    const Vec expect = Vec{{0.0, 2.0, 16.0, 18.0}};
    const Vec& ev = strict.block_eigenvalues;
    const bool eig_ok = ev.size() == 4 && (ev - expect).cwiseAbs().maxCoeff() <= 1e-9;
    char buf[200];
    std::snprintf(buf, sizeof buf, "P=I: %s, eigenvalues {%g, %g, %g, %g}; D=-I: %s",
                  to_string(strict.mode), ev.size() > 0 ? ev(0) : NAN, ev.size() > 1 ? ev(1) : NAN,
                  ev.size() > 2 ? ev(2) : NAN, ev.size() > 3 ? ev(3) : NAN, to_string(bad.mode));
    return {strict.mode == ValidationMode::Strict && eig_ok && bad.mode == ValidationMode::Invalid,
            buf};
}

}  // namespace

int main() {
    log::set_level(log::Level::Quiet);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"relay equilibrium via Tseng (gamma=0.1 converges, gamma=0.5 diverges)", relay_equilibrium},
        {"relay time-stepping: explicit chatters, semi-implicit settles", relay_time_stepping},
        {"B-resolvent membership certificate on 200 random instances", b_resolvent_oracle},
        {"Moreau identity on 200 random catalog operators", moreau_identity},
        {"proximal point on H-resolvent reaches the origin", h_resolvent_proximal_point},
        {"scalar QVI primal/dual agreement and linear dual rate", qvi_primal_dual},
        {"inclusion/QVI residual equivalence on 100 random box QVIs", qvi_equivalence},
        {"Nash games certified", nash_games},
        {"G-resolvent dual path on 100 random instances", g_resolvent_dual_path},
        {"passivity validator classification", passivity_validator},
    };
    int failed = 0;
    int index = 0;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome out{false, ""};
        try {
            out = run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        if (!out.pass) ++failed;
        std::printf("[%s] %2d %s -- %s\n", out.pass ? "PASS" : "FAIL", index, name,
                    out.detail.c_str());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d/%zu criteria passed in %.2f s\n", static_cast<int>(criteria.size()) - failed,
                criteria.size(), secs);
    return failed == 0 ? 0 : 1;
}
