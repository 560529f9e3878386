#include "lure_eq/splitting.hpp"

#include "lure_eq/log.hpp"

#include <cmath>
#include <sstream>

namespace lure {

const char* to_string(SolverStatus s) {
    switch (s) {
        case SolverStatus::Converged: return "Converged";
        case SolverStatus::MaxIterReached: return "MaxIterReached";
        case SolverStatus::Diverged: return "Diverged";
        case SolverStatus::StepRejected: return "StepRejected";
    }
    return "Unknown";
}

namespace {

void trace_iter(const char* who, int n, double res) {
    if (log::level() < log::Level::Trace) return;
    std::ostringstream os;
    os << who << " iter " << n << " residual " << res;
    log::trace(os.str());
}

}  // namespace

SolverReport tseng_solve(const LipschitzMap& f, const ResolventOracle& g_res, const Vec& x0,
                         const SolverConfig& cfg) {
    require_dim(x0.size(), f.dim_in(), "tseng_solve: x0");
    require_positive(cfg.tol, "tseng_solve: tol");
    const double gamma = cfg.gamma ? *cfg.gamma : 0.9 / std::max(f.lipschitz(), 1e-12);
    require_positive(gamma, "tseng_solve: gamma");
    if (gamma * f.lipschitz() >= 1.0) {
        std::ostringstream os;
        os << "tseng_solve: gamma = " << gamma << " violates gamma < 1/L = "
           << 1.0 / f.lipschitz() << "; convergence is not guaranteed";
        log::warn(os.str());
    }

    SolverReport rep;
    rep.gamma = gamma;
    const double blowup = 1e6 * (1.0 + x0.norm());
    Vec x = x0;
    Vec fx = f(x);
    for (int n = 0; n < cfg.max_iter; ++n) {
        const InnerSolve step = g_res(gamma, x - gamma * fx);
        if (!step.value.allFinite()) {
            rep.status = SolverStatus::Diverged;
            rep.message = "non-finite resolvent output";
            break;
        }
        const Vec& y = step.value;
        const double res = (x - y).norm() / gamma;
        rep.iterates.push_back(x);
        rep.residual_history.push_back(res);
        rep.iterations = n + 1;
        trace_iter("tseng", n, res);
        if (!step.converged) {
            rep.solution = y;
            rep.multiplier = step.multiplier;
            rep.status = SolverStatus::StepRejected;
            rep.message = "inner resolvent did not converge (residual " +
                          std::to_string(step.residual) + ")";
            return rep;
        }
        if (res <= cfg.tol) {
            rep.solution = y;
            rep.multiplier = step.multiplier;
            rep.status = SolverStatus::Converged;
            rep.certified_residual = res;
            return rep;
        }
        const Vec fy = f(y);
        x = y - gamma * (fy - fx);
        if (!x.allFinite() || x.norm() > blowup) {
            rep.solution = x;
            rep.status = SolverStatus::Diverged;
            rep.message = "iterate norm exceeded divergence threshold";
            return rep;
        }
        fx = f(x);
    }
    if (rep.solution.size() == 0) rep.solution = x;
    if (rep.status != SolverStatus::Diverged) rep.status = SolverStatus::MaxIterReached;
    return rep;
}

SolverReport proximal_point_solve(const FixedResolvent& h_res, const Vec& x0,
                                  const SolverConfig& cfg) {
    if (!cfg.gamma) throw std::invalid_argument("proximal_point_solve: gamma is required");
    const double gamma = *cfg.gamma;
    require_positive(gamma, "proximal_point_solve: gamma");
    require_positive(cfg.tol, "proximal_point_solve: tol");

    SolverReport rep;
    rep.gamma = gamma;
    rep.status = SolverStatus::MaxIterReached;
    const double blowup = 1e6 * (1.0 + x0.norm());
    Vec x = x0;
    for (int n = 0; n < cfg.max_iter; ++n) {
        const InnerSolve step = h_res(x);
        const double res = (step.value - x).norm() / gamma;
        rep.iterates.push_back(x);
        rep.residual_history.push_back(res);
        rep.iterations = n + 1;
        trace_iter("proximal-point", n, res);
        if (!step.converged || !step.value.allFinite()) {
            rep.solution = x;
            rep.status = SolverStatus::StepRejected;
            rep.message = "inner resolvent failed at outer step " + std::to_string(n) +
                          " (residual " + std::to_string(step.residual) + ", " +
                          std::to_string(step.iterations) + " iterations)";
            return rep;
        }
        x = step.value;
        rep.multiplier = step.multiplier;
        if (res <= cfg.tol) {
            rep.status = SolverStatus::Converged;
            rep.certified_residual = res;
            break;
        }
        if (x.norm() > blowup) {
            rep.status = SolverStatus::Diverged;
            rep.message = "iterate norm exceeded divergence threshold";
            break;
        }
    }
    rep.solution = x;
    return rep;
}

SolverReport fb_strongly_monotone_solve(const LipschitzMap& phi, const MonotoneOperator& omega,
                                        const Vec& y0, const SolverConfig& cfg) {
    if (!(phi.strong_modulus() > 0.0)) {
        throw std::invalid_argument("fb_strongly_monotone_solve: phi must be strongly monotone");
    }
    if (!omega.is_normal_cone()) {
        throw std::invalid_argument("fb_strongly_monotone_solve: Omega must be a normal cone");
    }
    require_dim(y0.size(), omega.dim(), "fb_strongly_monotone_solve: y0");
    const double lip = phi.lipschitz();
    const double step = cfg.gamma ? *cfg.gamma : phi.strong_modulus() / (lip * lip);
    require_positive(step, "fb_strongly_monotone_solve: step");

    SolverReport rep;
    rep.gamma = step;
    rep.status = SolverStatus::MaxIterReached;
    Vec y = omega.resolvent(1.0, y0);
    for (int k = 0; k < cfg.max_iter; ++k) {
        Vec next;
        try {
            next = omega.resolvent(1.0, y - step * phi(y));
        } catch (const SolverError& e) {
            rep.status = SolverStatus::StepRejected;
            rep.message = e.what();
            break;
        }
        const double res = (next - y).norm() / step;
        rep.iterates.push_back(y);
        rep.residual_history.push_back(res);
        rep.iterations = k + 1;
        trace_iter("projected-fb", k, res);
        y = std::move(next);
        if (res <= cfg.tol) {
            rep.status = SolverStatus::Converged;
            rep.certified_residual = res;
            break;
        }
    }
    rep.solution = y;
    return rep;
}

}  // namespace lure
