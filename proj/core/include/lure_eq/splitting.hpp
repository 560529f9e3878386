#pragma once

#include "lure_eq/linalg.hpp"
#include "lure_eq/lipschitz_map.hpp"
#include "lure_eq/monotone_operator.hpp"
#include "lure_eq/resolvent.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lure {

struct SolverConfig {
    /// Step size; solvers pick a safe default from the problem constants when unset.
    std::optional<double> gamma;
    double tol = 1e-8;
    int max_iter = 10000;
    double inner_tol = kInnerTol;
    int inner_max_iter = kInnerMaxIter;
};

enum class SolverStatus { Converged, MaxIterReached, Diverged, StepRejected };

const char* to_string(SolverStatus s);

struct SolverReport {
    Vec solution;
    /// Witness element of the set-valued part at `solution`, when the solver has one.
    Vec multiplier;
    SolverStatus status = SolverStatus::MaxIterReached;
    int iterations = 0;
    /// One entry per iteration.
    std::vector<double> residual_history;
    /// Iterate x_n that produced residual_history[n].
    std::vector<Vec> iterates;
    double certified_residual = 0.0;
    double gamma = 0.0;
    std::string message;

    [[nodiscard]] bool converged() const { return status == SolverStatus::Converged; }
};

/// Resolvent oracle (gamma, w) -> J_{gamma G}(w).
using ResolventOracle = std::function<InnerSolve(double, const Vec&)>;

/// Resolvent oracle at a step fixed by the caller.
using FixedResolvent = std::function<InnerSolve(const Vec&)>;

/// Tseng's forward-backward-forward method for 0 in f(x) + G(x):
///
///   y_n     = J_{gamma G}(x_n - gamma f(x_n))
///   x_{n+1} = y_n - gamma (f(y_n) - f(x_n))
///
/// Residual ||x_n - y_n|| / gamma. On convergence the solution is y_n and
/// the multiplier is the witness returned by the oracle at that step.
/// Diverged is reported once ||x_n|| exceeds 1e6 (1 + ||x_0||).
SolverReport tseng_solve(const LipschitzMap& f, const ResolventOracle& g_res, const Vec& x0,
                         const SolverConfig& cfg);

/// Proximal point iteration x_{n+1} = J(x_n) for a resolvent at fixed step
/// cfg.gamma (required). Residual ||x_{n+1} - x_n|| / gamma.
SolverReport proximal_point_solve(const FixedResolvent& h_res, const Vec& x0,
                                  const SolverConfig& cfg);

/// Projected forward-backward y_{k+1} = P_Omega(y_k - s phi(y_k)), s = mu/L^2,
/// for a strongly monotone Lipschitz phi and a normal-cone Omega.
/// Residual ||y_{k+1} - y_k|| / s. cfg.gamma, when set, overrides s.
SolverReport fb_strongly_monotone_solve(const LipschitzMap& phi, const MonotoneOperator& omega,
                                        const Vec& y0, const SolverConfig& cfg);

}  // namespace lure
