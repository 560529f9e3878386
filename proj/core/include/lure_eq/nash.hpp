#pragma once

#include "lure_eq/linalg.hpp"
#include "lure_eq/lipschitz_map.hpp"
#include "lure_eq/lure_system.hpp"
#include "lure_eq/monotone_operator.hpp"
#include "lure_eq/qvi.hpp"
#include "lure_eq/splitting.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace lure {

/// Player i minimises <g_i1(x^{-i}), x^i> + g_i2(x^{-i}) over
/// K_i - c_i g_i1(x^{-i}). `g1` maps the stacked strategies of the other
/// players (in player order) to R^{n_i}; `K` is a box/ball normal cone on R^{n_i}.
struct LinearCostPlayer {
    Index dim;
    LipschitzMap g1;
    MonotoneOperator K;
    double c = 0.0;
};

struct LinearCostGame {
    std::vector<LinearCostPlayer> players;
};

/// Convex term h_i of a prox-cost player.
struct AbsTerm {
    double weight = 1.0;
};
struct BoxIndicatorTerm {
    Vec lo;
    Vec hi;
};
using ProxTerm = std::variant<AbsTerm, BoxIndicatorTerm>;

/// Player i minimises <f_i1(x^{-i}), x^i> + f_i2(x^{-i}) + h_i(x^i + d_i f_i1(x^{-i})).
struct ProxCostPlayer {
    Index dim;
    LipschitzMap f1;
    double d = 0.0;
    ProxTerm h;
};

struct ProxCostGame {
    std::vector<ProxCostPlayer> players;
};

/// Total strategy dimension and the x^{-i} extraction used by both game kinds.
Index total_dim(const LinearCostGame& g);
Index total_dim(const ProxCostGame& g);
Vec others(const Vec& x, const std::vector<Index>& dims, std::size_t i);

/// f(x) = (g_11(x^{-1}), ..., g_m1(x^{-m})), D = blkdiag(c_i I), Omega = prod K_i.
/// A stacked f that fails a sampled monotonicity check is accepted with a warning.
QviProblem assemble_linear_game(const LinearCostGame& g);

/// LureSystem with B = C = P = I, F = prod dh_i, D = blkdiag(d_i I), f = stacked f_i1.
LureSystem assemble_prox_game(const ProxCostGame& g);

/// Subdifferential of h as a catalog operator on R^dim.
MonotoneOperator subdifferential(const ProxTerm& h, Index dim);

/// Solve through the assembled inclusion and certify player by player.
/// Non-monotone stacked maps are attempted (with a warning); a converged
/// run that fails certify_equilibrium at 10 tol is reported as StepRejected.
SolverReport solve_game(const LinearCostGame& g, const SolverConfig& cfg,
                        const std::optional<Vec>& x0 = std::nullopt);
SolverReport solve_game(const ProxCostGame& g, const SolverConfig& cfg,
                        const std::optional<Vec>& x0 = std::nullopt);

struct NashCertificate {
    std::vector<double> residuals;
    std::vector<bool> passed;
    bool all_passed = false;
};

/// Player-wise check of -g_i1(x^{-i}) in N_{K_i}(x^i + c_i g_i1(x^{-i})), resp.
/// -f_i1(x^{-i}) in dh_i(x^i + d_i f_i1(x^{-i})), each through the graph
/// residual of the player's operator.
NashCertificate certify_equilibrium(const LinearCostGame& g, const Vec& x, double tol);
NashCertificate certify_equilibrium(const ProxCostGame& g, const Vec& x, double tol);

}  // namespace lure
