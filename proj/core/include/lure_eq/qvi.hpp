#pragma once

#include "lure_eq/linalg.hpp"
#include "lure_eq/lipschitz_map.hpp"
#include "lure_eq/lure.hpp"
#include "lure_eq/monotone_operator.hpp"
#include "lure_eq/splitting.hpp"

#include <optional>

namespace lure {

/// Quasi-variational inequality  0 in f(x) + N_{K(x)}(x),  K(x) = Omega - D f(x).
///
/// Omega may also be any catalog operator F, in which case the problem reads
/// 0 in f(x) + F(x + D f(x)); the moving-set view only applies to normal cones.
struct QviProblem {
    QviProblem(LipschitzMap f, Mat d, MonotoneOperator omega);

    LipschitzMap f;
    Mat D;
    MonotoneOperator Omega;

    [[nodiscard]] Index dim() const { return D.rows(); }
};

/// The equivalent inclusion 0 in f(x) + (Omega^{-1} + D)^{-1}(x): B = C = P = I.
LureSystem qvi_to_inclusion(const QviProblem& p);

struct MovingSet {
    /// Shifted bounds of K(x) when Omega is a box or orthant (or a product of those).
    std::optional<Vec> lower;
    std::optional<Vec> upper;
    /// Shifted centre and radius when Omega is a ball.
    std::optional<Vec> center;
    double radius = 0.0;
    /// Distance from x to K(x).
    double distance = 0.0;
    bool contains = false;
};

/// K(x) = Omega - D f(x) and whether x in K(x) (within 1e-10).
MovingSet moving_set_check(const QviProblem& p, const Vec& x);

/// QVI-form residual: graph residual of -f(x) in Omega(x + D f(x)).
double qvi_residual(const QviProblem& p, const Vec& x);

/// Solves the QVI through the inclusion form. certified_residual is the
/// larger of the inclusion certificate and qvi_residual().
SolverReport solve_qvi(const QviProblem& p, const SolverConfig& cfg,
                       const std::optional<Vec>& x0 = std::nullopt);

/// Step-size constants for the dual problem.
struct DualConstants {
    double mu_inv;   // strong monotonicity of f^{-1}: mu / L^2
    double lip_inv;  // Lipschitz constant of f^{-1}: 1 / mu
    double mu_phi;   // strong monotonicity of (f^{-1} + D)^{-1}
    double lip_phi;  // Lipschitz constant of (f^{-1} + D)^{-1}
};

/// Throws std::invalid_argument when f is not strongly monotone.
DualConstants dual_constants(const LipschitzMap& f, const Mat& d);

/// Phi(y) = (f^{-1} + D)^{-1}(y): the u with u = f(y - D u).
///
/// Affine f solves (I + A D) u = A y + b. Otherwise, when L ||D|| < 1 the
/// fixed point u <- f(y - D u) is iterated directly; else u is found by
/// forward steps on the strongly monotone map u -> f^{-1}(u) + D u - y, with
/// f^{-1} evaluated by an inner forward iteration on f.
/// `residual` is ||f(y - D u) - u||.
InnerSolve eval_phi(const LipschitzMap& f, const Mat& d, const Vec& y, double tol = 1e-12,
                    int max_iter = kInnerMaxIter);

struct QviDualReport {
    /// Projected forward-backward run on Phi over Omega (solution = y*).
    SolverReport dual;
    Vec y_star;
    /// x* = y* - D Phi(y*).
    Vec x_star;
    DualConstants constants{};
    double qvi_residual = 0.0;
    /// Largest observed ratio ||y_{k+1} - y*|| / ||y_k - y*|| over the run.
    double observed_contraction = 0.0;
};

/// Solves the strongly monotone dual VI 0 in Phi(y) + N_Omega(y) and recovers x*.
QviDualReport solve_qvi_dual(const QviProblem& p, const SolverConfig& cfg,
                             const std::optional<Vec>& y0 = std::nullopt);

}  // namespace lure
