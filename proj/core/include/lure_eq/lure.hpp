#pragma once

#include "lure_eq/linalg.hpp"
#include "lure_eq/lure_system.hpp"
#include "lure_eq/resolvent_calculus.hpp"
#include "lure_eq/splitting.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lure {

enum class ValidationMode {
    Strict,   // P B = C^T, P f and D monotone: Tseng route
    Passive,  // P-passive with semi-coercive D: proximal point route
    Invalid,
};

const char* to_string(ValidationMode m);

struct ValidationReport {
    bool pb_equals_ct = false;
    bool passivity_psd = false;
    bool d_monotone = false;
    bool pf_monotone = false;
    std::optional<double> d_semicoercive;
    ValidationMode mode = ValidationMode::Invalid;

    double pb_ct_norm = 0.0;
    /// Eigenvalues of the passivity block matrix (affine f only), ascending.
    Vec block_eigenvalues;
    std::vector<std::string> warnings;
};

/// Checks the structural assumptions behind the two equilibrium routes.
///
/// For affine f(x) = A x + b the passivity test is the PSD test (eigenvalues
/// >= -1e-9) of [[PA + A^T P, PB - C^T], [B^T P - C, D + D^T]]; otherwise
/// the passivity inequality and the monotonicity of P f are sampled.
ValidationReport validate(const LureSystem& sys);

enum class Route { Auto, Tseng, ProximalPoint };

/// Equilibrium x* with 0 in f(x*) + B (F^{-1} + D)^{-1}(C x*).
///
/// Strict systems run Tseng on P f + G (G = C^T (F^{-1}+D)^{-1} C), default
/// step 0.9/L(P f). Passive systems (or Route::ProximalPoint) run the
/// proximal point method on H with gamma = min(cfg.gamma, 0.5/L_g).
/// The returned certified_residual is inclusion_residual() at the solution;
/// a converged run whose certificate exceeds 10 tol is downgraded to
/// StepRejected ("range condition possibly violated").
/// Throws InvalidProblem for systems that validate() marks Invalid.
SolverReport equilibrium(const LureSystem& sys, const SolverConfig& cfg,
                         const std::optional<Vec>& x0 = std::nullopt,
                         Route route = Route::Auto);

/// Tseng route without the monotonicity gate on P f (P B = C^T and monotone D
/// are still required). Used for games whose stacked cost map is not
/// monotone: Converged then means the inclusion certificate passed.
SolverReport equilibrium_by_certificate(const LureSystem& sys, const SolverConfig& cfg,
                                        const std::optional<Vec>& x0 = std::nullopt);

/// Solver-independent certificate for a candidate equilibrium x.
struct InclusionCertificate {
    /// Natural residual ||x - J_{gamma G}(x - gamma g(x))|| / gamma.
    double natural = 0.0;
    /// ||f(y) + B lambda|| at the resolvent point y, lambda the witness in
    /// (F^{-1} + D)^{-1}(C y).
    double witness = 0.0;
    /// Graph residual certifying lambda in F(C y - D lambda).
    double membership = 0.0;
    Vec point;
    Vec lambda;
    bool inner_converged = true;

    [[nodiscard]] double value() const;
};

InclusionCertificate inclusion_residual(const LureSystem& sys, const Vec& x, double gamma = 1.0,
                                        double tol = kInnerTol, int max_iter = kInnerMaxIter);

enum class Scheme { Explicit, SemiImplicit, FullyImplicit };

const char* to_string(Scheme s);
std::optional<Scheme> parse_scheme(const std::string& text);

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    /// lambda_n with lambda_n in -F(C x_n + D lambda_n).
    std::vector<Vec> lambdas;
    Scheme scheme = Scheme::Explicit;
    double h = 0.0;
    bool completed = true;
    std::string message;
};

/// Time-stepping on [0, T] with round(T/h) steps.
///
/// Explicit: x_{n+1} = x_n + h(-f(x_n) + B lambda_n), y_n = C x_n + D lambda_n,
///   lambda_{n+1} = minimal-norm element of -F(y_n) (sign(0) = 0),
///   lambda_0 = minimal-norm element of -F(C x_0).
/// SemiImplicit: x_{n+1} = J_{hG}(x_n - h f(x_n)).
/// FullyImplicit: 0 in z - x_n + h f(z) + h G(z), solved by an inner Tseng run.
/// Implicit schemes need B = C^T (P = I); otherwise UnsupportedError.
/// An inner failure stops the run and returns the partial trajectory with
/// completed = false.
Trajectory simulate(const LureSystem& sys, Scheme scheme, const Vec& x0, double h, double T,
                    double inner_tol = 1e-12, int inner_max_iter = kInnerMaxIter);

}  // namespace lure
