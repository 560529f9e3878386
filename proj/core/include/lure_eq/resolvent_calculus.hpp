#pragma once

#include "lure_eq/linalg.hpp"
#include "lure_eq/lure_system.hpp"
#include "lure_eq/monotone_operator.hpp"
#include "lure_eq/resolvent.hpp"

#include <optional>

namespace lure {

/// The set-valued map (F^{-1} + D)^{-1} with D monotone.
struct ComposedOperatorB {
    ComposedOperatorB(MonotoneOperator op, Mat d);

    MonotoneOperator F;
    Mat D;

    [[nodiscard]] Index dim() const { return F.dim(); }
};

/// C^T (F^{-1} + D)^{-1} C acting on the state space R^n, n = C.cols().
struct ComposedOperatorG {
    ComposedOperatorG(ComposedOperatorB b, Mat c);

    ComposedOperatorB B;
    Mat C;

    [[nodiscard]] Index dim() const { return C.cols(); }
};

/// Positive part of the spectrum of (D + D^T)/2: the coercivity constant of
/// D on rge(D + D^T) and an orthonormal basis of that range.
struct SemiCoercivityData {
    double c;
    Mat range_basis;
};

/// nullopt when D + D^T has no eigenvalue above 1e-10.
std::optional<SemiCoercivityData> semi_coercivity(const Mat& d);

/// Resolvent of gamma * (F^{-1} + D)^{-1}, built once per step size.
///
/// With E = (gamma I + D)^{-1}:  y = E (gamma z + D x),  z = J^E_F(E x).
/// The returned multiplier is lambda = (x - y)/gamma, an element of
/// (F^{-1} + D)^{-1}(y); `residual` certifies lambda in F(y + D(y - x)/gamma)
/// through the graph residual of F.
class BResolvent {
public:
    BResolvent(ComposedOperatorB b, double gamma, double tol = kInnerTol,
               int max_iter = kInnerMaxIter);

    [[nodiscard]] InnerSolve operator()(const Vec& x) const;

    [[nodiscard]] double gamma() const { return gamma_; }
    [[nodiscard]] const PositiveDefiniteMap& weight() const { return e_; }

private:
    ComposedOperatorB b_;
    double gamma_;
    double tol_;
    int max_iter_;
    PositiveDefiniteMap e_;
};

/// Resolvent of gamma * C^T (F^{-1} + D)^{-1} C, built once per step size.
///
/// C = I reduces to BResolvent. Otherwise the dual problem
///   0 in B^{-1}(v) + gamma C C^T v - C w
/// is solved by forward-backward with step s = 1/(gamma ||C C^T||), the
/// backward step J_{sB^{-1}} being evaluated through BResolvent at 1/s
/// (Moreau). Then y = w - gamma C^T v and v is returned as the multiplier,
/// v in (F^{-1} + D)^{-1}(C y).
class GResolvent {
public:
    GResolvent(ComposedOperatorG g, double gamma, double tol = kInnerTol,
               int max_iter = kInnerMaxIter);

    [[nodiscard]] InnerSolve operator()(const Vec& w) const;

    [[nodiscard]] double gamma() const { return gamma_; }

private:
    enum class Path { Identity, Zero, Dual };

    ComposedOperatorG g_;
    double gamma_;
    double tol_;
    int max_iter_;
    Path path_;
    double dual_step_ = 0.0;
    Mat cct_;
    std::optional<BResolvent> inner_;
};

InnerSolve resolvent_B(const ComposedOperatorB& b, double gamma, const Vec& x,
                       double tol = kInnerTol, int max_iter = kInnerMaxIter);

InnerSolve resolvent_G(const ComposedOperatorG& g, double gamma, const Vec& w,
                       double tol = kInnerTol, int max_iter = kInnerMaxIter);

/// Some v in (F^{-1} + D)^{-1}(c), i.e. v in F(c - D v).
///
/// Exact paths: D = 0 (minimal-norm element of F(c)), linear F, diagonal D
/// with componentwise F, and D with positive definite symmetric part
/// (through J^{D^{-1}}_F). Remaining cases run Tseng's method on
/// 0 in F^{-1}(v) + D v - c with step 0.9/||D||. A non-converged result
/// means the set may be empty (c outside rge(F^{-1} + D)).
InnerSolve eval_B(const ComposedOperatorB& b, const Vec& c, double tol = kInnerTol,
                  int max_iter = kInnerMaxIter);

/// g(x) = P f(x) + (P B - C^T) v with v = eval_B(C x). The result does not
/// depend on which element of (F^{-1} + D)^{-1}(C x) is picked.
/// The multiplier is v (empty when P B = C^T, in which case g = P f).
InnerSolve eval_g(const LureSystem& sys, const Vec& x, double tol = kInnerTol,
                  int max_iter = kInnerMaxIter);

/// L_g = ||P|| L_f + ||C|| ||P B - C^T|| / c (spectral norms).
/// The second term is skipped when P B = C^T; otherwise `semico` is required.
double lipschitz_constant_g(const LureSystem& sys,
                            const std::optional<SemiCoercivityData>& semico);

/// Resolvent of gamma * H, H = P f + P B (F^{-1} + D)^{-1} C, for gamma L_g < 1.
///
/// y is the fixed point of y -> J_{gamma G}(x - gamma g(y)), reached by
/// Banach iteration (contraction factor gamma L_g). `residual` bounds
/// ||y - J_{gamma G}(x - gamma g(y))|| and the multiplier is the element of
/// (F^{-1} + D)^{-1}(C y) produced by the last G-resolvent.
class HResolvent {
public:
    HResolvent(const LureSystem& sys, double gamma, double tol = kInnerTol,
               int max_iter = kInnerMaxIter);

    [[nodiscard]] InnerSolve operator()(const Vec& x) const;

    [[nodiscard]] double gamma() const { return gamma_; }
    [[nodiscard]] double lipschitz_g() const { return lip_g_; }

private:
    LureSystem sys_;
    double gamma_;
    double tol_;
    int max_iter_;
    double lip_g_;
    GResolvent g_res_;
};

InnerSolve resolvent_H(const LureSystem& sys, double gamma, const Vec& x, double tol = kInnerTol,
                       int max_iter = kInnerMaxIter);

ComposedOperatorB composed_b(const LureSystem& sys);
ComposedOperatorG composed_g(const LureSystem& sys);

}  // namespace lure
