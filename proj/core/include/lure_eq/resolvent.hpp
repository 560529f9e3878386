#pragma once

#include "lure_eq/linalg.hpp"
#include "lure_eq/monotone_operator.hpp"

namespace lure {

/// Default inner-loop budgets.
inline constexpr double kInnerTol = 1e-10;
inline constexpr int kInnerMaxIter = 100000;

/// Square matrix E with <Ex, x> >= c ||x||^2, c > 0.
class PositiveDefiniteMap {
public:
    /// Throws InvalidProblem when the symmetric part is not positive definite.
    explicit PositiveDefiniteMap(Mat e);

    [[nodiscard]] const Mat& matrix() const { return e_; }
    [[nodiscard]] Index dim() const { return e_.rows(); }
    [[nodiscard]] double coercivity() const { return c_; }
    [[nodiscard]] double norm() const { return norm_; }
    [[nodiscard]] bool diagonal() const { return diagonal_; }

    [[nodiscard]] Vec apply(const Vec& x) const { return e_ * x; }
    [[nodiscard]] Vec solve(const Vec& w) const { return lu_.solve(w); }

private:
    Mat e_;
    Eigen::PartialPivLU<Mat> lu_;
    double c_;
    double norm_;
    bool diagonal_;
};

/// Resolvent of F with respect to E: the unique z with w - E z in F(z).
///
/// Closed forms are used when F is linear/zero/identity, or when E is
/// diagonal and F acts componentwise (each coordinate then reduces to a
/// scaled scalar resolvent). Otherwise z is computed by the forward-backward
/// iteration z <- J_{sF}(z - s(Ez - w)) with s = c/||E||^2, which is a
/// contraction because Ez - w is c-strongly monotone and ||E||-Lipschitz.
/// `residual` is the graph residual of (z, w - Ez) against F.
InnerSolve resolvent_wrt(const MonotoneOperator& op, const PositiveDefiniteMap& e,
                         const Vec& w, double tol = kInnerTol, int max_iter = kInnerMaxIter);

}  // namespace lure
