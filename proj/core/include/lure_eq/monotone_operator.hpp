#pragma once

#include "lure_eq/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lure {

/// Distance from v to the set F(x), or the distance from x to dom F when x
/// lies outside the domain (normal cones of box/ball/orthant).
struct MemberResidual {
    double distance = 0.0;
    double domain_gap = 0.0;

    [[nodiscard]] bool in_domain() const { return domain_gap == 0.0; }

    /// Distance when x is admissible, +infinity otherwise.
    [[nodiscard]] double value() const;
};

/// A maximal monotone operator from a closed catalog.
///
/// Every kind has a closed-form resolvent and an exact distance formula for
/// F(x), so inclusions built on top of it can always be certified. Operators
/// on stacked variables are built with `product`, which applies each block
/// to its own slice of coordinates.
class MonotoneOperator {
public:
    enum class Kind {
        Sign,           // w * Sign, componentwise (w = 1 for the plain sign map)
        L1,             // subdifferential of sum_i w_i |x_i|
        NormalConeBox,  // N_[lo, hi]; infinite bounds allowed
        NormalConeBall,
        NormalConeOrthant,
        Zero,
        Identity,
        Linear,         // x -> M x with M + M^T PSD
        Product,
    };

    static MonotoneOperator sign(Index dim);
    static MonotoneOperator l1(Vec weights);
    static MonotoneOperator l1(Index dim, double weight);
    static MonotoneOperator box(Vec lo, Vec hi);
    static MonotoneOperator ball(Vec center, double radius);
    static MonotoneOperator orthant(Index dim);
    static MonotoneOperator zero(Index dim);
    static MonotoneOperator identity(Index dim);
    static MonotoneOperator linear(Mat m);
    static MonotoneOperator product(std::vector<MonotoneOperator> blocks);

    [[nodiscard]] Index dim() const { return dim_; }
    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] std::string name() const;

    /// True when F(x) = F_1(x_1) x ... x F_n(x_n) with scalar F_i.
    [[nodiscard]] bool componentwise() const;

    /// True for normal cones of closed convex sets (and products of them).
    [[nodiscard]] bool is_normal_cone() const;

    /// J_{gamma F}(x) = (I + gamma F)^{-1} x.
    [[nodiscard]] Vec resolvent(double gamma, const Vec& x) const;

    /// Componentwise resolvent with a per-coordinate step; requires componentwise().
    [[nodiscard]] Vec resolvent_diag(const Vec& gammas, const Vec& x) const;

    /// J_{gamma F^{-1}}(x) = x - gamma J_{F/gamma}(x/gamma).
    [[nodiscard]] Vec inverse_resolvent(double gamma, const Vec& x) const;

    /// Exact distance from v to F(x). Coordinates within `active_tol` of a
    /// kink (0 for sign, a bound for a box, the sphere for a ball) are
    /// treated as lying on it.
    [[nodiscard]] MemberResidual member_residual(const Vec& x, const Vec& v,
                                                 double active_tol = 0.0) const;

    /// Natural residual ||x - J_F(x + v)||: zero iff v in F(x), continuous in
    /// (x, v), and bounded by twice the graph distance of (x, v) to gph F.
    [[nodiscard]] double graph_residual(const Vec& x, const Vec& v) const;

    /// Minimal-norm element of F(x); nullopt when x is outside dom F.
    [[nodiscard]] std::optional<Vec> min_norm_element(const Vec& x) const;

    [[nodiscard]] double domain_distance(const Vec& x) const;

    // Parameters. Only the ones matching kind() are meaningful.
    [[nodiscard]] const Vec& weights() const { return a_; }
    [[nodiscard]] const Vec& lower() const { return a_; }
    [[nodiscard]] const Vec& upper() const { return b_; }
    [[nodiscard]] const Vec& center() const { return a_; }
    [[nodiscard]] double radius() const { return radius_; }
    [[nodiscard]] const Mat& matrix() const { return m_; }
    [[nodiscard]] const std::vector<MonotoneOperator>& blocks() const { return blocks_; }

private:
    MonotoneOperator(Kind kind, Index dim) : kind_(kind), dim_(dim) {}

    Kind kind_;
    Index dim_;
    Vec a_;
    Vec b_;
    double radius_ = 0.0;
    Mat m_;
    std::vector<MonotoneOperator> blocks_;
};

// Free-function spellings of the core operations.

Vec resolvent(const MonotoneOperator& op, double gamma, const Vec& x);

Vec inverse_resolvent(const MonotoneOperator& op, double gamma, const Vec& x);

MemberResidual member_residual(const MonotoneOperator& op, const Vec& x, const Vec& v,
                               double active_tol = 0.0);

}  // namespace lure
