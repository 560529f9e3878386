#pragma once

#include "lure_eq/linalg.hpp"
#include "lure_eq/lipschitz_map.hpp"
#include "lure_eq/monotone_operator.hpp"

#include <optional>

namespace lure {

/// The Lur'e data (f, B, C, D, F) with an optional passivity certificate P.
///
///   x' = -f(x) + B lambda,  y = C x + D lambda,  lambda in -F(y)
///
/// Shapes: f: R^n -> R^n, B: n x m, C: m x n, D: m x m, F on R^m, P: n x n.
/// The constructor checks shapes and, when P is given, that it is symmetric
/// positive definite. Monotonicity of D and passivity are left to validate().
class LureSystem {
public:
    LureSystem(LipschitzMap f, Mat b, Mat c, Mat d, MonotoneOperator op,
               std::optional<Mat> p = std::nullopt);

    [[nodiscard]] const LipschitzMap& f() const { return f_; }
    [[nodiscard]] const Mat& B() const { return b_; }
    [[nodiscard]] const Mat& C() const { return c_; }
    [[nodiscard]] const Mat& D() const { return d_; }
    [[nodiscard]] const MonotoneOperator& F() const { return op_; }

    /// The certificate; identity when none was supplied.
    [[nodiscard]] const Mat& P() const { return p_; }
    [[nodiscard]] bool has_certificate() const { return p_supplied_; }

    [[nodiscard]] Index state_dim() const { return b_.rows(); }
    [[nodiscard]] Index port_dim() const { return b_.cols(); }

    /// ||P B - C^T||.
    [[nodiscard]] double pb_ct_gap() const;

private:
    LipschitzMap f_;
    Mat b_;
    Mat c_;
    Mat d_;
    MonotoneOperator op_;
    Mat p_;
    bool p_supplied_;
};

}  // namespace lure
