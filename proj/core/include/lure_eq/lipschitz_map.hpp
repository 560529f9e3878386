#pragma once

#include "lure_eq/linalg.hpp"

#include <functional>
#include <optional>
#include <random>
#include <string>

namespace lure {

/// Single-valued Lipschitz map with declared constants.
///
/// `lipschitz()` is an upper bound on the Lipschitz constant and
/// `strong_modulus()` a lower bound on the strong-monotonicity modulus
/// (0 when the map is merely monotone or the modulus is unknown).
/// Affine maps keep their matrix form so that validators can run exact
/// matrix tests instead of sampling.
class LipschitzMap {
public:
    using Eval = std::function<Vec(const Vec&)>;

    LipschitzMap(Index dim_in, Index dim_out, Eval eval, double lipschitz,
                 double strong_modulus = 0.0, std::string kind = "custom");

    /// x -> A x + b. Constants come from the spectrum of A.
    static LipschitzMap affine(Mat a, Vec b);

    /// x -> A x + b + alpha * tanh(x) componentwise, alpha >= 0.
    static LipschitzMap affine_tanh(Mat a, Vec b, double alpha);

    [[nodiscard]] Vec operator()(const Vec& x) const;

    [[nodiscard]] Index dim_in() const { return dim_in_; }
    [[nodiscard]] Index dim_out() const { return dim_out_; }
    [[nodiscard]] double lipschitz() const { return lipschitz_; }
    [[nodiscard]] double strong_modulus() const { return strong_modulus_; }
    [[nodiscard]] const std::string& kind() const { return kind_; }

    [[nodiscard]] bool is_affine() const { return affine_.has_value(); }
    [[nodiscard]] const Mat& affine_matrix() const;
    [[nodiscard]] const Vec& affine_offset() const;

    /// x -> P f(x); affine form and constants are carried over.
    [[nodiscard]] LipschitzMap premultiplied(const Mat& p) const;

private:
    struct Affine {
        Mat a;
        Vec b;
    };

    Index dim_in_;
    Index dim_out_;
    Eval eval_;
    double lipschitz_;
    double strong_modulus_;
    std::string kind_;
    std::optional<Affine> affine_;
};

/// ||f(x) - f(y)|| <= L ||x - y|| on `samples` random pairs in [-scale, scale]^n.
bool sampled_lipschitz_ok(const LipschitzMap& f, std::mt19937_64& rng, int samples = 64,
                          double scale = 10.0);

/// <f(x) - f(y), x - y> >= modulus ||x - y||^2 (up to rounding) on random pairs.
bool sampled_monotone_ok(const LipschitzMap& f, double modulus, std::mt19937_64& rng,
                         int samples = 64, double scale = 10.0);

}  // namespace lure
