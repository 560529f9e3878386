#include "lure_eq/lipschitz_map.hpp"

#include <algorithm>
#include <cmath>

namespace lure {

LipschitzMap::LipschitzMap(Index dim_in, Index dim_out, Eval eval, double lipschitz,
                           double strong_modulus, std::string kind)
    : dim_in_(dim_in),
      dim_out_(dim_out),
      eval_(std::move(eval)),
      lipschitz_(lipschitz),
      strong_modulus_(strong_modulus),
      kind_(std::move(kind)) {
    if (dim_in_ < 0 || dim_out_ <= 0) throw InvalidProblem("LipschitzMap: bad dimensions");
    if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_)) {
        throw InvalidProblem("LipschitzMap: Lipschitz bound must be finite and >= 0");
    }
    if (!(strong_modulus_ >= 0.0) || strong_modulus_ > lipschitz_ * (1.0 + 1e-12) + 1e-300) {
        throw InvalidProblem("LipschitzMap: need 0 <= strong modulus <= Lipschitz bound");
    }
}

LipschitzMap LipschitzMap::affine(Mat a, Vec b) {
    if (a.rows() != b.size()) throw DimensionError("affine map: A rows != len(b)");
    if (!a.allFinite() || !b.allFinite()) throw InvalidProblem("affine map: non-finite entry");
    const double lip = spectral_norm(a);
    double mu = 0.0;
    if (a.rows() == a.cols() && a.size() > 0) {
        mu = std::clamp(min_symmetric_eigenvalue(a), 0.0, lip);
    }
    LipschitzMap out(a.cols(), a.rows(), [a, b](const Vec& x) -> Vec { return a * x + b; }, lip,
                     mu, "affine");
    out.affine_ = Affine{std::move(a), std::move(b)};
    return out;
}

LipschitzMap LipschitzMap::affine_tanh(Mat a, Vec b, double alpha) {
    if (a.rows() != a.cols()) throw DimensionError("affine_tanh: A must be square");
    if (a.rows() != b.size()) throw DimensionError("affine_tanh: A rows != len(b)");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw InvalidProblem("affine_tanh: alpha must be >= 0");
    }
    const double lip = spectral_norm(a) + alpha;
    // tanh is monotone, so the modulus of A carries over.
    const double mu = std::clamp(min_symmetric_eigenvalue(a), 0.0, lip);
    const Index n = a.rows();
    return LipschitzMap(
        n, n,
        [a = std::move(a), b = std::move(b), alpha](const Vec& x) -> Vec {
            return a * x + b + alpha * x.array().tanh().matrix();
        },
        lip, mu, "affine_tanh");
}

Vec LipschitzMap::operator()(const Vec& x) const {
    require_dim(x.size(), dim_in_, "LipschitzMap input");
    return eval_(x);
}

const Mat& LipschitzMap::affine_matrix() const {
    if (!affine_) throw std::logic_error("LipschitzMap: not affine");
    return affine_->a;
}

const Vec& LipschitzMap::affine_offset() const {
    if (!affine_) throw std::logic_error("LipschitzMap: not affine");
    return affine_->b;
}

LipschitzMap LipschitzMap::premultiplied(const Mat& p) const {
    require_dim(p.cols(), dim_out_, "premultiplied");
    if (affine_) return affine(p * affine_->a, p * affine_->b);
    if (is_identity(p)) return *this;
    // Strong monotonicity does not survive a general P; keep the bound only.
    return LipschitzMap(
        dim_in_, p.rows(), [p, f = eval_](const Vec& x) -> Vec { return p * f(x); },
        spectral_norm(p) * lipschitz_, 0.0, kind_ + "*P");
}

namespace {

Vec random_point(Index n, double scale, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = u(rng);
    return v;
}

}  // namespace

bool sampled_lipschitz_ok(const LipschitzMap& f, std::mt19937_64& rng, int samples,
                          double scale) {
    for (int k = 0; k < samples; ++k) {
        const Vec x = random_point(f.dim_in(), scale, rng);
        const Vec y = random_point(f.dim_in(), scale, rng);
        const double lhs = (f(x) - f(y)).norm();
        const double rhs = f.lipschitz() * (x - y).norm();
        if (lhs > rhs * (1.0 + 1e-10) + 1e-12) return false;
    }
    return true;
}

bool sampled_monotone_ok(const LipschitzMap& f, double modulus, std::mt19937_64& rng,
                         int samples, double scale) {
    if (f.dim_in() != f.dim_out()) return false;
    for (int k = 0; k < samples; ++k) {
        const Vec x = random_point(f.dim_in(), scale, rng);
        const Vec y = random_point(f.dim_in(), scale, rng);
        const Vec d = x - y;
        const double lhs = (f(x) - f(y)).dot(d);
        const double rhs = modulus * d.squaredNorm();
        if (lhs < rhs - 1e-10 * (1.0 + std::abs(rhs) + d.squaredNorm())) return false;
    }
    return true;
}

}  // namespace lure
