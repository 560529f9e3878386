#include "lure_eq/lure_system.hpp"

#include <cmath>

namespace lure {

LureSystem::LureSystem(LipschitzMap f, Mat b, Mat c, Mat d, MonotoneOperator op,
                       std::optional<Mat> p)
    : f_(std::move(f)),
      b_(std::move(b)),
      c_(std::move(c)),
      d_(std::move(d)),
      op_(std::move(op)),
      p_supplied_(p.has_value()) {
    const Index n = b_.rows();
    const Index m = b_.cols();
    if (n == 0 || m == 0) throw DimensionError("LureSystem: B must be non-empty");
    require_dim(f_.dim_in(), n, "LureSystem: f input");
    require_dim(f_.dim_out(), n, "LureSystem: f output");
    require_dim(c_.rows(), m, "LureSystem: C rows");
    require_dim(c_.cols(), n, "LureSystem: C cols");
    require_dim(d_.rows(), m, "LureSystem: D rows");
    require_dim(d_.cols(), m, "LureSystem: D cols");
    require_dim(op_.dim(), m, "LureSystem: F");
    if (!b_.allFinite() || !c_.allFinite() || !d_.allFinite()) {
        throw InvalidProblem("LureSystem: non-finite matrix entry");
    }
    if (p) {
        require_dim(p->rows(), n, "LureSystem: P rows");
        require_dim(p->cols(), n, "LureSystem: P cols");
        const double scale = std::max(1.0, spectral_norm(*p));
        if ((*p - p->transpose()).norm() > 1e-12 * scale) {
            throw InvalidProblem("LureSystem: P must be symmetric");
        }
        if (!(min_symmetric_eigenvalue(*p) > 0.0)) {
            throw InvalidProblem("LureSystem: P must be positive definite");
        }
        p_ = std::move(*p);
    } else {
        p_ = Mat::Identity(n, n);
    }
}

double LureSystem::pb_ct_gap() const { return spectral_norm(p_ * b_ - c_.transpose()); }

}  // namespace lure
