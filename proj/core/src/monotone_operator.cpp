#include "lure_eq/monotone_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lure {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ScalarMember {
    double distance;
    double gap;
};

double soft_threshold(double t, double thresh) {
    if (t > thresh) return t - thresh;
    if (t < -thresh) return t + thresh;
    return 0.0;
}

ScalarMember box_member(double x, double v, double lo, double hi, double tol) {
    if (x < lo - tol) return {0.0, lo - x};
    if (x > hi + tol) return {0.0, x - hi};
    const bool at_lo = x <= lo + tol;
    const bool at_hi = x >= hi - tol;
    if (at_lo && at_hi) return {0.0, 0.0};
    if (at_lo) return {std::max(v, 0.0), 0.0};
    if (at_hi) return {std::max(-v, 0.0), 0.0};
    return {std::abs(v), 0.0};
}

ScalarMember l1_member(double x, double v, double w, double tol) {
    if (std::abs(x) <= tol) return {std::max(std::abs(v) - w, 0.0), 0.0};
    return {std::abs(v - (x > 0.0 ? w : -w)), 0.0};
}

void require_nonempty(Index dim, const char* what) {
    if (dim <= 0) throw InvalidProblem(std::string(what) + ": dimension must be positive");
}

}  // namespace

double MemberResidual::value() const { return in_domain() ? distance : kInf; }

MonotoneOperator MonotoneOperator::sign(Index dim) {
    require_nonempty(dim, "sign");
    MonotoneOperator op(Kind::Sign, dim);
    op.a_ = Vec::Ones(dim);
    return op;
}

MonotoneOperator MonotoneOperator::l1(Vec weights) {
    require_nonempty(weights.size(), "l1");
    for (Index i = 0; i < weights.size(); ++i) {
        if (!(weights(i) > 0.0) || !std::isfinite(weights(i))) {
            throw InvalidProblem("l1: weights must be positive and finite");
        }
    }
    MonotoneOperator op(Kind::L1, weights.size());
    op.a_ = std::move(weights);
    return op;
}

MonotoneOperator MonotoneOperator::l1(Index dim, double weight) {
    require_nonempty(dim, "l1");
    return l1(Vec::Constant(dim, weight));
}

MonotoneOperator MonotoneOperator::box(Vec lo, Vec hi) {
    require_nonempty(lo.size(), "box");
    if (lo.size() != hi.size()) throw DimensionError("box: lo and hi differ in length");
    for (Index i = 0; i < lo.size(); ++i) {
        if (std::isnan(lo(i)) || std::isnan(hi(i)) || lo(i) > hi(i) || lo(i) == kInf ||
            hi(i) == -kInf) {
            throw InvalidProblem("box: require lo <= hi with lo < +inf and hi > -inf");
        }
    }
    MonotoneOperator op(Kind::NormalConeBox, lo.size());
    op.a_ = std::move(lo);
    op.b_ = std::move(hi);
    return op;
}

MonotoneOperator MonotoneOperator::ball(Vec center, double radius) {
    require_nonempty(center.size(), "ball");
    require_finite(center, "ball center");
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw InvalidProblem("ball: radius must be positive and finite");
    }
    MonotoneOperator op(Kind::NormalConeBall, center.size());
    op.a_ = std::move(center);
    op.radius_ = radius;
    return op;
}

MonotoneOperator MonotoneOperator::orthant(Index dim) {
    require_nonempty(dim, "orthant");
    MonotoneOperator op(Kind::NormalConeOrthant, dim);
    op.a_ = Vec::Zero(dim);
    op.b_ = Vec::Constant(dim, kInf);
    return op;
}

MonotoneOperator MonotoneOperator::zero(Index dim) {
    require_nonempty(dim, "zero");
    return MonotoneOperator(Kind::Zero, dim);
}

MonotoneOperator MonotoneOperator::identity(Index dim) {
    require_nonempty(dim, "identity");
    return MonotoneOperator(Kind::Identity, dim);
}

MonotoneOperator MonotoneOperator::linear(Mat m) {
    require_nonempty(m.rows(), "linear");
    if (m.rows() != m.cols()) throw DimensionError("linear: matrix must be square");
    if (!m.allFinite()) throw InvalidProblem("linear: non-finite entry");
    const double scale = std::max(1.0, spectral_norm(m));
    if (min_symmetric_eigenvalue(m) < -1e-12 * scale) {
        throw InvalidProblem("linear: M + M^T is not positive semidefinite");
    }
    MonotoneOperator op(Kind::Linear, m.rows());
    op.m_ = std::move(m);
    return op;
}

MonotoneOperator MonotoneOperator::product(std::vector<MonotoneOperator> blocks) {
    if (blocks.empty()) throw InvalidProblem("product: needs at least one block");
    Index dim = 0;
    for (const auto& b : blocks) dim += b.dim();
    MonotoneOperator op(Kind::Product, dim);
    op.blocks_ = std::move(blocks);
    return op;
}

std::string MonotoneOperator::name() const {
    switch (kind_) {
        case Kind::Sign: return "sign";
        case Kind::L1: return "l1";
        case Kind::NormalConeBox: return "normal_cone_box";
        case Kind::NormalConeBall: return "normal_cone_ball";
        case Kind::NormalConeOrthant: return "normal_cone_orthant";
        case Kind::Zero: return "zero";
        case Kind::Identity: return "identity";
        case Kind::Linear: return "linear";
        case Kind::Product: {
            std::string s = "product(";
            for (std::size_t i = 0; i < blocks_.size(); ++i) {
                if (i) s += ",";
                s += blocks_[i].name();
            }
            return s + ")";
        }
    }
    return "unknown";
}

bool MonotoneOperator::componentwise() const {
    switch (kind_) {
        case Kind::NormalConeBall:
        case Kind::Linear: return false;
        case Kind::Product:
            return std::all_of(blocks_.begin(), blocks_.end(),
                               [](const MonotoneOperator& b) { return b.componentwise(); });
        default: return true;
    }
}

bool MonotoneOperator::is_normal_cone() const {
    switch (kind_) {
        case Kind::NormalConeBox:
        case Kind::NormalConeBall:
        case Kind::NormalConeOrthant: return true;
        case Kind::Product:
            return std::all_of(blocks_.begin(), blocks_.end(),
                               [](const MonotoneOperator& b) { return b.is_normal_cone(); });
        default: return false;
    }
}

Vec MonotoneOperator::resolvent(double gamma, const Vec& x) const {
    require_positive(gamma, "resolvent: gamma");
    require_dim(x.size(), dim_, "resolvent");
    switch (kind_) {
        case Kind::NormalConeBall: {
            const Vec d = x - a_;
            const double r = d.norm();
            return r <= radius_ ? x : Vec(a_ + (radius_ / r) * d);
        }
        case Kind::Linear: {
            const Mat lhs = Mat::Identity(dim_, dim_) + gamma * m_;
            return lhs.partialPivLu().solve(x);
        }
        case Kind::Product: {
            Vec out(dim_);
            Index off = 0;
            for (const auto& b : blocks_) {
                out.segment(off, b.dim()) = b.resolvent(gamma, x.segment(off, b.dim()));
                off += b.dim();
            }
            return out;
        }
        default: return resolvent_diag(Vec::Constant(dim_, gamma), x);
    }
}

Vec MonotoneOperator::resolvent_diag(const Vec& gammas, const Vec& x) const {
    require_dim(x.size(), dim_, "resolvent_diag");
    require_dim(gammas.size(), dim_, "resolvent_diag steps");
    if (!componentwise()) {
        throw std::invalid_argument("resolvent_diag: " + name() + " is not componentwise");
    }
    Vec out(dim_);
    switch (kind_) {
        case Kind::Sign:
        case Kind::L1:
            for (Index i = 0; i < dim_; ++i) out(i) = soft_threshold(x(i), gammas(i) * a_(i));
            break;
        case Kind::NormalConeBox:
        case Kind::NormalConeOrthant:
            for (Index i = 0; i < dim_; ++i) out(i) = std::clamp(x(i), a_(i), b_(i));
            break;
        case Kind::Zero: out = x; break;
        case Kind::Identity: out = x.array() / (1.0 + gammas.array()); break;
        case Kind::Product: {
            Index off = 0;
            for (const auto& b : blocks_) {
                out.segment(off, b.dim()) =
                    b.resolvent_diag(gammas.segment(off, b.dim()), x.segment(off, b.dim()));
                off += b.dim();
            }
            break;
        }
        default: break;
    }
    return out;
}

Vec MonotoneOperator::inverse_resolvent(double gamma, const Vec& x) const {
    require_positive(gamma, "inverse_resolvent: gamma");
    require_dim(x.size(), dim_, "inverse_resolvent");
    return x - gamma * resolvent(1.0 / gamma, x / gamma);
}

MemberResidual MonotoneOperator::member_residual(const Vec& x, const Vec& v,
                                                 double active_tol) const {
    require_dim(x.size(), dim_, "member_residual point");
    require_dim(v.size(), dim_, "member_residual value");
    switch (kind_) {
        case Kind::Zero: return {v.norm(), 0.0};
        case Kind::Identity: return {(v - x).norm(), 0.0};
        case Kind::Linear: return {(v - m_ * x).norm(), 0.0};
        case Kind::NormalConeBall: {
            const Vec d = x - a_;
            const double r = d.norm();
            if (r > radius_ + active_tol) return {0.0, r - radius_};
            if (r < radius_ - active_tol) return {v.norm(), 0.0};
            const Vec n = d / r;
            const double t = std::max(0.0, n.dot(v));
            return {(v - t * n).norm(), 0.0};
        }
        case Kind::Product: {
            double dist2 = 0.0;
            double gap2 = 0.0;
            Index off = 0;
            for (const auto& b : blocks_) {
                const auto r = b.member_residual(x.segment(off, b.dim()), v.segment(off, b.dim()),
                                                 active_tol);
                dist2 += r.distance * r.distance;
                gap2 += r.domain_gap * r.domain_gap;
                off += b.dim();
            }
            return {std::sqrt(dist2), std::sqrt(gap2)};
        }
        default: break;
    }
    double dist2 = 0.0;
    double gap2 = 0.0;
    for (Index i = 0; i < dim_; ++i) {
        const ScalarMember s = (kind_ == Kind::Sign || kind_ == Kind::L1)
                                   ? l1_member(x(i), v(i), a_(i), active_tol)
                                   : box_member(x(i), v(i), a_(i), b_(i), active_tol);
        dist2 += s.distance * s.distance;
        gap2 += s.gap * s.gap;
    }
    return {std::sqrt(dist2), std::sqrt(gap2)};
}

double MonotoneOperator::graph_residual(const Vec& x, const Vec& v) const {
    require_dim(x.size(), dim_, "graph_residual point");
    require_dim(v.size(), dim_, "graph_residual value");
    return (x - resolvent(1.0, x + v)).norm();
}

std::optional<Vec> MonotoneOperator::min_norm_element(const Vec& x) const {
    require_dim(x.size(), dim_, "min_norm_element");
    switch (kind_) {
        case Kind::Sign:
        case Kind::L1: {
            Vec out(dim_);
            for (Index i = 0; i < dim_; ++i) {
                out(i) = x(i) > 0.0 ? a_(i) : (x(i) < 0.0 ? -a_(i) : 0.0);
            }
            return out;
        }
        case Kind::NormalConeBox:
        case Kind::NormalConeOrthant:
        case Kind::NormalConeBall:
            if (domain_distance(x) > 0.0) return std::nullopt;
            return Vec::Zero(dim_);
        case Kind::Zero: return Vec::Zero(dim_);
        case Kind::Identity: return x;
        case Kind::Linear: return Vec(m_ * x);
        case Kind::Product: {
            Vec out(dim_);
            Index off = 0;
            for (const auto& b : blocks_) {
                auto e = b.min_norm_element(x.segment(off, b.dim()));
                if (!e) return std::nullopt;
                out.segment(off, b.dim()) = *e;
                off += b.dim();
            }
            return out;
        }
    }
    return std::nullopt;
}

double MonotoneOperator::domain_distance(const Vec& x) const {
    require_dim(x.size(), dim_, "domain_distance");
    switch (kind_) {
        case Kind::NormalConeBox:
        case Kind::NormalConeOrthant:
        case Kind::NormalConeBall: return (x - resolvent(1.0, x)).norm();
        case Kind::Product: {
            double gap2 = 0.0;
            Index off = 0;
            for (const auto& b : blocks_) {
                const double g = b.domain_distance(x.segment(off, b.dim()));
                gap2 += g * g;
                off += b.dim();
            }
            return std::sqrt(gap2);
        }
        default: return 0.0;
    }
}

Vec resolvent(const MonotoneOperator& op, double gamma, const Vec& x) {
    return op.resolvent(gamma, x);
}

Vec inverse_resolvent(const MonotoneOperator& op, double gamma, const Vec& x) {
    return op.inverse_resolvent(gamma, x);
}

MemberResidual member_residual(const MonotoneOperator& op, const Vec& x, const Vec& v,
                               double active_tol) {
    return op.member_residual(x, v, active_tol);
}

}  // namespace lure
