#include "lure_eq/qvi.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace lure {
namespace {

using Kind = MonotoneOperator::Kind;

std::optional<std::pair<Vec, Vec>> box_bounds(const MonotoneOperator& op) {
    switch (op.kind()) {
        case Kind::NormalConeBox:
        case Kind::NormalConeOrthant: return std::make_pair(op.lower(), op.upper());
        case Kind::Product: {
            Vec lo(op.dim());
            Vec hi(op.dim());
            Index off = 0;
            for (const auto& b : op.blocks()) {
                auto sub = box_bounds(b);
                if (!sub) return std::nullopt;
                lo.segment(off, b.dim()) = sub->first;
                hi.segment(off, b.dim()) = sub->second;
                off += b.dim();
            }
            return std::make_pair(std::move(lo), std::move(hi));
        }
        default: return std::nullopt;
    }
}

}  // namespace

QviProblem::QviProblem(LipschitzMap f_in, Mat d, MonotoneOperator omega)
    : f(std::move(f_in)), D(std::move(d)), Omega(std::move(omega)) {
    const Index n = D.rows();
    if (n == 0) throw DimensionError("QviProblem: D must be non-empty");
    require_dim(D.cols(), n, "QviProblem: D cols");
    require_dim(f.dim_in(), n, "QviProblem: f input");
    require_dim(f.dim_out(), n, "QviProblem: f output");
    require_dim(Omega.dim(), n, "QviProblem: Omega");
    if (min_symmetric_eigenvalue(D) < -1e-12 * std::max(1.0, spectral_norm(D))) {
        throw InvalidProblem("QviProblem: D + D^T is not positive semidefinite");
    }
}

LureSystem qvi_to_inclusion(const QviProblem& p) {
    const Index n = p.dim();
    return LureSystem(p.f, Mat::Identity(n, n), Mat::Identity(n, n), p.D, p.Omega,
                      Mat::Identity(n, n));
}

MovingSet moving_set_check(const QviProblem& p, const Vec& x) {
    require_dim(x.size(), p.dim(), "moving_set_check");
    if (!p.Omega.is_normal_cone()) {
        throw std::invalid_argument("moving_set_check: Omega must be a normal cone");
    }
    const Vec shift = p.D * p.f(x);
    MovingSet out;
    if (auto bounds = box_bounds(p.Omega)) {
        out.lower = bounds->first - shift;
        out.upper = bounds->second - shift;
    } else if (p.Omega.kind() == Kind::NormalConeBall) {
        out.center = p.Omega.center() - shift;
        out.radius = p.Omega.radius();
    }
    out.distance = p.Omega.domain_distance(x + shift);
    out.contains = out.distance <= 1e-10;
    return out;
}

double qvi_residual(const QviProblem& p, const Vec& x) {
    require_dim(x.size(), p.dim(), "qvi_residual");
    const Vec fx = p.f(x);
    return p.Omega.graph_residual(x + p.D * fx, -fx);
}

SolverReport solve_qvi(const QviProblem& p, const SolverConfig& cfg, const std::optional<Vec>& x0) {
    SolverReport rep = equilibrium(qvi_to_inclusion(p), cfg, x0);
    if (rep.solution.size() != p.dim() || !rep.solution.allFinite()) return rep;
    const double q = qvi_residual(p, rep.solution);
    rep.certified_residual = std::max(rep.certified_residual, q);
    if (rep.status == SolverStatus::Converged && !(q <= 10.0 * cfg.tol)) {
        rep.status = SolverStatus::StepRejected;
        rep.message = "QVI-form certificate failed (residual " + std::to_string(q) + ")";
    }
    return rep;
}

DualConstants dual_constants(const LipschitzMap& f, const Mat& d) {
    const double mu = f.strong_modulus();
    const double lip = f.lipschitz();
    if (!(mu > 0.0)) throw std::invalid_argument("dual_constants: f must be strongly monotone");
    DualConstants c{};
    c.mu_inv = mu / (lip * lip);
    c.lip_inv = 1.0 / mu;
    const double lip_sum = c.lip_inv + spectral_norm(d);
    c.mu_phi = c.mu_inv / (lip_sum * lip_sum);
    c.lip_phi = 1.0 / c.mu_inv;
    return c;
}

InnerSolve eval_phi(const LipschitzMap& f, const Mat& d, const Vec& y, double tol, int max_iter) {
    const Index n = y.size();
    require_dim(f.dim_in(), n, "eval_phi: f");
    require_dim(d.rows(), n, "eval_phi: D");
    auto residual = [&](const Vec& u) { return (f(y - d * u) - u).norm(); };
    InnerSolve out;

    if (d.isZero(0.0)) {
        out.value = f(y);
        return out;
    }
    if (f.is_affine()) {
        const Mat& a = f.affine_matrix();
        Eigen::FullPivLU<Mat> lu(Mat::Identity(n, n) + a * d);
        if (!lu.isInvertible()) throw InvalidProblem("eval_phi: I + A D is singular");
        out.value = lu.solve(a * y + f.affine_offset());
        out.residual = residual(out.value);
        return out;
    }
    if (!(f.strong_modulus() > 0.0)) {
        throw std::invalid_argument("eval_phi: f must be strongly monotone");
    }

    const double lip = f.lipschitz();
    const double norm_d = spectral_norm(d);
    Vec u = f(y);
    out.residual = residual(u);
    if (lip * norm_d < 1.0) {
        while (out.residual > tol && out.iterations < max_iter) {
            u = f(y - d * u);
            out.residual = residual(u);
            ++out.iterations;
        }
    } else {
        // Tseng on 0 = f^{-1}(u) + (D u - y): the backward step is
        // J_{s f^{-1}}(w) = w - s x with s x + f(x) = w, a (s + mu)-strongly
        // monotone equation solved by forward steps.
        const double s = 0.9 / norm_d;
        const double mu = f.strong_modulus();
        const double tau = (s + mu) / ((s + lip) * (s + lip));
        Vec x = y - d * u;
        auto inv_resolvent = [&](const Vec& w) {
            const double floor = 1e-15 * (1.0 + w.norm());
            for (int k = 0; k < max_iter; ++k) {
                const Vec r = s * x + f(x) - w;
                if (r.norm() <= std::max(1e-3 * tol, floor)) break;
                x -= tau * r;
            }
            return Vec(w - s * x);
        };
        while (out.residual > tol && out.iterations < max_iter) {
            const Vec du = d * u;
            const Vec half = inv_resolvent(u - s * (du - y));
            u = half - s * (d * half - du);
            out.residual = residual(u);
            ++out.iterations;
        }
    }
    out.value = std::move(u);
    out.converged = out.residual <= tol;
    return out;
}

QviDualReport solve_qvi_dual(const QviProblem& p, const SolverConfig& cfg,
                             const std::optional<Vec>& y0) {
    if (!p.Omega.is_normal_cone()) {
        throw std::invalid_argument("solve_qvi_dual: Omega must be a normal cone");
    }
    QviDualReport out;
    out.constants = dual_constants(p.f, p.D);
    const double tol = std::min(cfg.inner_tol, 1e-12);
    const LipschitzMap phi(
        p.dim(), p.dim(),
        [f = p.f, d = p.D, tol, it = cfg.inner_max_iter](const Vec& y) -> Vec {
            InnerSolve r = eval_phi(f, d, y, tol, it);
            if (!r.converged) throw SolverError("eval_phi did not converge");
            return std::move(r.value);
        },
        out.constants.lip_phi, out.constants.mu_phi, "dual-phi");

    out.dual = fb_strongly_monotone_solve(phi, p.Omega, y0.value_or(Vec::Zero(p.dim())), cfg);
    out.y_star = out.dual.solution;
    if (!out.y_star.allFinite() || out.dual.status == SolverStatus::StepRejected) return out;
    out.x_star = out.y_star - p.D * phi(out.y_star);
    out.qvi_residual = qvi_residual(p, out.x_star);

    const auto& its = out.dual.iterates;
    for (std::size_t k = 0; k + 1 < its.size(); ++k) {
        const double prev = (its[k] - out.y_star).norm();
        const double next = (its[k + 1] - out.y_star).norm();
        if (prev > 1e-9) out.observed_contraction = std::max(out.observed_contraction, next / prev);
    }
    if (out.dual.converged() && !(out.qvi_residual <= 10.0 * cfg.tol)) {
        out.dual.status = SolverStatus::StepRejected;
        out.dual.message = "recovered x* fails the QVI certificate";
    }
    return out;
}

}  // namespace lure
