#include "lure_eq/resolvent.hpp"

#include <cmath>

namespace lure {

PositiveDefiniteMap::PositiveDefiniteMap(Mat e) : e_(std::move(e)) {
    if (e_.rows() != e_.cols() || e_.rows() == 0) {
        throw DimensionError("PositiveDefiniteMap: matrix must be square and non-empty");
    }
    if (!e_.allFinite()) throw InvalidProblem("PositiveDefiniteMap: non-finite entry");
    c_ = min_symmetric_eigenvalue(e_);
    if (!(c_ > 0.0)) {
        throw InvalidProblem("PositiveDefiniteMap: symmetric part is not positive definite");
    }
    norm_ = spectral_norm(e_);
    diagonal_ = is_diagonal(e_);
    lu_ = e_.partialPivLu();
}

InnerSolve resolvent_wrt(const MonotoneOperator& op, const PositiveDefiniteMap& e,
                         const Vec& w, double tol, int max_iter) {
    require_dim(e.dim(), op.dim(), "resolvent_wrt: E");
    require_dim(w.size(), op.dim(), "resolvent_wrt: w");
    const Mat& em = e.matrix();
    const Index n = op.dim();

    auto finish = [&](Vec z, int iters, bool conv) {
        InnerSolve out;
        out.residual = op.graph_residual(z, w - em * z);
        out.value = std::move(z);
        out.iterations = iters;
        out.converged = conv || out.residual <= tol;
        return out;
    };

    switch (op.kind()) {
        case MonotoneOperator::Kind::Zero: return finish(e.solve(w), 0, true);
        case MonotoneOperator::Kind::Identity:
            return finish((em + Mat::Identity(n, n)).partialPivLu().solve(w), 0, true);
        case MonotoneOperator::Kind::Linear:
            return finish((em + op.matrix()).partialPivLu().solve(w), 0, true);
        default: break;
    }

    if (e.diagonal()) {
        const Vec d = em.diagonal();
        // e_i z_i + F_i(z_i) ∋ w_i  <=>  z_i = J_{F_i / e_i}(w_i / e_i)
        if (op.componentwise()) {
            return finish(op.resolvent_diag(d.cwiseInverse(), w.cwiseQuotient(d)), 0, true);
        }
        if ((d.array() == d(0)).all()) {
            return finish(op.resolvent(1.0 / d(0), w / d(0)), 0, true);
        }
    }

    const double step = e.coercivity() / (e.norm() * e.norm());
    Vec z = op.resolvent(step, w / e.norm());
    double res = op.graph_residual(z, w - em * z);
    int it = 0;
    while (res > tol && it < max_iter) {
        z = op.resolvent(step, z - step * (em * z - w));
        res = op.graph_residual(z, w - em * z);
        ++it;
    }
    return finish(std::move(z), it, res <= tol);
}

}  // namespace lure
