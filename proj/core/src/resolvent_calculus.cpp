#include "lure_eq/resolvent_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace lure {
namespace {

void require_monotone(const Mat& d, const char* what) {
    const double scale = std::max(1.0, spectral_norm(d));
    if (min_symmetric_eigenvalue(d) < -1e-12 * scale) {
        throw InvalidProblem(std::string(what) + ": D + D^T is not positive semidefinite");
    }
}

PositiveDefiniteMap weight_for(const Mat& d, double gamma) {
    const Index m = d.rows();
    const Mat shifted = gamma * Mat::Identity(m, m) + d;
    return PositiveDefiniteMap(shifted.partialPivLu().inverse());
}

InnerSolve certified(Vec v, const ComposedOperatorB& b, const Vec& c, int iters, double tol) {
    InnerSolve out;
    out.residual = b.F.graph_residual(c - b.D * v, v);
    out.value = std::move(v);
    out.iterations = iters;
    out.converged = out.residual <= tol;
    return out;
}


// One branch of a scalar monotone graph. Either v is pinned (p ranges over
// [lo, hi]), p is pinned (v ranges over [lo, hi]), or v = p.
struct Piece {
    enum Type { FixV, FixP, Diagonal } type;
    double value = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

void scalar_pieces(const MonotoneOperator& op, std::vector<std::vector<Piece>>& out) {
    using Kind = MonotoneOperator::Kind;
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < op.dim(); ++i) {
        std::vector<Piece> ps;
        switch (op.kind()) {
            case Kind::Sign:
            case Kind::L1: {
                const double w = op.weights()(i);
                ps = {{Piece::FixP, 0.0, -w, w}, {Piece::FixV, w, 0.0, inf},
                      {Piece::FixV, -w, -inf, 0.0}};
                break;
            }
            case Kind::NormalConeBox:
            case Kind::NormalConeOrthant: {
                const double lo = op.lower()(i);
                const double hi = op.upper()(i);
                ps = {{Piece::FixV, 0.0, lo, hi}};
                if (std::isfinite(lo)) ps.push_back({Piece::FixP, lo, -inf, 0.0});
                if (std::isfinite(hi) && hi != lo) ps.push_back({Piece::FixP, hi, 0.0, inf});
                break;
            }
            case Kind::Zero: ps = {{Piece::FixV, 0.0, -inf, inf}}; break;
            case Kind::Identity: ps = {{Piece::Diagonal}}; break;
            case Kind::Product: {
                for (const auto& b : op.blocks()) scalar_pieces(b, out);
                return;
            }
            default: throw std::logic_error("scalar_pieces: operator is not componentwise");
        }
        out.push_back(std::move(ps));
    }
}

// Exact solve of v in F(c - D v) for componentwise F by enumerating the
// branch of every coordinate. Returns nullopt when no branch pattern works
// (empty B(c)) or the dimension makes enumeration too expensive.
std::optional<Vec> enumerate_branches(const MonotoneOperator& op, const Mat& d, const Vec& c) {
    std::vector<std::vector<Piece>> pieces;
    scalar_pieces(op, pieces);
    const Index m = c.size();
    double patterns = 1.0;
    for (const auto& p : pieces) patterns *= static_cast<double>(p.size());
    if (patterns > 2e5) return std::nullopt;

    const double scale = 1.0 + c.lpNorm<Eigen::Infinity>();
    const double slack = 1e-11 * scale;
    std::vector<std::size_t> choice(static_cast<std::size_t>(m), 0);
    Mat lhs(m, m);
    Vec rhs(m);
    while (true) {
        // Unknowns: all of v. Rows: v_i = a (FixV), (c - D v)_i = a (FixP), v_i = (c - D v)_i.
        for (Index i = 0; i < m; ++i) {
            const Piece& pc = pieces[static_cast<std::size_t>(i)][choice[static_cast<std::size_t>(i)]];
            lhs.row(i).setZero();
            switch (pc.type) {
                case Piece::FixV:
                    lhs(i, i) = 1.0;
                    rhs(i) = pc.value;
                    break;
                case Piece::FixP:
                    lhs.row(i) = d.row(i);
                    rhs(i) = c(i) - pc.value;
                    break;
                case Piece::Diagonal:
                    lhs.row(i) = d.row(i);
                    lhs(i, i) += 1.0;
                    rhs(i) = c(i);
                    break;
            }
        }
        const Eigen::CompleteOrthogonalDecomposition<Mat> cod(lhs);
        const Vec v = cod.solve(rhs);
        if (v.allFinite() && (lhs * v - rhs).norm() <= slack) {
            const Vec p = c - d * v;
            bool ok = true;
            for (Index i = 0; ok && i < m; ++i) {
                const Piece& pc =
                    pieces[static_cast<std::size_t>(i)][choice[static_cast<std::size_t>(i)]];
                const double x = pc.type == Piece::FixV ? p(i) : v(i);
                ok = pc.type == Piece::Diagonal || (x >= pc.lo - slack && x <= pc.hi + slack);
            }
            if (ok) return v;
        }
        Index k = 0;
        while (k < m) {
            auto& ck = choice[static_cast<std::size_t>(k)];
            if (++ck < pieces[static_cast<std::size_t>(k)].size()) break;
            ck = 0;
            ++k;
        }
        if (k == m) return std::nullopt;
    }
}

}  // namespace

ComposedOperatorB::ComposedOperatorB(MonotoneOperator op, Mat d) : F(std::move(op)), D(std::move(d)) {
    require_dim(D.rows(), F.dim(), "ComposedOperatorB: D rows");
    require_dim(D.cols(), F.dim(), "ComposedOperatorB: D cols");
    require_monotone(D, "ComposedOperatorB");
}

ComposedOperatorG::ComposedOperatorG(ComposedOperatorB b, Mat c) : B(std::move(b)), C(std::move(c)) {
    require_dim(C.rows(), B.dim(), "ComposedOperatorG: C rows");
    if (C.cols() == 0) throw DimensionError("ComposedOperatorG: C has no columns");
}

std::optional<SemiCoercivityData> semi_coercivity(const Mat& d) {
    if (d.rows() != d.cols()) throw DimensionError("semi_coercivity: D must be square");
    const Mat sym = 0.5 * (d + d.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    const Vec& ev = es.eigenvalues();
    std::vector<Index> keep;
    for (Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > 1e-10) keep.push_back(i);
    }
    if (keep.empty()) return std::nullopt;
    SemiCoercivityData out{ev(keep.front()), Mat(d.rows(), static_cast<Index>(keep.size()))};
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.range_basis.col(static_cast<Index>(k)) = es.eigenvectors().col(keep[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------

BResolvent::BResolvent(ComposedOperatorB b, double gamma, double tol, int max_iter)
    : b_(std::move(b)),
      gamma_(gamma),
      tol_(tol),
      max_iter_(max_iter),
      e_(weight_for(b_.D, (require_positive(gamma, "BResolvent: gamma"), gamma))) {}

InnerSolve BResolvent::operator()(const Vec& x) const {
    require_dim(x.size(), b_.dim(), "BResolvent");
    const InnerSolve z = resolvent_wrt(b_.F, e_, e_.apply(x), tol_, max_iter_);
    InnerSolve out;
    out.value = e_.apply(gamma_ * z.value + b_.D * x);
    out.multiplier = (x - out.value) / gamma_;
    const Vec point = out.value + b_.D * (out.value - x) / gamma_;
    out.residual = b_.F.graph_residual(point, out.multiplier);
    out.iterations = z.iterations;
    out.converged = z.converged;
    return out;
}

InnerSolve resolvent_B(const ComposedOperatorB& b, double gamma, const Vec& x, double tol,
                       int max_iter) {
    return BResolvent(b, gamma, tol, max_iter)(x);
}

// ---------------------------------------------------------------------------

GResolvent::GResolvent(ComposedOperatorG g, double gamma, double tol, int max_iter)
    : g_(std::move(g)), gamma_(gamma), tol_(tol), max_iter_(max_iter) {
    require_positive(gamma, "GResolvent: gamma");
    if (g_.C.rows() == g_.C.cols() && is_identity(g_.C)) {
        path_ = Path::Identity;
        inner_.emplace(g_.B, gamma_, tol_, max_iter_);
        return;
    }
    cct_ = g_.C * g_.C.transpose();
    const double norm_cct = spectral_norm(cct_);
    if (norm_cct == 0.0) {
        path_ = Path::Zero;
        return;
    }
    path_ = Path::Dual;
    dual_step_ = 1.0 / (gamma_ * norm_cct);
    // Inner tolerance tighter than the outer one: the dual certificate is
    // only as good as the backward steps it is built from.
    inner_.emplace(g_.B, 1.0 / dual_step_, std::min(tol_, kInnerTol) * 1e-2, max_iter_);
}

InnerSolve GResolvent::operator()(const Vec& w) const {
    require_dim(w.size(), g_.dim(), "GResolvent");
    if (path_ == Path::Identity) return (*inner_)(w);
    if (path_ == Path::Zero) {
        InnerSolve lam = eval_B(g_.B, Vec::Zero(g_.B.dim()), tol_, max_iter_);
        InnerSolve out;
        out.value = w;
        out.multiplier = std::move(lam.value);
        out.residual = lam.residual;
        out.iterations = lam.iterations;
        out.converged = lam.converged;
        return out;
    }

    const double s = dual_step_;
    const Vec cw = g_.C * w;
    Vec v = Vec::Zero(g_.B.dim());
    InnerSolve out;
    out.converged = false;
    bool inner_ok = true;
    for (int it = 1; it <= max_iter_; ++it) {
        const Vec u = v - s * (gamma_ * (cct_ * v) - cw);
        const InnerSolve p = (*inner_)(u / s);
        inner_ok = inner_ok && p.converged;
        v = u - s * p.value;
        const Vec y = w - gamma_ * g_.C.transpose() * v;
        const double res = g_.B.F.graph_residual(g_.C * y - g_.B.D * v, v);
        out.iterations = it;
        out.residual = res;
        if (res <= tol_) {
            out.converged = inner_ok;
            break;
        }
    }
    out.value = w - gamma_ * g_.C.transpose() * v;
    out.multiplier = std::move(v);
    return out;
}

InnerSolve resolvent_G(const ComposedOperatorG& g, double gamma, const Vec& w, double tol,
                       int max_iter) {
    return GResolvent(g, gamma, tol, max_iter)(w);
}

// ---------------------------------------------------------------------------

InnerSolve eval_B(const ComposedOperatorB& b, const Vec& c, double tol, int max_iter) {
    require_dim(c.size(), b.dim(), "eval_B");
    const Index m = b.dim();
    const MonotoneOperator& op = b.F;
    const Mat& d = b.D;
    using Kind = MonotoneOperator::Kind;

    if (d.isZero(0.0)) {
        if (auto v = op.min_norm_element(c)) return certified(std::move(*v), b, c, 0, tol);
        InnerSolve out;
        out.value = Vec::Zero(m);
        out.residual = op.domain_distance(c);
        out.converged = false;
        return out;
    }

    switch (op.kind()) {
        case Kind::Zero: return certified(Vec::Zero(m), b, c, 0, tol);
        case Kind::Identity:
            return certified((Mat::Identity(m, m) + d).partialPivLu().solve(c), b, c, 0, tol);
        case Kind::Linear: {
            // v = M (c - D v)
            const Mat lhs = Mat::Identity(m, m) + op.matrix() * d;
            const Vec rhs = op.matrix() * c;
            Eigen::FullPivLU<Mat> lu(lhs);
            if (lu.isInvertible()) return certified(lu.solve(rhs), b, c, 0, tol);
            break;
        }
        default: break;
    }

    if (is_diagonal(d) && op.componentwise()) {
        // d_i > 0:  v_i = (c_i - p_i)/d_i with p_i = J_{d_i F_i}(c_i)
        // d_i = 0:  v_i = minimal-norm element of F_i(c_i)
        const Vec diag = d.diagonal();
        const Vec steps = (diag.array() > 0.0).select(diag, Vec::Ones(m));
        const Vec p = op.resolvent_diag(steps, c);
        Vec point = p;
        for (Index i = 0; i < m; ++i) {
            if (diag(i) == 0.0) point(i) = c(i);
        }
        const auto sel = op.min_norm_element(point);
        Vec v(m);
        for (Index i = 0; i < m; ++i) {
            if (diag(i) > 0.0) {
                v(i) = (c(i) - p(i)) / diag(i);
            } else {
                v(i) = sel ? (*sel)(i) : 0.0;
            }
        }
        return certified(std::move(v), b, c, 0, tol);
    }

    if (op.componentwise()) {
        if (auto v = enumerate_branches(op, d, c)) {
            InnerSolve out = certified(std::move(*v), b, c, 0, tol);
            if (out.converged) return out;
        }
    }

    if (min_symmetric_eigenvalue(d) > 1e-12 * std::max(1.0, spectral_norm(d))) {
        // p = c - D v  =>  D^{-1}(c - p) in F(p)  =>  p = J^{D^{-1}}_F(D^{-1} c)
        const PositiveDefiniteMap dinv(d.partialPivLu().inverse());
        const InnerSolve p = resolvent_wrt(op, dinv, dinv.apply(c), tol * 1e-2, max_iter);
        InnerSolve out = certified(dinv.apply(c - p.value), b, c, p.iterations, tol);
        out.converged = out.converged && p.converged;
        return out;
    }

    // Tseng on 0 in F^{-1}(v) + (D v - c).
    const double step = 0.9 / spectral_norm(d);
    Vec v = Vec::Zero(m);
    double res = op.graph_residual(c - d * v, v);
    int it = 0;
    while (res > tol && it < max_iter) {
        const Vec dv = d * v;
        const Vec vh = op.inverse_resolvent(step, v - step * (dv - c));
        const Vec dvh = d * vh;
        v = vh - step * (dvh - dv);
        ++it;
        res = op.graph_residual(c - dvh, vh);
        if (res <= tol) {
            v = vh;
            break;
        }
    }
    return certified(std::move(v), b, c, it, tol);
}

// ---------------------------------------------------------------------------

ComposedOperatorB composed_b(const LureSystem& sys) { return ComposedOperatorB(sys.F(), sys.D()); }

ComposedOperatorG composed_g(const LureSystem& sys) {
    return ComposedOperatorG(composed_b(sys), sys.C());
}

InnerSolve eval_g(const LureSystem& sys, const Vec& x, double tol, int max_iter) {
    require_dim(x.size(), sys.state_dim(), "eval_g");
    InnerSolve out;
    out.value = sys.P() * sys.f()(x);
    const Mat gap = sys.P() * sys.B() - sys.C().transpose();
    if (gap.isZero(0.0)) return out;
    InnerSolve v = eval_B(composed_b(sys), sys.C() * x, tol, max_iter);
    out.value += gap * v.value;
    out.multiplier = std::move(v.value);
    out.residual = v.residual;
    out.iterations = v.iterations;
    out.converged = v.converged;
    return out;
}

double lipschitz_constant_g(const LureSystem& sys,
                            const std::optional<SemiCoercivityData>& semico) {
    const double base = spectral_norm(sys.P()) * sys.f().lipschitz();
    const double gap = sys.pb_ct_gap();
    if (gap <= 1e-10) return base;
    if (!semico || !(semico->c > 0.0)) {
        throw std::invalid_argument(
            "lipschitz_constant_g: P B != C^T requires a semi-coercive D (c > 0)");
    }
    return base + spectral_norm(sys.C()) * gap / semico->c;
}

HResolvent::HResolvent(const LureSystem& sys, double gamma, double tol, int max_iter)
    : sys_(sys),
      gamma_(gamma),
      tol_(tol),
      max_iter_(max_iter),
      lip_g_(lipschitz_constant_g(sys, semi_coercivity(sys.D()))),
      g_res_(composed_g(sys), gamma, std::min(tol, kInnerTol) * 1e-2, max_iter) {
    if (!(gamma_ * lip_g_ < 1.0)) {
        throw std::invalid_argument("HResolvent: need gamma * L_g < 1 (gamma = " +
                                    std::to_string(gamma_) + ", L_g = " +
                                    std::to_string(lip_g_) + ")");
    }
}

InnerSolve HResolvent::operator()(const Vec& x) const {
    require_dim(x.size(), sys_.state_dim(), "HResolvent");
    const double q = gamma_ * lip_g_;
    const double inner_tol = std::min(tol_, kInnerTol) * 1e-2;
    Vec y = x;
    InnerSolve out;
    out.converged = false;
    bool inner_ok = true;
    for (int it = 1; it <= max_iter_; ++it) {
        const InnerSolve g = eval_g(sys_, y, inner_tol, max_iter_);
        const InnerSolve r = g_res_(x - gamma_ * g.value);
        inner_ok = inner_ok && g.converged && r.converged;
        const double step = (r.value - y).norm();
        y = r.value;
        out.multiplier = r.multiplier;
        out.iterations = it;
        out.residual = q * step;
        if (out.residual <= tol_) {
            out.converged = inner_ok;
            break;
        }
    }
    out.value = std::move(y);
    return out;
}

InnerSolve resolvent_H(const LureSystem& sys, double gamma, const Vec& x, double tol,
                       int max_iter) {
    return HResolvent(sys, gamma, tol, max_iter)(x);
}

}  // namespace lure
