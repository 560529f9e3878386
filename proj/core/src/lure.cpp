#include "lure_eq/lure.hpp"

#include "lure_eq/log.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace lure {

const char* to_string(ValidationMode m) {
    switch (m) {
        case ValidationMode::Strict: return "Strict";
        case ValidationMode::Passive: return "Passive";
        case ValidationMode::Invalid: return "Invalid";
    }
    return "Unknown";
}

const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::Explicit: return "explicit";
        case Scheme::SemiImplicit: return "semi_implicit";
        case Scheme::FullyImplicit: return "fully_implicit";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(const std::string& text) {
    if (text == "explicit") return Scheme::Explicit;
    if (text == "semi_implicit" || text == "semi-implicit") return Scheme::SemiImplicit;
    if (text == "fully_implicit" || text == "fully-implicit") return Scheme::FullyImplicit;
    return std::nullopt;
}

namespace {

constexpr double kPsdTol = 1e-9;
constexpr std::uint64_t kSampleSeed = 0x5eed1u;

bool sampled_passivity(const LureSystem& sys) {
    std::mt19937_64 rng(kSampleSeed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Index n = sys.state_dim();
    const Index m = sys.port_dim();
    const Mat gap = sys.P() * sys.B() - sys.C().transpose();
    const LipschitzMap pf = sys.f().premultiplied(sys.P());
    auto rnd = [&](Index k, double scale) {
        Vec v(k);
        for (Index i = 0; i < k; ++i) v(i) = scale * u(rng);
        return v;
    };
    for (int s = 0; s < 256; ++s) {
        const double scale = std::pow(10.0, (s % 5) - 2);
        const Vec x1 = rnd(n, 10.0);
        const Vec dx = rnd(n, scale);
        const Vec dy = rnd(m, 1.0);
        const double lhs = (pf(x1 + dx) - pf(x1)).dot(dx) + (gap * dy).dot(dx) +
                           (sys.D() * dy).dot(dy);
        if (lhs < -kPsdTol * (1.0 + dx.squaredNorm() + dy.squaredNorm())) return false;
    }
    return true;
}

}  // namespace

ValidationReport validate(const LureSystem& sys) {
    ValidationReport rep;
    const Mat& p = sys.P();
    const Mat& d = sys.D();
    if (!sys.has_certificate()) {
        rep.warnings.emplace_back("P not supplied; using the identity");
    }

    rep.pb_ct_norm = sys.pb_ct_gap();
    rep.pb_equals_ct = rep.pb_ct_norm <= 1e-10;
    rep.d_monotone = min_symmetric_eigenvalue(d) >= -1e-12 * std::max(1.0, spectral_norm(d));
    if (auto sc = semi_coercivity(d)) rep.d_semicoercive = sc->c;

    if (sys.f().is_affine()) {
        const Mat& a = sys.f().affine_matrix();
        const Index n = sys.state_dim();
        const Index m = sys.port_dim();
        const Mat pa = p * a + a.transpose() * p;
        const Mat gap = p * sys.B() - sys.C().transpose();
        Mat block(n + m, n + m);
        block.topLeftCorner(n, n) = pa;
        block.topRightCorner(n, m) = gap;
        block.bottomLeftCorner(m, n) = gap.transpose();
        block.bottomRightCorner(m, m) = d + d.transpose();
        rep.block_eigenvalues = symmetric_eigenvalues(block);
        rep.passivity_psd = rep.block_eigenvalues(0) >= -kPsdTol;
        rep.pf_monotone = min_symmetric_eigenvalue(pa) >= -kPsdTol;
    } else {
        std::mt19937_64 rng(kSampleSeed);
        rep.pf_monotone = sampled_monotone_ok(sys.f().premultiplied(p), 0.0, rng, 256);
        rep.passivity_psd = sampled_passivity(sys);
        rep.warnings.emplace_back("f is not affine; monotonicity and passivity were sampled");
    }

    if (rep.pb_equals_ct && rep.d_monotone && rep.pf_monotone) {
        rep.mode = ValidationMode::Strict;
    } else if (rep.passivity_psd && rep.d_monotone && rep.d_semicoercive) {
        rep.mode = ValidationMode::Passive;
    } else {
        rep.mode = ValidationMode::Invalid;
    }
    return rep;
}

double InclusionCertificate::value() const {
    if (!inner_converged) return std::numeric_limits<double>::infinity();
    return std::max({natural, witness, membership});
}

InclusionCertificate inclusion_residual(const LureSystem& sys, const Vec& x, double gamma,
                                        double tol, int max_iter) {
    require_dim(x.size(), sys.state_dim(), "inclusion_residual");
    require_positive(gamma, "inclusion_residual: gamma");
    InclusionCertificate cert;
    const InnerSolve g = eval_g(sys, x, tol, max_iter);
    const InnerSolve r = GResolvent(composed_g(sys), gamma, tol, max_iter)(x - gamma * g.value);
    cert.inner_converged = g.converged && r.converged;
    cert.point = r.value;
    cert.lambda = r.multiplier;
    cert.natural = (x - r.value).norm() / gamma;
    cert.witness = (sys.f()(r.value) + sys.B() * r.multiplier).norm();
    cert.membership =
        sys.F().graph_residual(sys.C() * r.value - sys.D() * r.multiplier, r.multiplier);
    return cert;
}

namespace {

SolverReport run_tseng(const LureSystem& sys, const SolverConfig& cfg, const Vec& x0,
                       SolverConfig& run) {
    const LipschitzMap ftilde = sys.f().premultiplied(sys.P());
    const double gamma = cfg.gamma ? *cfg.gamma : 0.9 / std::max(ftilde.lipschitz(), 1e-12);
    run.gamma = gamma;
    auto g_res =
        std::make_shared<GResolvent>(composed_g(sys), gamma, cfg.inner_tol, cfg.inner_max_iter);
    const ComposedOperatorG gop = composed_g(sys);
    ResolventOracle oracle = [g_res, gop, tol = cfg.inner_tol,
                              it = cfg.inner_max_iter](double s, const Vec& w) {
        if (s == g_res->gamma()) return (*g_res)(w);
        return resolvent_G(gop, s, w, tol, it);
    };
    return tseng_solve(ftilde, oracle, x0, run);
}

void certify(const LureSystem& sys, const SolverConfig& cfg, double gamma, SolverReport& rep) {
    if (rep.status == SolverStatus::Diverged || !rep.solution.allFinite()) return;
    const InclusionCertificate cert =
        inclusion_residual(sys, rep.solution, gamma, cfg.inner_tol, cfg.inner_max_iter);
    rep.certified_residual = cert.value();
    if (rep.status == SolverStatus::Converged && !(rep.certified_residual <= 10.0 * cfg.tol)) {
        rep.status = SolverStatus::StepRejected;
        rep.message = "certification failed (residual " + std::to_string(rep.certified_residual) +
                      "): range condition possibly violated";
    }
}

Vec initial_point(const LureSystem& sys, const std::optional<Vec>& x0) {
    Vec out = x0 ? *x0 : Vec::Zero(sys.state_dim());
    require_dim(out.size(), sys.state_dim(), "equilibrium: x0");
    return out;
}

}  // namespace

SolverReport equilibrium(const LureSystem& sys, const SolverConfig& cfg,
                         const std::optional<Vec>& x0_in, Route route) {
    const ValidationReport v = validate(sys);
    for (const auto& w : v.warnings) log::info(w);
    if (v.mode == ValidationMode::Invalid) {
        std::ostringstream os;
        os << "equilibrium: system is invalid (pb_equals_ct=" << v.pb_equals_ct
           << ", d_monotone=" << v.d_monotone << ", pf_monotone=" << v.pf_monotone
           << ", passivity_psd=" << v.passivity_psd << ")";
        throw InvalidProblem(os.str());
    }
    const Vec x0 = initial_point(sys, x0_in);

    if (route == Route::Auto) {
        route = v.mode == ValidationMode::Strict ? Route::Tseng : Route::ProximalPoint;
    }

    SolverReport rep;
    SolverConfig run = cfg;
    if (route == Route::Tseng) {
        if (v.mode != ValidationMode::Strict) {
            throw UnsupportedError("equilibrium: the Tseng route needs P B = C^T");
        }
        rep = run_tseng(sys, cfg, x0, run);
    } else {
        const double lip_g = lipschitz_constant_g(sys, semi_coercivity(sys.D()));
        const double cap = lip_g > 0.0 ? 0.5 / lip_g : 1.0;
        const double gamma = std::min(cfg.gamma.value_or(cap), cap);
        run.gamma = gamma;
        const auto h_res =
            std::make_shared<HResolvent>(sys, gamma, cfg.inner_tol, cfg.inner_max_iter);
        rep = proximal_point_solve([h_res](const Vec& x) { return (*h_res)(x); }, x0, run);
    }
    certify(sys, cfg, *run.gamma, rep);
    return rep;
}

SolverReport equilibrium_by_certificate(const LureSystem& sys, const SolverConfig& cfg,
                                        const std::optional<Vec>& x0) {
    const ValidationReport v = validate(sys);
    if (!v.pb_equals_ct || !v.d_monotone) {
        throw InvalidProblem(
            "equilibrium_by_certificate: needs P B = C^T and monotone D");
    }
    if (!v.pf_monotone) {
        log::warn("equilibrium_by_certificate: P f is not monotone; convergence is not "
                  "guaranteed and success rests on the certificate");
    }
    SolverConfig run = cfg;
    SolverReport rep = run_tseng(sys, cfg, initial_point(sys, x0), run);
    certify(sys, cfg, *run.gamma, rep);
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

void require_implicit_support(const LureSystem& sys) {
    const ValidationReport v = validate(sys);
    const bool b_is_ct = (sys.B() - sys.C().transpose()).norm() <= 1e-10;
    const bool p_is_identity = is_identity(sys.P(), 1e-12);
    if (v.mode != ValidationMode::Strict || !b_is_ct || !p_is_identity) {
        throw UnsupportedError(
            "simulate: implicit schemes need a Strict system with B = C^T and P = I");
    }
}

}  // namespace

Trajectory simulate(const LureSystem& sys, Scheme scheme, const Vec& x0, double h, double T,
                    double inner_tol, int inner_max_iter) {
    require_positive(h, "simulate: h");
    require_positive(T, "simulate: T");
    require_dim(x0.size(), sys.state_dim(), "simulate: x0");
    if (scheme != Scheme::Explicit) require_implicit_support(sys);

    const auto steps = static_cast<long>(std::llround(T / h));
    Trajectory tr;
    tr.scheme = scheme;
    tr.h = h;
    tr.times.reserve(static_cast<std::size_t>(steps) + 1);
    tr.states.reserve(static_cast<std::size_t>(steps) + 1);
    tr.lambdas.reserve(static_cast<std::size_t>(steps) + 1);

    const LipschitzMap& f = sys.f();
    const MonotoneOperator& op = sys.F();
    auto abort = [&](long n, const std::string& why) {
        tr.completed = false;
        tr.message = "step " + std::to_string(n) + ": " + why;
        log::warn("simulate aborted at " + tr.message);
        return tr;
    };

    Vec x = x0;
    if (scheme == Scheme::Explicit) {
        auto sel = op.min_norm_element(sys.C() * x);
        if (!sel) return abort(0, "C x0 outside dom F");
        Vec lam = -*sel;
        tr.times.push_back(0.0);
        tr.states.push_back(x);
        tr.lambdas.push_back(lam);
        for (long n = 0; n < steps; ++n) {
            const Vec y = sys.C() * x + sys.D() * lam;
            x = x + h * (-f(x) + sys.B() * lam);
            auto next = op.min_norm_element(y);
            if (!next) return abort(n + 1, "y outside dom F");
            lam = -*next;
            tr.times.push_back(static_cast<double>(n + 1) * h);
            tr.states.push_back(x);
            tr.lambdas.push_back(lam);
        }
        return tr;
    }

    const ComposedOperatorG gop = composed_g(sys);
    const InnerSolve lam0 = eval_B(gop.B, sys.C() * x, inner_tol, inner_max_iter);
    tr.times.push_back(0.0);
    tr.states.push_back(x);
    tr.lambdas.push_back(-lam0.value);

    if (scheme == Scheme::SemiImplicit) {
        const GResolvent g_res(gop, h, inner_tol, inner_max_iter);
        for (long n = 0; n < steps; ++n) {
            const InnerSolve r = g_res(x - h * f(x));
            if (!r.converged) return abort(n + 1, "resolvent did not converge");
            x = r.value;
            tr.times.push_back(static_cast<double>(n + 1) * h);
            tr.states.push_back(x);
            tr.lambdas.push_back(-r.multiplier);
        }
        return tr;
    }

    // Fully implicit: z = x_{n+1} solves 0 in (z - x_n + h f(z)) + h G(z).
    const double lip = 1.0 + h * f.lipschitz();
    const double inner_gamma = 0.9 / lip;
    const auto g_res =
        std::make_shared<GResolvent>(gop, inner_gamma * h, inner_tol, inner_max_iter);
    const ResolventOracle oracle = [g_res](double, const Vec& w) { return (*g_res)(w); };
    SolverConfig inner;
    inner.gamma = inner_gamma;
    inner.tol = inner_tol;
    inner.max_iter = inner_max_iter;
    for (long n = 0; n < steps; ++n) {
        const Vec xn = x;
        const LipschitzMap fhat(
            xn.size(), xn.size(), [&f, xn, h](const Vec& z) -> Vec { return z - xn + h * f(z); },
            lip, 1.0 + h * f.strong_modulus(), "implicit-step");
        const SolverReport r = tseng_solve(fhat, oracle, xn, inner);
        if (!r.converged()) {
            return abort(n + 1, std::string("inner Tseng ") + to_string(r.status));
        }
        x = r.solution;
        tr.times.push_back(static_cast<double>(n + 1) * h);
        tr.states.push_back(x);
        tr.lambdas.push_back(-r.multiplier);
    }
    return tr;
}

}  // namespace lure
