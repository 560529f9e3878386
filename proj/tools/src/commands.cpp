#include "lure_eq_cli/commands.hpp"

#include "lure_eq_cli/csv.hpp"
#include "lure_eq_cli/problem_file.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <ostream>

namespace lure::cli {
namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::string vec_text(const Vec& v) {
    std::string s = "(";
    for (Index i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_number(v(i));
    }
    return s + ")";
}

/// Runs a command body and maps the library's exceptions onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const DimensionError& e) {
        err << "dimension error: " << e.what() << '\n';
        return kParseError;
    } catch (const InvalidProblem& e) {
        err << "invalid system: " << e.what() << '\n';
        return kInvalidSystem;
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << '\n';
        return kUnsupported;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kSolverFailure;
    }
}

SolverConfig solver_config(const Problem& p, const Options& opt) {
    SolverConfig cfg = p.solver;
    if (opt.gamma) cfg.gamma = *opt.gamma;
    if (opt.tol) cfg.tol = *opt.tol;
    if (opt.max_iter) cfg.max_iter = *opt.max_iter;
    if (cfg.gamma && !(*cfg.gamma > 0.0)) throw ParseError("--gamma must be positive");
    if (!(cfg.tol > 0.0)) throw ParseError("--tol must be positive");
    if (cfg.max_iter <= 0) throw ParseError("--max-iter must be positive");
    return cfg;
}

void print_report(std::ostream& out, const SolverReport& rep) {
    out << "status: " << to_string(rep.status) << '\n';
    out << "iterations: " << rep.iterations << '\n';
    out << "gamma: " << format_number(rep.gamma) << '\n';
    out << "solution: " << vec_text(rep.solution) << '\n';
    out << "certified residual: " << fmt(rep.certified_residual) << '\n';
    if (!rep.message.empty()) out << "note: " << rep.message << '\n';
}

/// Writes the residual CSV when requested and turns the status into an exit code.
int finish_solve(std::ostream& out, const SolverReport& rep, const Options& opt) {
    print_report(out, rep);
    if (opt.out) {
        write_file(*opt.out, residual_csv(rep));
        out << "wrote " << *opt.out << '\n';
    }
    return rep.converged() ? kOk : kSolverFailure;
}

SolverReport solve_any(const Problem& p, const SolverConfig& cfg) {
    switch (p.kind) {
        case ProblemKind::Lure: return equilibrium(*p.system, cfg, p.x0);
        case ProblemKind::Qvi: return solve_qvi(*p.qvi, cfg, p.x0);
        case ProblemKind::NashLinear: return solve_game(*p.linear_game, cfg, p.x0);
        case ProblemKind::NashProx: return solve_game(*p.prox_game, cfg, p.x0);
    }
    throw std::logic_error("solve_any: bad kind");
}

LureSystem relay_system() {
    Mat a(2, 2);
    a << 9, -1, 1, 8;
    Mat d = Mat::Zero(2, 2);
    d(1, 1) = 1.0;
    return LureSystem(LipschitzMap::affine(a, Vec::Zero(2)), Mat::Identity(2, 2),
                      Mat::Identity(2, 2), d, MonotoneOperator::sign(2));
}

}  // namespace

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Problem p = load_problem(path);
        const ValidationReport v = validate(p.inclusion());
        out << "kind: " << to_string(p.kind) << '\n';
        out << "mode: " << to_string(v.mode) << '\n';
        out << "PB - C^T norm: " << fmt(v.pb_ct_norm) << '\n';
        out << "PB = C^T: " << (v.pb_equals_ct ? "yes" : "no") << '\n';
        out << "D monotone: " << (v.d_monotone ? "yes" : "no") << '\n';
        out << "Pf monotone: " << (v.pf_monotone ? "yes" : "no") << '\n';
        out << "passivity PSD: " << (v.passivity_psd ? "yes" : "no") << '\n';
        if (v.d_semicoercive) out << "D semi-coercive modulus: " << fmt(*v.d_semicoercive) << '\n';
        if (v.block_eigenvalues.size() > 0) {
            out << "block eigenvalues: min " << fmt(v.block_eigenvalues.minCoeff()) << ", max "
                << fmt(v.block_eigenvalues.maxCoeff()) << '\n';
        }
        for (const auto& w : v.warnings) out << "warning: " << w << '\n';
        return v.mode == ValidationMode::Invalid ? kInvalidSystem : kOk;
    });
}

int cmd_equilibrium(const std::string& path, const Options& opt, std::ostream& out,
                    std::ostream& err) {
    return guarded(err, [&] {
        const Problem p = load_problem(path);
        const SolverConfig cfg = solver_config(p, opt);
        return finish_solve(out, solve_any(p, cfg), opt);
    });
}

int cmd_simulate(const std::string& path, const Options& opt, std::ostream& out,
                 std::ostream& err) {
    return guarded(err, [&] {
        const Problem p = load_problem(path);
        std::optional<Scheme> scheme = p.simulate.scheme;
        if (opt.scheme) {
            scheme = parse_scheme(*opt.scheme);
            if (!scheme) throw ParseError("unknown scheme '" + *opt.scheme + "'");
        }
        const double h = opt.h.value_or(p.simulate.h.value_or(0.0));
        const double t_end = opt.T.value_or(p.simulate.T.value_or(0.0));
        if (!(h > 0.0)) throw ParseError("a positive step h is required (--h or simulate.h)");
        if (!(t_end > 0.0)) throw ParseError("a positive horizon T is required (--T or simulate.T)");
        const Index n = p.state_dim();
        const Vec x0 = p.simulate.x0.value_or(p.x0.value_or(Vec::Zero(n)));

        if (!scheme) throw ParseError("a scheme is required (--scheme or simulate.scheme)");
        const Trajectory tr = simulate(p.inclusion(), *scheme, x0, h, t_end);
        double min_norm = std::numeric_limits<double>::infinity();
        for (const Vec& x : tr.states) min_norm = std::min(min_norm, x.norm());
        out << "scheme: " << to_string(tr.scheme) << '\n';
        out << "steps: " << (tr.states.empty() ? 0 : tr.states.size() - 1) << '\n';
        out << "final state: " << vec_text(tr.states.back()) << '\n';
        out << "final |x|: " << fmt(tr.states.back().norm()) << '\n';
        out << "min |x|: " << fmt(min_norm) << '\n';
        if (opt.out) {
            write_file(*opt.out, trajectory_csv(tr));
            out << "wrote " << *opt.out << '\n';
        }
        if (!tr.completed) {
            err << "simulation stopped early: " << tr.message << '\n';
            return kSolverFailure;
        }
        return kOk;
    });
}

int cmd_qvi(const std::string& path, const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Problem p = load_problem(path);
        if (p.kind != ProblemKind::Qvi) {
            throw ParseError(std::string("qvi expects kind \"qvi\", got \"") + to_string(p.kind) +
                             "\"");
        }
        const SolverConfig cfg = solver_config(p, opt);
        const SolverReport rep = solve_qvi(*p.qvi, cfg, p.x0);
        const int code = finish_solve(out, rep, opt);
        out << "qvi residual: " << fmt(qvi_residual(*p.qvi, rep.solution)) << '\n';
        if (p.qvi->Omega.is_normal_cone()) {
            const MovingSet k = moving_set_check(*p.qvi, rep.solution);
            out << "x in K(x): " << (k.contains ? "yes" : "no") << " (distance "
                << fmt(k.distance) << ")\n";
        }
        return code;
    });
}

int cmd_nash(const std::string& path, const Options& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Problem p = load_problem(path);
        if (p.kind != ProblemKind::NashLinear && p.kind != ProblemKind::NashProx) {
            throw ParseError(std::string("nash expects kind \"nash_linear\" or \"nash_prox\", got \"") +
                             to_string(p.kind) + "\"");
        }
        const SolverConfig cfg = solver_config(p, opt);
        const SolverReport rep = p.kind == ProblemKind::NashLinear
                                     ? solve_game(*p.linear_game, cfg, p.x0)
                                     : solve_game(*p.prox_game, cfg, p.x0);
        const int code = finish_solve(out, rep, opt);
        const NashCertificate cert = p.kind == ProblemKind::NashLinear
                                         ? certify_equilibrium(*p.linear_game, rep.solution, 10 * cfg.tol)
                                         : certify_equilibrium(*p.prox_game, rep.solution, 10 * cfg.tol);
        for (std::size_t i = 0; i < cert.residuals.size(); ++i) {
            out << "player " << i + 1 << ": residual " << fmt(cert.residuals[i])
                << (cert.passed[i] ? " ok" : " FAILED") << '\n';
        }
        return code;
    });
}

int cmd_repro_paper(const std::string& dir, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        namespace fs = std::filesystem;
        fs::create_directories(dir);
        const auto file = [&](const char* name) { return (fs::path(dir) / name).string(); };

        const LureSystem sys = relay_system();
        const Vec x0{{1.0, 2.0}};

        const Trajectory fig1 = simulate(sys, Scheme::Explicit, x0, 0.04, 40.0);
        write_file(file("fig1.csv"), trajectory_csv(fig1));
        double min_norm = std::numeric_limits<double>::infinity();
        for (const Vec& x : fig1.states) min_norm = std::min(min_norm, x.norm());

        SolverConfig cfg;
        cfg.tol = 1e-10;
        cfg.max_iter = 2000;
        cfg.gamma = 0.5;
        const SolverReport large_step = equilibrium(sys, cfg, x0, Route::Tseng);
        write_file(file("fig2_gamma0.5.csv"), residual_csv(large_step));
        cfg.gamma = 0.1;
        const SolverReport safe_step = equilibrium(sys, cfg, x0, Route::Tseng);
        write_file(file("fig2_gamma0.1.csv"), residual_csv(safe_step));

        const double lip = sys.f().lipschitz();
        std::string s;
        s += "Relay system: f(x) = (9,-1;1,8) x, B = C = I, D = diag(0,1), F = Sign, x0 = (1,2).\n\n";
        s += "fig1.csv: explicit scheme, h = 0.04, T = 40.\n";
        s += "  min |x_n| over the run = " + fmt(min_norm) + " (the iterates chatter around 0).\n\n";
        s += "Tseng step bound: gamma < 1/L_f = " + fmt(1.0 / lip) + " (L_f = " + fmt(lip) + ").\n\n";
        s += "fig2_gamma0.5.csv: gamma = 0.5, above the bound.\n";
        s += "  status " + std::string(to_string(large_step.status)) + " after " +
             std::to_string(large_step.iterations) + " iterations.\n";
        if (large_step.iterates.size() > 1) {
            s += "  The first step from x0 already moves away: x1 = " +
                 vec_text(large_step.iterates[1]) + ".\n";
        }
        s += "\n";
        s += "fig2_gamma0.1.csv: gamma = 0.1, within the bound.\n";
        s += "  status " + std::string(to_string(safe_step.status)) + " after " +
             std::to_string(safe_step.iterations) + " iterations, |x*| = " +
             fmt(safe_step.solution.norm()) + ", last residual " +
             fmt(safe_step.residual_history.empty() ? 0.0 : safe_step.residual_history.back()) +
             ".\n\n";
        s += "The reported convergence at gamma = 0.5 is not reproduced; the equilibrium x* = 0\n"
             "is reached at the compliant step gamma = 0.1.\n";
        write_file(file("summary.txt"), s);

        out << s;
        out << "wrote fig1.csv, fig2_gamma0.5.csv, fig2_gamma0.1.csv, summary.txt to " << dir << '\n';
        return kOk;
    });
}

}  // namespace lure::cli
