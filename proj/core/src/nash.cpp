#include "lure_eq/nash.hpp"

#include "lure_eq/log.hpp"

#include <cmath>
#include <random>

namespace lure {
namespace {

template <class Player>
std::vector<Index> player_dims(const std::vector<Player>& players) {
    std::vector<Index> dims;
    dims.reserve(players.size());
    for (const auto& p : players) {
        if (p.dim <= 0) throw DimensionError("game: player dimension must be positive");
        dims.push_back(p.dim);
    }
    return dims;
}

Index sum(const std::vector<Index>& dims) {
    Index n = 0;
    for (Index d : dims) n += d;
    return n;
}

/// Stacks x -> (m_1(x^{-1}), ..., m_k(x^{-k})); affine inputs give an affine map.
template <class Player, class Getter>
LipschitzMap stack_maps(const std::vector<Player>& players, Getter get) {
    const std::vector<Index> dims = player_dims(players);
    const Index n = sum(dims);
    bool affine = true;
    double lip2 = 0.0;
    for (std::size_t i = 0; i < players.size(); ++i) {
        const LipschitzMap& m = get(players[i]);
        require_dim(m.dim_in(), n - dims[i], "game: player map input");
        require_dim(m.dim_out(), dims[i], "game: player map output");
        affine = affine && m.is_affine();
        lip2 += m.lipschitz() * m.lipschitz();
    }
    if (affine) {
        Mat a = Mat::Zero(n, n);
        Vec b(n);
        Index row = 0;
        for (std::size_t i = 0; i < players.size(); ++i) {
            const LipschitzMap& m = get(players[i]);
            const Mat& ai = m.affine_matrix();
            Index in_col = 0;
            Index col = 0;
            for (std::size_t j = 0; j < players.size(); ++j) {
                if (j != i) {
                    a.block(row, col, dims[i], dims[j]) = ai.middleCols(in_col, dims[j]);
                    in_col += dims[j];
                }
                col += dims[j];
            }
            b.segment(row, dims[i]) = m.affine_offset();
            row += dims[i];
        }
        return LipschitzMap::affine(std::move(a), std::move(b));
    }
    std::vector<LipschitzMap> maps;
    for (const auto& p : players) maps.push_back(get(p));
    return LipschitzMap(
        n, n,
        [maps, dims](const Vec& x) -> Vec {
            Vec out(x.size());
            Index row = 0;
            for (std::size_t i = 0; i < maps.size(); ++i) {
                out.segment(row, dims[i]) = maps[i](others(x, dims, i));
                row += dims[i];
            }
            return out;
        },
        std::sqrt(lip2), 0.0, "stacked");
}

Mat block_scaling(const std::vector<Index>& dims, const std::vector<double>& scale) {
    const Index n = sum(dims);
    Mat d = Mat::Zero(n, n);
    Index off = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (scale[i] < 0.0 || !std::isfinite(scale[i])) {
            throw InvalidProblem("game: coupling coefficients must be finite and >= 0");
        }
        d.block(off, off, dims[i], dims[i]).diagonal().setConstant(scale[i]);
        off += dims[i];
    }
    return d;
}

void warn_if_not_monotone(const LipschitzMap& f, const char* what) {
    if (f.is_affine()) {
        if (min_symmetric_eigenvalue(f.affine_matrix()) < -1e-9) {
            log::warn(std::string(what) + ": stacked map is not monotone; solver success "
                                          "will rest on certification only");
        }
        return;
    }
    std::mt19937_64 rng(0x6a3e);
    if (!sampled_monotone_ok(f, 0.0, rng, 128)) {
        log::warn(std::string(what) + ": stacked map failed a sampled monotonicity check");
    }
}

}  // namespace

Vec others(const Vec& x, const std::vector<Index>& dims, std::size_t i) {
    const Index n = sum(dims);
    require_dim(x.size(), n, "others");
    Vec out(n - dims[i]);
    Index src = 0;
    Index dst = 0;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        if (j != i) {
            out.segment(dst, dims[j]) = x.segment(src, dims[j]);
            dst += dims[j];
        }
        src += dims[j];
    }
    return out;
}

Index total_dim(const LinearCostGame& g) { return sum(player_dims(g.players)); }
Index total_dim(const ProxCostGame& g) { return sum(player_dims(g.players)); }

MonotoneOperator subdifferential(const ProxTerm& h, Index dim) {
    if (const auto* a = std::get_if<AbsTerm>(&h)) return MonotoneOperator::l1(dim, a->weight);
    const auto& box = std::get<BoxIndicatorTerm>(h);
    require_dim(box.lo.size(), dim, "box indicator");
    return MonotoneOperator::box(box.lo, box.hi);
}

QviProblem assemble_linear_game(const LinearCostGame& g) {
    if (g.players.empty()) throw InvalidProblem("assemble_linear_game: no players");
    const std::vector<Index> dims = player_dims(g.players);
    std::vector<double> c;
    std::vector<MonotoneOperator> sets;
    for (const auto& p : g.players) {
        require_dim(p.K.dim(), p.dim, "assemble_linear_game: K_i");
        if (!p.K.is_normal_cone()) {
            throw InvalidProblem("assemble_linear_game: K_i must be a box or ball");
        }
        c.push_back(p.c);
        sets.push_back(p.K);
    }
    LipschitzMap f = stack_maps(g.players, [](const LinearCostPlayer& p) -> const LipschitzMap& {
        return p.g1;
    });
    warn_if_not_monotone(f, "assemble_linear_game");
    MonotoneOperator omega =
        sets.size() == 1 ? sets.front() : MonotoneOperator::product(std::move(sets));
    return QviProblem(std::move(f), block_scaling(dims, c), std::move(omega));
}

LureSystem assemble_prox_game(const ProxCostGame& g) {
    if (g.players.empty()) throw InvalidProblem("assemble_prox_game: no players");
    const std::vector<Index> dims = player_dims(g.players);
    std::vector<double> d;
    std::vector<MonotoneOperator> parts;
    for (const auto& p : g.players) {
        d.push_back(p.d);
        parts.push_back(subdifferential(p.h, p.dim));
    }
    LipschitzMap f = stack_maps(g.players, [](const ProxCostPlayer& p) -> const LipschitzMap& {
        return p.f1;
    });
    warn_if_not_monotone(f, "assemble_prox_game");
    const Index n = sum(dims);
    MonotoneOperator op =
        parts.size() == 1 ? parts.front() : MonotoneOperator::product(std::move(parts));
    return LureSystem(std::move(f), Mat::Identity(n, n), Mat::Identity(n, n),
                      block_scaling(dims, d), std::move(op), Mat::Identity(n, n));
}

namespace {

template <class Player, class Check>
NashCertificate certify_players(const std::vector<Player>& players, const Vec& x, double tol,
                                Check check) {
    const std::vector<Index> dims = player_dims(players);
    require_dim(x.size(), sum(dims), "certify_equilibrium");
    NashCertificate cert;
    cert.all_passed = true;
    Index off = 0;
    for (std::size_t i = 0; i < players.size(); ++i) {
        const Vec own = x.segment(off, dims[i]);
        const double r = check(players[i], own, others(x, dims, i));
        cert.residuals.push_back(r);
        cert.passed.push_back(r <= tol);
        cert.all_passed = cert.all_passed && r <= tol;
        off += dims[i];
    }
    return cert;
}

}  // namespace

NashCertificate certify_equilibrium(const LinearCostGame& g, const Vec& x, double tol) {
    return certify_players(g.players, x, tol,
                           [](const LinearCostPlayer& p, const Vec& own, const Vec& rest) {
                               const Vec lin = p.g1(rest);
                               return p.K.graph_residual(own + p.c * lin, -lin);
                           });
}

NashCertificate certify_equilibrium(const ProxCostGame& g, const Vec& x, double tol) {
    return certify_players(g.players, x, tol,
                           [](const ProxCostPlayer& p, const Vec& own, const Vec& rest) {
                               const Vec lin = p.f1(rest);
                               return subdifferential(p.h, p.dim)
                                   .graph_residual(own + p.d * lin, -lin);
                           });
}

namespace {

template <class Game>
SolverReport solve_lowered(const Game& g, const LureSystem& sys, const SolverConfig& cfg,
                           const std::optional<Vec>& x0) {
    SolverReport rep = equilibrium_by_certificate(sys, cfg, x0);
    if (!rep.converged()) return rep;
    const NashCertificate cert = certify_equilibrium(g, rep.solution, 10.0 * cfg.tol);
    if (!cert.all_passed) {
        rep.status = SolverStatus::StepRejected;
        rep.message = "player-wise certificate failed";
    }
    return rep;
}

}  // namespace

SolverReport solve_game(const LinearCostGame& g, const SolverConfig& cfg,
                        const std::optional<Vec>& x0) {
    return solve_lowered(g, qvi_to_inclusion(assemble_linear_game(g)), cfg, x0);
}

SolverReport solve_game(const ProxCostGame& g, const SolverConfig& cfg,
                        const std::optional<Vec>& x0) {
    return solve_lowered(g, assemble_prox_game(g), cfg, x0);
}

}  // namespace lure
