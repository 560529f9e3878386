#include "lure_eq_cli/problem_file.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace lure::cli {
namespace {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;
constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) fail(where, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) fail(where, "unknown field '" + key + "'");
    }
}

const json& require(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
    return obj.at(key);
}

double number(const json& j, const std::string& where,
              std::optional<double> null_value = std::nullopt) {
    if (j.is_number()) return j.get<double>();
    if (j.is_null() && null_value) return *null_value;
    // JSON has no infinities; accept them spelled out for unbounded boxes.
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    if (j.is_null()) fail(where, "expected a number, got null");
    fail(where, "expected a number");
}

Vec vector(const json& j, const std::string& where, std::optional<Index> dim = std::nullopt,
           std::optional<double> null_value = std::nullopt) {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    Vec v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Index>(i)) = number(j[i], where + "[" + std::to_string(i) + "]", null_value);
    }
    if (dim && v.size() != *dim) {
        fail(where, "expected length " + std::to_string(*dim) + ", got " + std::to_string(v.size()));
    }
    return v;
}

Vec finite_vector(const json& j, const std::string& where, std::optional<Index> dim = std::nullopt) {
    Vec v = vector(j, where, dim);
    if (!v.allFinite()) fail(where, "entries must be finite");
    return v;
}

Mat matrix(const json& j, const std::string& where, Index rows, Index cols) {
    if (!j.is_array()) fail(where, "expected an array of rows");
    if (static_cast<Index>(j.size()) != rows) {
        fail(where, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
    }
    Mat m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const std::string row_where = where + "[" + std::to_string(r) + "]";
        m.row(r) = finite_vector(j[static_cast<std::size_t>(r)], row_where, cols).transpose();
    }
    return m;
}

double positive(const json& j, const std::string& where) {
    const double v = number(j, where);
    if (!(v > 0.0) || !std::isfinite(v)) fail(where, "must be a positive finite number");
    return v;
}

double nonnegative(const json& j, const std::string& where) {
    const double v = number(j, where);
    if (!(v >= 0.0) || !std::isfinite(v)) fail(where, "must be a finite number >= 0");
    return v;
}

Index dimension(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected an integer >= 0");
    return static_cast<Index>(j.get<long long>());
}

LipschitzMap parse_map(const json& j, const std::string& where, Index dim_in, Index dim_out) {
    allow_keys(j, where, {"type", "A", "b", "alpha"});
    const auto type = require(j, where, "type").get<std::string>();
    const Mat a = matrix(require(j, where, "A"), where + ".A", dim_out, dim_in);
    const Vec b = j.contains("b") ? finite_vector(j.at("b"), where + ".b", dim_out) : Vec::Zero(dim_out);
    if (type == "affine") {
        if (j.contains("alpha")) fail(where, "'alpha' only applies to affine_tanh");
        return LipschitzMap::affine(a, b);
    }
    if (type == "affine_tanh") {
        if (dim_in != dim_out) fail(where, "affine_tanh needs a square A");
        return LipschitzMap::affine_tanh(a, b, nonnegative(require(j, where, "alpha"), where + ".alpha"));
    }
    fail(where, "unknown map type '" + type + "' (expected affine or affine_tanh)");
}

MonotoneOperator parse_operator(const json& j, const std::string& where, Index dim) {
    if (!j.is_object()) fail(where, "expected an object");
    const auto kind = require(j, where, "kind").get<std::string>();
    if (j.contains("dim") && dimension(j.at("dim"), where + ".dim") != dim) {
        fail(where, "dim does not match the surrounding dimension " + std::to_string(dim));
    }
    try {
        if (kind == "sign") {
            allow_keys(j, where, {"kind", "dim"});
            return MonotoneOperator::sign(dim);
        }
        if (kind == "l1") {
            allow_keys(j, where, {"kind", "dim", "weight", "weights"});
            if (j.contains("weights") == j.contains("weight")) {
                fail(where, "l1 needs exactly one of 'weight' or 'weights'");
            }
            if (j.contains("weight")) return MonotoneOperator::l1(dim, positive(j.at("weight"), where + ".weight"));
            return MonotoneOperator::l1(finite_vector(j.at("weights"), where + ".weights", dim));
        }
        if (kind == "box") {
            allow_keys(j, where, {"kind", "dim", "lo", "hi"});
            return MonotoneOperator::box(vector(require(j, where, "lo"), where + ".lo", dim, -kInf),
                                         vector(require(j, where, "hi"), where + ".hi", dim, kInf));
        }
        if (kind == "ball") {
            allow_keys(j, where, {"kind", "dim", "center", "radius"});
            const Vec c = j.contains("center") ? finite_vector(j.at("center"), where + ".center", dim)
                                               : Vec::Zero(dim);
            return MonotoneOperator::ball(c, positive(require(j, where, "radius"), where + ".radius"));
        }
        if (kind == "orthant") {
            allow_keys(j, where, {"kind", "dim"});
            return MonotoneOperator::orthant(dim);
        }
        if (kind == "zero") {
            allow_keys(j, where, {"kind", "dim"});
            return MonotoneOperator::zero(dim);
        }
        if (kind == "identity") {
            allow_keys(j, where, {"kind", "dim"});
            return MonotoneOperator::identity(dim);
        }
        if (kind == "linear") {
            allow_keys(j, where, {"kind", "dim", "M"});
            return MonotoneOperator::linear(matrix(require(j, where, "M"), where + ".M", dim, dim));
        }
        if (kind == "product") {
            allow_keys(j, where, {"kind", "dim", "blocks"});
            const json& blocks = require(j, where, "blocks");
            if (!blocks.is_array() || blocks.empty()) fail(where, "'blocks' must be a non-empty array");
            std::vector<MonotoneOperator> parts;
            Index used = 0;
            for (std::size_t i = 0; i < blocks.size(); ++i) {
                const std::string bw = where + ".blocks[" + std::to_string(i) + "]";
                if (!blocks[i].is_object() || !blocks[i].contains("dim")) fail(bw, "block needs 'dim'");
                const Index bd = dimension(blocks[i].at("dim"), bw + ".dim");
                parts.push_back(parse_operator(blocks[i], bw, bd));
                used += bd;
            }
            if (used != dim) {
                fail(where, "block dimensions sum to " + std::to_string(used) + ", expected " +
                                std::to_string(dim));
            }
            return MonotoneOperator::product(std::move(parts));
        }
    } catch (const DimensionError& e) {
        fail(where, e.what());
    } catch (const InvalidProblem&) {
        throw;
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
    fail(where, "unknown operator kind '" + kind + "'");
}

SolverConfig parse_solver(const json& j, std::optional<Vec>& x0, Index n) {
    SolverConfig cfg;
    if (j.is_null()) return cfg;
    allow_keys(j, "solver", {"gamma", "tol", "max_iter", "x0", "inner_tol", "inner_max_iter"});
    if (j.contains("gamma")) cfg.gamma = positive(j.at("gamma"), "solver.gamma");
    if (j.contains("tol")) cfg.tol = positive(j.at("tol"), "solver.tol");
    if (j.contains("max_iter")) {
        if (!j.at("max_iter").is_number_integer() || j.at("max_iter").get<long long>() <= 0) {
            fail("solver.max_iter", "expected a positive integer");
        }
        cfg.max_iter = static_cast<int>(j.at("max_iter").get<long long>());
    }
    if (j.contains("inner_tol")) cfg.inner_tol = positive(j.at("inner_tol"), "solver.inner_tol");
    if (j.contains("inner_max_iter")) {
        cfg.inner_max_iter = static_cast<int>(dimension(j.at("inner_max_iter"), "solver.inner_max_iter"));
    }
    if (j.contains("x0")) x0 = finite_vector(j.at("x0"), "solver.x0", n);
    return cfg;
}

SimulateBlock parse_simulate(const json& j, Index n) {
    SimulateBlock s;
    if (j.is_null()) return s;
    allow_keys(j, "simulate", {"scheme", "x0", "h", "T"});
    if (j.contains("scheme")) {
        const auto name = j.at("scheme").get<std::string>();
        s.scheme = parse_scheme(name);
        if (!s.scheme) fail("simulate.scheme", "unknown scheme '" + name + "'");
    }
    if (j.contains("x0")) s.x0 = finite_vector(j.at("x0"), "simulate.x0", n);
    if (j.contains("h")) s.h = positive(j.at("h"), "simulate.h");
    if (j.contains("T")) s.T = positive(j.at("T"), "simulate.T");
    return s;
}

std::pair<Index, Index> parse_dims(const json& doc) {
    const json& d = require(doc, "problem", "dims");
    allow_keys(d, "dims", {"n", "m"});
    const Index n = dimension(require(d, "dims", "n"), "dims.n");
    if (n == 0) fail("dims.n", "must be positive");
    const Index m = d.contains("m") ? dimension(d.at("m"), "dims.m") : n;
    return {n, m};
}

std::vector<Index> player_dims(const json& players) {
    if (!players.is_array() || players.empty()) fail("players", "expected a non-empty array");
    std::vector<Index> dims;
    for (std::size_t i = 0; i < players.size(); ++i) {
        const std::string w = "players[" + std::to_string(i) + "]";
        if (!players[i].is_object()) fail(w, "expected an object");
        const Index d = dimension(require(players[i], w, "dim"), w + ".dim");
        if (d == 0) fail(w + ".dim", "must be positive");
        dims.push_back(d);
    }
    return dims;
}

Problem parse_lure(const json& doc, Problem p) {
    allow_keys(doc, "problem", {"schema_version", "kind", "dims", "f", "B", "C", "D", "P", "F",
                                "solver", "simulate"});
    const auto [n, m] = parse_dims(doc);
    auto f = parse_map(require(doc, "problem", "f"), "f", n, n);
    const Mat b = matrix(require(doc, "problem", "B"), "B", n, m);
    const Mat c = matrix(require(doc, "problem", "C"), "C", m, n);
    const Mat d = doc.contains("D") ? matrix(doc.at("D"), "D", m, m) : Mat::Zero(m, m);
    std::optional<Mat> pm;
    if (doc.contains("P")) pm = matrix(doc.at("P"), "P", n, n);
    auto op = parse_operator(require(doc, "problem", "F"), "F", m);
    p.system.emplace(std::move(f), b, c, d, std::move(op), pm);
    return p;
}

Problem parse_qvi(const json& doc, Problem p) {
    allow_keys(doc, "problem", {"schema_version", "kind", "dims", "f", "D", "Omega", "solver",
                                "simulate"});
    const auto [n, m] = parse_dims(doc);
    if (m != n) fail("dims.m", "a QVI has m = n");
    auto f = parse_map(require(doc, "problem", "f"), "f", n, n);
    const Mat d = doc.contains("D") ? matrix(doc.at("D"), "D", n, n) : Mat::Zero(n, n);
    auto omega = parse_operator(require(doc, "problem", "Omega"), "Omega", n);
    p.qvi.emplace(std::move(f), d, std::move(omega));
    return p;
}

Problem parse_nash_linear(const json& doc, Problem p) {
    allow_keys(doc, "problem", {"schema_version", "kind", "dims", "players", "solver"});
    const json& players = require(doc, "problem", "players");
    const auto dims = player_dims(players);
    Index total = 0;
    for (Index d : dims) total += d;
    LinearCostGame g;
    for (std::size_t i = 0; i < players.size(); ++i) {
        const std::string w = "players[" + std::to_string(i) + "]";
        allow_keys(players[i], w, {"dim", "g1", "K", "c"});
        const Index di = dims[i];
        auto g1 = parse_map(require(players[i], w, "g1"), w + ".g1", total - di, di);
        auto k = parse_operator(require(players[i], w, "K"), w + ".K", di);
        if (!k.is_normal_cone()) fail(w + ".K", "must be a box, ball or orthant");
        const double c = players[i].contains("c") ? nonnegative(players[i].at("c"), w + ".c") : 0.0;
        g.players.push_back({di, std::move(g1), std::move(k), c});
    }
    p.linear_game = std::move(g);
    return p;
}

Problem parse_nash_prox(const json& doc, Problem p) {
    allow_keys(doc, "problem", {"schema_version", "kind", "dims", "players", "solver"});
    const json& players = require(doc, "problem", "players");
    const auto dims = player_dims(players);
    Index total = 0;
    for (Index d : dims) total += d;
    ProxCostGame g;
    for (std::size_t i = 0; i < players.size(); ++i) {
        const std::string w = "players[" + std::to_string(i) + "]";
        allow_keys(players[i], w, {"dim", "f1", "d", "h"});
        const Index di = dims[i];
        auto f1 = parse_map(require(players[i], w, "f1"), w + ".f1", total - di, di);
        const double d = players[i].contains("d") ? nonnegative(players[i].at("d"), w + ".d") : 0.0;
        const json& h = require(players[i], w, "h");
        const std::string hw = w + ".h";
        if (!h.is_object()) fail(hw, "expected an object");
        const auto type = require(h, hw, "type").get<std::string>();
        ProxTerm term;
        if (type == "abs") {
            allow_keys(h, hw, {"type", "weight"});
            term = AbsTerm{h.contains("weight") ? positive(h.at("weight"), hw + ".weight") : 1.0};
        } else if (type == "box_indicator") {
            allow_keys(h, hw, {"type", "lo", "hi"});
            const Vec lo = vector(require(h, hw, "lo"), hw + ".lo", di, -kInf);
            const Vec hi = vector(require(h, hw, "hi"), hw + ".hi", di, kInf);
            if ((lo.array() > hi.array()).any()) fail(hw, "lo must not exceed hi");
            term = BoxIndicatorTerm{lo, hi};
        } else {
            fail(hw, "unknown term type '" + type + "' (expected abs or box_indicator)");
        }
        g.players.push_back({di, std::move(f1), d, std::move(term)});
    }
    p.prox_game = std::move(g);
    return p;
}

}  // namespace

const char* to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::Lure: return "lure";
        case ProblemKind::Qvi: return "qvi";
        case ProblemKind::NashLinear: return "nash_linear";
        case ProblemKind::NashProx: return "nash_prox";
    }
    return "?";
}

LureSystem Problem::inclusion() const {
    switch (kind) {
        case ProblemKind::Lure: return *system;
        case ProblemKind::Qvi: return qvi_to_inclusion(*qvi);
        case ProblemKind::NashLinear: return qvi_to_inclusion(assemble_linear_game(*linear_game));
        case ProblemKind::NashProx: return assemble_prox_game(*prox_game);
    }
    throw std::logic_error("Problem::inclusion: bad kind");
}

Index Problem::state_dim() const {
    switch (kind) {
        case ProblemKind::Lure: return system->state_dim();
        case ProblemKind::Qvi: return qvi->dim();
        case ProblemKind::NashLinear: return total_dim(*linear_game);
        case ProblemKind::NashProx: return total_dim(*prox_game);
    }
    return 0;
}

Problem parse_problem(const json& doc) {
    if (!doc.is_object()) fail("problem", "top level must be an object");
    try {
        const json& version = require(doc, "problem", "schema_version");
        if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
            fail("schema_version", "unsupported version (expected " +
                                       std::to_string(kSchemaVersion) + ")");
        }
        const auto kind = require(doc, "problem", "kind").get<std::string>();
        Problem p;
        if (kind == "lure") {
            p.kind = ProblemKind::Lure;
            p = parse_lure(doc, std::move(p));
        } else if (kind == "qvi") {
            p.kind = ProblemKind::Qvi;
            p = parse_qvi(doc, std::move(p));
        } else if (kind == "nash_linear") {
            p.kind = ProblemKind::NashLinear;
            p = parse_nash_linear(doc, std::move(p));
        } else if (kind == "nash_prox") {
            p.kind = ProblemKind::NashProx;
            p = parse_nash_prox(doc, std::move(p));
        } else {
            fail("kind", "unknown problem kind '" + kind + "'");
        }
        const Index n = p.state_dim();
        p.solver = parse_solver(doc.value("solver", json()), p.x0, n);
        p.simulate = parse_simulate(doc.value("simulate", json()), n);
        return p;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed problem: ") + e.what());
    } catch (const DimensionError& e) {
        throw ParseError(e.what());
    }
}

Problem parse_problem_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_problem(doc);
}

Problem load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str());
}

}  // namespace lure::cli
