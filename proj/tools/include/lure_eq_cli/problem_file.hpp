#pragma once

#include "lure_eq/lure_eq.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace lure::cli {

/// Malformed JSON, unknown fields, wrong shapes or dimensions.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimulateBlock {
    std::optional<Scheme> scheme;
    std::optional<Vec> x0;
    std::optional<double> h;
    std::optional<double> T;
};

enum class ProblemKind { Lure, Qvi, NashLinear, NashProx };

const char* to_string(ProblemKind k);

struct Problem {
    ProblemKind kind = ProblemKind::Lure;
    std::optional<LureSystem> system;
    std::optional<QviProblem> qvi;
    std::optional<LinearCostGame> linear_game;
    std::optional<ProxCostGame> prox_game;
    SolverConfig solver;
    std::optional<Vec> x0;
    SimulateBlock simulate;

    /// The inclusion 0 in f(x) + B (F^{-1} + D)^{-1}(C x) every kind lowers to.
    [[nodiscard]] LureSystem inclusion() const;
    [[nodiscard]] Index state_dim() const;
};

/// Throws ParseError for syntax/schema/shape problems and InvalidProblem when
/// the data is well-formed but violates a model precondition (e.g. D + D^T
/// indefinite in a QVI).
Problem parse_problem(const nlohmann::json& doc);
Problem parse_problem_text(const std::string& text);
Problem load_problem(const std::string& path);

}  // namespace lure::cli
