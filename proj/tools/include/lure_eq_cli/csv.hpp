#pragma once

#include "lure_eq/lure_eq.hpp"

#include <string>
#include <vector>

namespace lure::cli {

/// Shortest round-trippable text for a double: 17 significant digits, '.' separator.
std::string format_number(double v);

/// `iter,residual,x_1,...,x_n`, one row per iteration of the report.
std::string residual_csv(const SolverReport& rep);

/// `t,x_1,...,x_n,lambda_1,...,lambda_m`.
std::string trajectory_csv(const Trajectory& traj);

/// Writes bytes verbatim (LF line endings on every platform).
void write_file(const std::string& path, const std::string& contents);

}  // namespace lure::cli
