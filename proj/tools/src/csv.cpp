#include "lure_eq_cli/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lure::cli {
namespace {

void append_header(std::string& out, const char* prefix, Index count) {
    for (Index i = 1; i <= count; ++i) {
        out += ',';
        out += prefix;
        out += std::to_string(i);
    }
}

void append_values(std::string& out, const Vec& v) {
    for (Index i = 0; i < v.size(); ++i) {
        out += ',';
        out += format_number(v(i));
    }
}

}  // namespace

std::string format_number(double v) {
    // "%.17g" is locale-sensitive only through LC_NUMERIC, which we never change.
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string residual_csv(const SolverReport& rep) {
    const Index n = rep.iterates.empty() ? rep.solution.size() : rep.iterates.front().size();
    std::string out = "iter,residual";
    append_header(out, "x_", n);
    out += '\n';
    const std::size_t rows = std::min(rep.iterates.size(), rep.residual_history.size());
    for (std::size_t k = 0; k < rows; ++k) {
        out += std::to_string(k);
        out += ',';
        out += format_number(rep.residual_history[k]);
        append_values(out, rep.iterates[k]);
        out += '\n';
    }
    return out;
}

std::string trajectory_csv(const Trajectory& traj) {
    const Index n = traj.states.empty() ? 0 : traj.states.front().size();
    const Index m = traj.lambdas.empty() ? 0 : traj.lambdas.front().size();
    std::string out = "t";
    append_header(out, "x_", n);
    append_header(out, "lambda_", m);
    out += '\n';
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        out += format_number(traj.times[k]);
        append_values(out, traj.states[k]);
        if (k < traj.lambdas.size()) append_values(out, traj.lambdas[k]);
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace lure::cli
