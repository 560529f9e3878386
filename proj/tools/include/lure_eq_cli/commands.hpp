#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace lure::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidSystem = 1,
    kParseError = 2,
    kSolverFailure = 3,
    kUnsupported = 4,
};

/// Command-line overrides; each one replaces the matching field of the problem file.
struct Options {
    std::optional<double> gamma;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<std::string> scheme;
    std::optional<double> h;
    std::optional<double> T;
    std::optional<std::string> out;
};

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_equilibrium(const std::string& path, const Options& opt, std::ostream& out,
                    std::ostream& err);
int cmd_simulate(const std::string& path, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_qvi(const std::string& path, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_nash(const std::string& path, const Options& opt, std::ostream& out, std::ostream& err);

/// Writes fig1.csv, fig2_gamma0.5.csv, fig2_gamma0.1.csv and summary.txt into `dir`.
int cmd_repro_paper(const std::string& dir, std::ostream& out, std::ostream& err);

}  // namespace lure::cli
