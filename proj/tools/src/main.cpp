#include "lure_eq_cli/commands.hpp"

#include "lure_eq/log.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

namespace {

void add_solver_flags(CLI::App* cmd, lure::cli::Options& opt) {
    cmd->add_option("--gamma", opt.gamma, "Step size");
    cmd->add_option("--tol", opt.tol, "Stopping tolerance");
    cmd->add_option("--max-iter", opt.max_iter, "Iteration cap");
    cmd->add_option("--out", opt.out, "Residual CSV path");
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("LURE_EQ_LOG")) {
        lure::log::set_level(lure::log::parse_level(env));
    }

    CLI::App app{"Equilibria, QVIs, Nash problems and time-stepping for set-valued Lur'e systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "lure-eq 0.1.0");

    std::string path;
    std::string dir = "repro";
    lure::cli::Options opt;

    auto* check = app.add_subcommand("check", "Validate a problem file and print the report");
    check->add_option("problem", path, "Problem file")->required();

    auto* eq = app.add_subcommand("equilibrium", "Compute an equilibrium");
    eq->add_option("problem", path, "Problem file")->required();
    add_solver_flags(eq, opt);

    auto* sim = app.add_subcommand("simulate", "Time-step the system and write a trajectory CSV");
    // --h is the time step, so help is only spelled --help here.
    sim->set_help_flag("--help", "Print this help message and exit");
    sim->add_option("problem", path, "Problem file")->required();
    sim->add_option("--scheme", opt.scheme, "explicit | semi_implicit | fully_implicit");
    sim->add_option("--h", opt.h, "Time step");
    sim->add_option("--T", opt.T, "Horizon");
    sim->add_option("--out", opt.out, "Trajectory CSV path");

    auto* qvi = app.add_subcommand("qvi", "Solve a quasi-variational inequality");
    qvi->add_option("problem", path, "Problem file")->required();
    add_solver_flags(qvi, opt);

    auto* nash = app.add_subcommand("nash", "Solve a Nash quasi-equilibrium problem");
    nash->add_option("problem", path, "Problem file")->required();
    add_solver_flags(nash, opt);

    auto* repro = app.add_subcommand("repro-paper", "Reproduce the relay-system experiment");
    repro->add_option("--out", dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return lure::cli::kParseError;
    }

    auto& out = std::cout;
    auto& err = std::cerr;
    if (*check) return lure::cli::cmd_check(path, out, err);
    if (*eq) return lure::cli::cmd_equilibrium(path, opt, out, err);
    if (*sim) return lure::cli::cmd_simulate(path, opt, out, err);
    if (*qvi) return lure::cli::cmd_qvi(path, opt, out, err);
    if (*nash) return lure::cli::cmd_nash(path, opt, out, err);
    if (*repro) return lure::cli::cmd_repro_paper(dir, out, err);
    return lure::cli::kParseError;
}
