// cavheat.cpp: Command-line front end for the sweep experiments
//
//   cavheat run --experiment <name> --config <file> [--set key=value]... --out <path> --format csv|json
//
// Exit codes: 0 ok, 2 validation, 3 solver, 4 I/O, 5 crosscheck failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cavheat/config.hpp"
#include "cavheat/experiments.hpp"
#include "cavheat/model.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kValidation = 2,
    kSolver = 3,
    kIo = 4,
    kCrosscheck = 5,
};

struct RunOptions {
    std::string experiment;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string format;
    int threads{0};
    bool serial{false};
};

void print_validation(const cavheat::ValidationError& e)
{
    std::cerr << "cavheat: invalid input\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << '\n';
}

void print_crosscheck(const cavheat::cli::CrosscheckReport& report)
{
    for (const auto& p : report.pairs) {
        std::fprintf(stderr, "cavheat: crosscheck %s vs %s: deviation %.3e (tol %.1e), |diff| %.3e (floor %.1e) %s\n",
                     p.first.c_str(), p.second.c_str(), p.deviation, p.tolerance, p.difference, p.floor,
                     p.pass ? "ok" : "FAIL");
    }
}

int run(const RunOptions& opt)
{
    using namespace cavheat;
    using namespace cavheat::cli;

    const auto experiment = parse_experiment(opt.experiment);
    if (!experiment) throw ValidationError({"--experiment: unknown experiment '" + opt.experiment + "'"});
    const auto format = parse_format(opt.format);
    if (!format) throw ValidationError({"--format: expected csv or json, got '" + opt.format + "'"});

    Config config = load_config(opt.config_path);
    for (const auto& o : opt.overrides) apply_override(config, o);
    const SweepSpec spec = make_spec(*experiment, config);

#ifdef _OPENMP
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif
    const ExperimentResult result = run_experiment(spec, opt.serial ? Execution::serial : Execution::openmp);
    for (const auto& w : result.warnings) std::cerr << "cavheat: warning: " << w << '\n';

    write_result(opt.out_path, *format, *experiment, result);

    if (result.crosscheck) {
        print_crosscheck(*result.crosscheck);
        if (!result.crosscheck->pass) return kCrosscheck;
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Steady-state heat currents through coupled cavities"};
    app.require_subcommand(1);

    RunOptions opt;
    CLI::App* run_cmd = app.add_subcommand("run", "Run one named experiment and write its table");
    run_cmd->add_option("--experiment", opt.experiment, "gamma_sweep | chi_sweep | current_decomposition | "
                                                        "rectification_sweep | size_scan | profile | regime_table | "
                                                        "oracle_crosscheck")
        ->required();
    run_cmd->add_option("--config", opt.config_path, "key = value parameter file")->required();
    run_cmd->add_option("--set", opt.overrides, "override one parameter, key=value");
    run_cmd->add_option("--out", opt.out_path, "output file")->required();
    run_cmd->add_option("--format", opt.format, "csv | json")->required();
    run_cmd->add_option("--threads", opt.threads, "OpenMP threads (default: runtime choice)")->check(CLI::NonNegativeNumber);
    run_cmd->add_flag("--serial", opt.serial, "use the serial reference kernels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        return run(opt);
    } catch (const cavheat::ValidationError& e) {
        print_validation(e);
        return kValidation;
    } catch (const cavheat::cli::IoError& e) {
        std::cerr << "cavheat: I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const cavheat::SolverError& e) {
        std::cerr << "cavheat: solver failure: " << e.what() << '\n';
        return kSolver;
    } catch (const std::invalid_argument& e) {
        std::cerr << "cavheat: invalid input: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "cavheat: internal error: " << e.what() << '\n';
        return kInternal;
    }
}
