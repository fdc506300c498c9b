// lisbeam: Monte-Carlo runner for LIS-assisted mmWave MIMO beamforming.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <thread>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "lisbeam/config.hpp"
#include "lisbeam/csv.hpp"
#include "lisbeam/oracle.hpp"
#include "lisbeam/sweep.hpp"

namespace {

void print_version()
{
    std::cout << "lisbeam " << LISBEAM_VERSION << " (Eigen " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION
              << '.' << EIGEN_MINOR_VERSION << ", " << __VERSION__ << ")\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"LIS-assisted mmWave MIMO beamforming simulator"};
    app.require_subcommand(0, 1);

    bool version = false;
    app.add_flag("--version", version, "Print build information");

    std::string run_config;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    int parallel = 1;
    auto* run = app.add_subcommand("run", "Run the configured sweep and write CSV");
    run->add_option("config", run_config, "Config file")->required();
    run->add_option("--out", out_path, "CSV output path (default: stdout)");
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--trials", trials, "Override the trial count")->check(CLI::PositiveNumber);
    run->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);

    std::string oracle_config;
    auto* oracle = app.add_subcommand("oracle", "Compare optimize_tsvd with exhaustive quantized search");
    oracle->add_option("config", oracle_config, "Config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (version) {
        print_version();
        return 0;
    }

    try {
        if (*run) {
            lisbeam::ExperimentConfig cfg = lisbeam::load_config(run_config);
            if (seed)
                cfg.seed = *seed;
            if (trials)
                cfg.trials = *trials;
            const lisbeam::SweepResult result = lisbeam::run_sweep(cfg, parallel);
            if (out_path.empty())
                std::cout << lisbeam::format_csv(result);
            else
                lisbeam::emit_csv(result, out_path);
            int errors = 0;
            for (const auto& row : result.rows)
                errors += row.errors;
            if (errors > 0)
                std::cerr << "warning: " << errors << " failed method evaluations (see errors column)\n";
            return 0;
        }
        if (*oracle) {
            const lisbeam::ExperimentConfig cfg = lisbeam::load_config(oracle_config);
            const lisbeam::OracleComparison cmp = lisbeam::compare_with_oracle(cfg);
            std::cout << std::setprecision(12) << "states evaluated: " << cmp.evaluations << '\n'
                      << "oracle objective: " << cmp.oracle_objective << '\n'
                      << "tsvd objective:   " << cmp.tsvd_objective << '\n'
                      << "ratio:            " << cmp.ratio() << '\n';
            return 0;
        }
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
