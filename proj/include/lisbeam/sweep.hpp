#pragma once

// Seeded Monte-Carlo sweeps comparing LIS phase designs.

#include <cstdint>
#include <optional>
#include <vector>

#include "lisbeam/config.hpp"

namespace lisbeam {

enum class PrecodingMode { digital, hybrid };

const char* to_string(PrecodingMode m);

struct SweepRow {
    double sweep_value = 0.0;
    Method method = Method::tsvd;
    PrecodingMode precoding = PrecodingMode::digital;
    double mean_se = 0.0;
    double std_se = 0.0; // sample standard deviation over successful trials
    double mean_cond = 0.0;
    double mean_offdiag = 0.0;
    double mean_iters = 0.0;
    int errors = 0;
    double wall_ms = 0.0; // mean design time per trial
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

// Outcome of one method within one trial.
struct MethodOutcome {
    Method method = Method::tsvd;
    bool failed = false;
    std::string error;
    double se_digital = 0.0;
    std::optional<double> se_hybrid;
    double cond = 0.0;
    double offdiag = 0.0;
    int iterations = 0;
    double wall_ms = 0.0;
};

// Seed of trial `trial`. Sweep points share it (paired across the sweep grid).
std::uint64_t trial_seed(std::uint64_t master_seed, int trial);

// One channel draw, every configured method on it. `point` must already carry
// the sweep value. Designs see the angle-perturbed channel, evaluation uses the true one.
std::vector<MethodOutcome> run_trial(const ExperimentConfig& point, std::uint64_t seed);

// `parallel` worker threads (1 = run inline). Rows are ordered by sweep index,
// then method (tsvd, spgm, random), then precoding (digital, hybrid).
SweepResult run_sweep(const ExperimentConfig& cfg, int parallel = 1);

} // namespace lisbeam
