#pragma once

// Exhaustive search over quantized LIS phases; a reference for tiny problems.

#include <cstdint>

#include "lisbeam/channel.hpp"
#include "lisbeam/config.hpp"
#include "lisbeam/manifold.hpp"
#include "lisbeam/passive_bf.hpp"

namespace lisbeam {

// levels^M exceeds the enumeration budget.
class SearchSpaceError : public Error {
public:
    using Error::Error;
};

inline constexpr double kOracleMaxStates = 1e7;

struct OracleResult {
    PhaseVector v;
    double objective = 0.0; // sum_i log2(1 + a_i |v^H p^{ii}|^2), maximized
    std::uint64_t evaluations = 0;
};

// Every v with v_m in {exp(j 2 pi k / levels)}.
OracleResult brute_force_phase_oracle(const TsvdProblem& prob, int levels);

// Builds the surrogate from a channel's paths (sorted internally) and enumerates.
OracleResult brute_force_phase_oracle(const PathSet& paths, const ArrayGeometry& geometry, int n_streams,
                                      int levels, const LinkBudget& budget);

struct OracleComparison {
    double oracle_objective = 0.0;
    double tsvd_objective = 0.0;
    std::uint64_t evaluations = 0;
    double ratio() const { return tsvd_objective / oracle_objective; }
};

// One seeded channel draw at `cfg`'s first sweep point: oracle vs optimize_tsvd.
OracleComparison compare_with_oracle(const ExperimentConfig& cfg);

} // namespace lisbeam
