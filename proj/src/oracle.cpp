#include "lisbeam/oracle.hpp"

#include <cmath>

#include "lisbeam/sweep.hpp"

namespace lisbeam {

OracleResult brute_force_phase_oracle(const TsvdProblem& prob, int levels)
{
    if (levels < 1)
        throw DomainError("oracle: levels must be >= 1");
    const int m = prob.elements();
    const int ns = prob.n_streams;
    if (m < 1 || ns < 1)
        throw DimensionError("oracle: empty problem");
    if (m * std::log10(static_cast<double>(levels)) > std::log10(kOracleMaxStates) + 1e-12)
        throw SearchSpaceError("oracle: " + std::to_string(levels) + "^" + std::to_string(m) +
                               " states exceed the 1e7 enumeration budget");

    std::vector<cdouble> alphabet(levels);
    for (int k = 0; k < levels; ++k)
        alphabet[k] = std::polar(1.0, 2.0 * kPi * k / levels);

    // Depth-first over elements, carrying the partial sums d_i = sum_m conj(v_m) p_i[m].
    std::vector<std::vector<cdouble>> partial(m + 1, std::vector<cdouble>(ns, 0.0));
    std::vector<int> digits(m, 0);
    std::vector<int> best_digits(m, 0);
    double best = -1.0;
    std::uint64_t evaluations = 0;

    auto score = [&](const std::vector<cdouble>& d) {
        double s = 0.0;
        for (int i = 0; i < ns; ++i)
            s += std::log2(1.0 + prob.weights[i] * std::norm(d[i]));
        return s;
    };

    auto recurse = [&](auto&& self, int depth) -> void {
        if (depth == m) {
            ++evaluations;
            const double s = score(partial[m]);
            if (s > best) {
                best = s;
                best_digits = digits;
            }
            return;
        }
        for (int k = 0; k < levels; ++k) {
            digits[depth] = k;
            const cdouble w = std::conj(alphabet[k]);
            for (int i = 0; i < ns; ++i)
                partial[depth + 1][i] = partial[depth][i] + w * prob.diagonal[i][depth];
            self(self, depth + 1);
        }
    };
    recurse(recurse, 0);

    CVec v(m);
    for (int e = 0; e < m; ++e)
        v[e] = alphabet[best_digits[e]];
    // Re-score the winner directly rather than through accumulated partial sums.
    return {PhaseVector(v), -tsvd_objective(v, prob), evaluations};
}

OracleResult brute_force_phase_oracle(const PathSet& paths, const ArrayGeometry& geometry, int n_streams,
                                      int levels, const LinkBudget& budget)
{
    const PathSet sorted = sort_paths_descending(paths);
    const CompositePathBank bank = composite_path_vectors(sorted, geometry);
    return brute_force_phase_oracle(make_tsvd_problem(sorted, bank, n_streams, budget), levels);
}

OracleComparison compare_with_oracle(const ExperimentConfig& cfg)
{
    const ExperimentConfig point = cfg.at_sweep_value(cfg.sweep_values.front());
    const LinkBudget budget = point.link_budget();
    const std::uint64_t seed = trial_seed(cfg.seed, 0);
    Rng channel_rng(mix_seed(seed, 0));
    const PathSet sorted = sort_paths_descending(
        sample_paths(channel_rng, point.geometry, budget, point.distances(), point.p_paths, point.l_paths));
    const CompositePathBank bank = composite_path_vectors(sorted, point.geometry);
    const TsvdProblem prob = make_tsvd_problem(sorted, bank, point.n_streams, budget);

    const OracleResult oracle = brute_force_phase_oracle(prob, point.oracle_levels);
    Rng design_rng(mix_seed(seed, 2, 0));
    const PassiveDesign design =
        optimize_tsvd(prob, random_phases(design_rng, point.geometry.lis_elements()), point.descent);
    return {oracle.objective, -tsvd_objective(design.v.values(), prob), oracle.evaluations};
}

} // namespace lisbeam
