#pragma once

// LIS phase design: the truncated-SVD surrogate (T-SVD-BF), the sum-path-gain
// baseline (SPGM), random phases, and the composite-path coupling diagnostics.

#include <vector>

#include "lisbeam/channel.hpp"
#include "lisbeam/manifold.hpp"

namespace lisbeam {

// Thrown for inconsistent solver parameters (e.g. more streams than paths).
class ConfigurationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Diagonal composite vectors p^{ii} and per-stream effective SNRs
//   a_i = rho (G_t G_r)^2 |alpha_i beta_i|^2 / (N_s sigma^2).
struct TsvdProblem {
    std::vector<CVec> diagonal; // p^{ii}, i < n_streams
    std::vector<double> weights; // a_i
    int n_streams = 0;

    int elements() const { return diagonal.empty() ? 0 : static_cast<int>(diagonal.front().size()); }
};

// Builds the problem from the top-N_s paths of a descending-sorted PathSet.
TsvdProblem make_tsvd_problem(const PathSet& sorted_paths, const CompositePathBank& bank, int n_streams,
                              const LinkBudget& budget);

// -sum_i log2(1 + a_i |v^H p^{ii}|^2)
double tsvd_objective(const CVec& v, const TsvdProblem& prob);

// -sum_i (2 a_i / ln 2) p^{ii} (p^{ii})^H v / (1 + a_i |v^H p^{ii}|^2)
CVec tsvd_euclidean_gradient(const CVec& v, const TsvdProblem& prob);

struct PassiveDesign {
    PhaseVector v;
    std::vector<double> trace;
    int iterations = 0;
};

PhaseVector random_phases(Rng& rng, int m);

// Sorts paths, builds the surrogate and runs the descent from a random start drawn from `rng`.
PassiveDesign optimize_tsvd(const PathSet& paths, const ArrayGeometry& geometry, const LinkBudget& budget,
                            int n_streams, const DescentConfig& cfg, Rng& rng);

// Same, starting from a given point.
PassiveDesign optimize_tsvd(const TsvdProblem& prob, PhaseVector start, const DescentConfig& cfg);

// tr(H H^H) / (G_t G_r)^2 = w^H Q w with w = diag(Phi) = conj(v) and Q = (R^H R) .* (G G^H)^T.
struct SpgmProblem {
    CMat q;
    double scale = 1.0; // tr(Q); the solver works with Q / tr(Q)
};

SpgmProblem make_spgm_problem(const MmWaveChannel& channel);

// w^H Q w for the LIS state vector v (w = conj(v)), unnormalized.
double spgm_path_gain(const CVec& v, const SpgmProblem& prob);

// Normalized minimization form: -w^H Q w / tr(Q), as a function of w.
double spgm_objective(const CVec& w, const SpgmProblem& prob);
CVec spgm_euclidean_gradient(const CVec& w, const SpgmProblem& prob);

// Maximizes tr(H_eff H_eff^H) over the CCM; returns the LIS state vector v.
PassiveDesign optimize_spgm(const MmWaveChannel& channel, const DescentConfig& cfg, Rng& rng);

struct CouplingMatrix {
    CMat d;       // D(i, j) = beta_i alpha_j d_ij, L x P
    CMat passive; // d_ij = v^H p^{ij}
};

CouplingMatrix coupling_matrix(const CVec& v, const PathSet& paths, const CompositePathBank& bank);

// mean_{i != j} |d_ij| / mean_i |d_ii| over the leading n_streams x n_streams block.
double offdiag_ratio(const CouplingMatrix& coupling, int n_streams);

// Default diagnostic threshold tau = 0.1 min_i |d_ii| over the leading block.
double default_tau(const CouplingMatrix& coupling, int n_streams);

} // namespace lisbeam
