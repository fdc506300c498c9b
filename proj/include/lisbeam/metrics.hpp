#pragma once

#include "lisbeam/types.hpp"

namespace lisbeam {

// Combiner with (numerically) dependent columns.
class CombinerRankError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RankDeficiencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct LinkMetrics {
    double spectral_efficiency = 0.0;
    double truncated_condition_number = 1.0;
    double frobenius_bound = 0.0;
    double offdiag_ratio = 0.0;
};

/// Achievable rate in bits/s/Hz,
///   log2 det(I + W^+ H F F^H H^H W / sigma^2).
/// For full-column-rank W this equals log2 det(I + Q^H H F F^H H^H Q / sigma^2)
/// with Q an orthonormal basis of range(W); that Hermitian form is what gets
/// factorized (Cholesky, log domain).
double spectral_efficiency(const CMat& h_eff, const CMat& f, const CMat& w, double noise_power);

// sum_i log2(1 + p_i s_i^2 / sigma^2)
double spectral_efficiency_digital(const RVec& sigma1, const RVec& powers, double noise_power);

// (s_1 / s_Ns)^2. Throws RankDeficiencyError if s_Ns is zero.
double truncated_condition_number(const CMat& h_eff, int n_streams);

// N_s log2(1 + rho ||H||_F^2 / (N_s^2 sigma^2))
double frobenius_bound(const CMat& h_eff, double rho, int n_streams, double noise_power);

} // namespace lisbeam
