#pragma once

// Fully digital SVD transceiver and its hybrid analog/digital approximation.

#include <optional>
#include <vector>

#include "lisbeam/manifold.hpp"

namespace lisbeam {

class NoChannelError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct TruncatedSvd {
    CMat u1;     // N_r x N_s
    RVec sigma1; // descending
    CMat v1;     // N_t x N_s
};

TruncatedSvd truncated_svd(const CMat& h, int n_streams);

struct PowerAllocation {
    RVec powers;
    double water_level = 0.0; // 1 / lambda
};

// p_i = max(mu - sigma^2 / s_i^2, 0) with sum p_i = rho. Throws NoChannelError if all s_i are zero.
PowerAllocation water_filling(const RVec& sigma1, double rho, double noise_power);

// V_1 diag(sqrt(p_i))
CMat digital_precoder(const TruncatedSvd& svd, const PowerAllocation& alloc);
// sqrt(rho / N_s) V_1
CMat digital_precoder_equal_power(const TruncatedSvd& svd, double rho);

CMat digital_combiner(const TruncatedSvd& svd);

// SVD-based Moore-Penrose pseudo-inverse; singular values below rel_tol * s_max are dropped.
CMat pseudo_inverse(const CMat& a, double rel_tol = 1e-12);

struct HybridConfig {
    int max_alternations = 30;
    int inner_iters = 20;
    double tolerance = 1e-6; // relative residual change between alternations
    DescentConfig descent{1e-12, 20, 0.5, 1e-4, 1.0, 50};
};

struct HybridFactorization {
    CMat analog;  // N x n_rf, unit-modulus entries
    CMat digital; // n_rf x N_s
    std::vector<double> residuals; // ||target - analog * digital||_F after each alternation
    int alternations = 0;
};

// Squared residual and its Euclidean gradient with respect to the analog matrix,
// in vectorized (column-major) form: f(x) = ||T - X B||_F^2, grad = -2 (T - X B) B^H.
double hybrid_residual(const CVec& analog_vec, const CMat& target, const CMat& digital);
CVec hybrid_residual_gradient(const CVec& analog_vec, const CMat& target, const CMat& digital);

// Alternating minimization of ||target - F_RF F_BB||_F over unit-modulus F_RF and free F_BB.
// When `power` is given, F_BB is finally rescaled so ||F_RF F_BB||_F^2 = power.
HybridFactorization hybrid_factorize(const CMat& target, int n_rf, const HybridConfig& cfg, Rng& rng,
                                     std::optional<double> power = std::nullopt);

struct HybridPrecoder {
    CMat f_rf;
    CMat f_bb;
    CMat product() const { return f_rf * f_bb; }
};

struct HybridCombiner {
    CMat w_rf;
    CMat w_bb;
    CMat product() const { return w_rf * w_bb; }
};

HybridPrecoder hybrid_precoder(const CMat& f_opt, int n_rf, double rho, const HybridConfig& cfg, Rng& rng);
HybridCombiner hybrid_combiner(const CMat& w_opt, int n_rf, const HybridConfig& cfg, Rng& rng);

} // namespace lisbeam
