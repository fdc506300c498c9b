#include "lisbeam/metrics.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

namespace lisbeam {

double spectral_efficiency(const CMat& h_eff, const CMat& f, const CMat& w, double noise_power)
{
    if (h_eff.cols() != f.rows() || h_eff.rows() != w.rows() || f.cols() != w.cols())
        throw DimensionError("spectral_efficiency: inconsistent dimensions");
    if (!(noise_power > 0.0))
        throw DomainError("spectral_efficiency: noise power must be positive");

    Eigen::JacobiSVD<CMat> svd(w, Eigen::ComputeThinU);
    const RVec& s = svd.singularValues();
    if (s.size() == 0 || !(s[s.size() - 1] > 1e-12 * s[0]))
        throw CombinerRankError("spectral_efficiency: combiner is rank deficient");

    const CMat b = svd.matrixU().adjoint() * h_eff * f;
    if (!b.allFinite())
        throw NumericalError("spectral_efficiency: non-finite received signal");
    CMat k = CMat::Identity(b.rows(), b.rows()) + (b * b.adjoint()) / noise_power;
    k = 0.5 * (k + k.adjoint()).eval();

    Eigen::LLT<CMat> llt(k);
    if (llt.info() != Eigen::Success)
        throw NumericalError("spectral_efficiency: Cholesky factorization failed");
    double log_det = 0.0;
    const CMat& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i)
        log_det += std::log2(l(i, i).real());
    return std::max(0.0, 2.0 * log_det);
}

double spectral_efficiency_digital(const RVec& sigma1, const RVec& powers, double noise_power)
{
    if (sigma1.size() != powers.size())
        throw DimensionError("spectral_efficiency_digital: length mismatch");
    double se = 0.0;
    for (Eigen::Index i = 0; i < sigma1.size(); ++i)
        se += std::log2(1.0 + powers[i] * sigma1[i] * sigma1[i] / noise_power);
    return se;
}

double truncated_condition_number(const CMat& h_eff, int n_streams)
{
    if (n_streams < 1 || n_streams > std::min(h_eff.rows(), h_eff.cols()))
        throw DimensionError("truncated_condition_number: n_streams out of range");
    Eigen::JacobiSVD<CMat> svd(h_eff);
    const RVec& s = svd.singularValues();
    const double last = s[n_streams - 1];
    if (!(last > 0.0))
        throw RankDeficiencyError("truncated_condition_number: singular value N_s is zero");
    const double ratio = s[0] / last;
    return ratio * ratio;
}

double frobenius_bound(const CMat& h_eff, double rho, int n_streams, double noise_power)
{
    const double ns = n_streams;
    return ns * std::log2(1.0 + rho * h_eff.squaredNorm() / (ns * ns * noise_power));
}

} // namespace lisbeam
