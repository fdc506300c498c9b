#include "lisbeam/transceiver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace lisbeam {

TruncatedSvd truncated_svd(const CMat& h, int n_streams)
{
    if (!h.allFinite())
        throw NumericalError("truncated_svd: non-finite entries");
    const auto rank_cap = std::min(h.rows(), h.cols());
    if (n_streams < 1 || n_streams > rank_cap)
        throw DimensionError("truncated_svd: n_streams must lie in [1, min(rows, cols)]");

    Eigen::JacobiSVD<CMat> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    TruncatedSvd out;
    out.u1 = svd.matrixU().leftCols(n_streams);
    out.sigma1 = svd.singularValues().head(n_streams);
    out.v1 = svd.matrixV().leftCols(n_streams);
    return out;
}

PowerAllocation water_filling(const RVec& sigma1, double rho, double noise_power)
{
    if (!(rho > 0.0))
        throw DomainError("water_filling: rho must be positive");
    if (!(noise_power > 0.0))
        throw DomainError("water_filling: noise power must be positive");
    const int n = static_cast<int>(sigma1.size());

    // Inverse gains sigma^2 / s_i^2; zero singular values never receive power.
    std::vector<double> floor(n);
    std::vector<int> order;
    for (int i = 0; i < n; ++i) {
        if (sigma1[i] < 0.0 || !std::isfinite(sigma1[i]))
            throw DomainError("water_filling: singular values must be finite and non-negative");
        if (sigma1[i] > 0.0) {
            floor[i] = noise_power / (sigma1[i] * sigma1[i]);
            order.push_back(i);
        }
    }
    if (order.empty())
        throw NoChannelError("water_filling: all singular values are zero");
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return floor[a] < floor[b]; });

    // Largest active set whose weakest member still sits below the water level.
    double level = 0.0;
    std::size_t active = order.size();
    for (; active >= 1; --active) {
        double sum = rho;
        for (std::size_t k = 0; k < active; ++k)
            sum += floor[order[k]];
        level = sum / static_cast<double>(active);
        if (level > floor[order[active - 1]])
            break;
    }

    PowerAllocation alloc{RVec::Zero(n), level};
    for (std::size_t k = 0; k < active; ++k)
        alloc.powers[order[k]] = level - floor[order[k]];
    return alloc;
}

CMat digital_precoder(const TruncatedSvd& svd, const PowerAllocation& alloc)
{
    if (alloc.powers.size() != svd.v1.cols())
        throw DimensionError("digital_precoder: allocation length does not match stream count");
    return svd.v1 * alloc.powers.cwiseSqrt().cast<cdouble>().asDiagonal();
}

CMat digital_precoder_equal_power(const TruncatedSvd& svd, double rho)
{
    const double ns = static_cast<double>(svd.v1.cols());
    return std::sqrt(rho / ns) * svd.v1;
}

CMat digital_combiner(const TruncatedSvd& svd)
{
    return svd.u1;
}

CMat pseudo_inverse(const CMat& a, double rel_tol)
{
    Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& s = svd.singularValues();
    const double cutoff = s.size() > 0 ? rel_tol * s[0] : 0.0;
    RVec inv = RVec::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > cutoff)
            inv[i] = 1.0 / s[i];
    return svd.matrixV() * inv.cast<cdouble>().asDiagonal() * svd.matrixU().adjoint();
}

namespace {

CMat as_matrix(const CVec& x, Eigen::Index rows, Eigen::Index cols)
{
    return Eigen::Map<const CMat>(x.data(), rows, cols);
}

CVec as_vector(const CMat& m)
{
    return Eigen::Map<const CVec>(m.data(), m.size());
}

} // namespace

double hybrid_residual(const CVec& analog_vec, const CMat& target, const CMat& digital)
{
    const CMat x = as_matrix(analog_vec, target.rows(), digital.rows());
    return (target - x * digital).squaredNorm();
}

CVec hybrid_residual_gradient(const CVec& analog_vec, const CMat& target, const CMat& digital)
{
    const CMat x = as_matrix(analog_vec, target.rows(), digital.rows());
    const CMat grad = -2.0 * (target - x * digital) * digital.adjoint();
    return as_vector(grad);
}

HybridFactorization hybrid_factorize(const CMat& target, int n_rf, const HybridConfig& cfg, Rng& rng,
                                     std::optional<double> power)
{
    const auto n = target.rows();
    const auto ns = target.cols();
    if (ns < 1 || n_rf < ns || n_rf > n)
        throw DimensionError("hybrid_factorize: need N_s <= n_rf <= N");
    if (!target.allFinite())
        throw NumericalError("hybrid_factorize: non-finite target");

    // Work on the unit-norm target so the descent thresholds are scale free.
    const double scale = target.norm();
    if (scale == 0.0)
        throw NoChannelError("hybrid_factorize: zero target");
    const CMat t = target / scale;

    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    CMat analog(n, n_rf);
    for (Eigen::Index c = 0; c < n_rf; ++c)
        for (Eigen::Index r = 0; r < n; ++r)
            analog(r, c) = std::polar(1.0, phase(rng));

    DescentConfig inner = cfg.descent;
    inner.max_iters = cfg.inner_iters;

    HybridFactorization out;
    CMat digital = pseudo_inverse(analog) * t;
    double prev = (t - analog * digital).norm();
    for (int k = 0; k < cfg.max_alternations; ++k) {
        digital = pseudo_inverse(analog) * t;

        auto f = [&](const CVec& x) { return hybrid_residual(x, t, digital); };
        auto grad = [&](const CVec& x) { return hybrid_residual_gradient(x, t, digital); };
        DescentResult res = ccm_descent(f, grad, PhaseVector(as_vector(analog)), inner);
        analog = as_matrix(res.point.values(), n, n_rf);

        const double residual = (t - analog * digital).norm();
        out.residuals.push_back(residual * scale);
        ++out.alternations;
        const double change = prev > 0.0 ? std::abs(prev - residual) / prev : 0.0;
        prev = residual;
        if (residual == 0.0 || change < cfg.tolerance)
            break;
    }

    out.analog = std::move(analog);
    out.digital = digital * scale;
    if (power) {
        const double norm2 = (out.analog * out.digital).squaredNorm();
        if (!(norm2 > 0.0))
            throw NumericalError("hybrid_factorize: cannot normalize a zero precoder");
        out.digital *= std::sqrt(*power / norm2);
    }
    return out;
}

HybridPrecoder hybrid_precoder(const CMat& f_opt, int n_rf, double rho, const HybridConfig& cfg, Rng& rng)
{
    HybridFactorization fac = hybrid_factorize(f_opt, n_rf, cfg, rng, rho);
    return {std::move(fac.analog), std::move(fac.digital)};
}

HybridCombiner hybrid_combiner(const CMat& w_opt, int n_rf, const HybridConfig& cfg, Rng& rng)
{
    HybridFactorization fac = hybrid_factorize(w_opt, n_rf, cfg, rng);
    return {std::move(fac.analog), std::move(fac.digital)};
}

} // namespace lisbeam
