#include "lisbeam/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lisbeam {

void ArrayGeometry::validate() const
{
    if (n_tx < 1 || n_rx < 1 || lis_y < 1 || lis_z < 1)
        throw DomainError("array geometry: all element counts must be >= 1");
    if (!(spacing_ratio > 0.0))
        throw DomainError("array geometry: spacing_ratio must be positive");
}

void LinkBudget::validate() const
{
    if (!(noise_power > 0.0))
        throw DomainError("link budget: noise_power must be positive");
    if (!(tx_power > 0.0))
        throw DomainError("link budget: tx_power must be positive");
    if (!(bandwidth_hz > 0.0))
        throw DomainError("link budget: bandwidth_hz must be positive");
    if (shadow_sigma < 0.0)
        throw DomainError("link budget: shadow_sigma must be non-negative");
}

CompositePathBank::CompositePathBank(int l_paths, int p_paths, int m)
    : l_paths_(l_paths), p_paths_(p_paths), m_(m),
      vectors_(static_cast<std::size_t>(l_paths) * static_cast<std::size_t>(p_paths), CVec::Zero(m))
{
    if (l_paths < 1 || p_paths < 1 || m < 1)
        throw DimensionError("composite path bank: dimensions must be >= 1");
}

std::size_t CompositePathBank::index(int i, int j) const
{
    if (i < 0 || i >= l_paths_ || j < 0 || j >= p_paths_)
        throw DimensionError("composite path bank: index out of range");
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(p_paths_) + static_cast<std::size_t>(j);
}

CVec ula_response(double gamma, int n, double spacing_ratio)
{
    if (n < 1)
        throw DomainError("ula_response: n must be >= 1");
    const double phase_step = 2.0 * kPi * spacing_ratio * std::sin(gamma);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CVec a(n);
    for (int k = 0; k < n; ++k)
        a[k] = std::polar(scale, phase_step * k);
    return a;
}

CVec upa_response(double theta, double eta, int m_y, int m_z, double spacing_ratio)
{
    if (m_y < 1 || m_z < 1)
        throw DomainError("upa_response: m_y and m_z must be >= 1");
    const double k = 2.0 * kPi * spacing_ratio;
    const double step_y = k * std::cos(eta) * std::sin(theta);
    const double step_z = k * std::sin(eta);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m_y) * m_z);
    CVec a(m_y * m_z);
    for (int m1 = 0; m1 < m_y; ++m1)
        for (int m2 = 0; m2 < m_z; ++m2)
            a[m1 * m_z + m2] = std::polar(scale, step_y * m1 + step_z * m2);
    return a;
}

double path_loss_db(double distance_m, const LinkBudget& budget, Rng& rng)
{
    if (!(distance_m > 0.0))
        throw DomainError("path_loss_db: distance must be positive, got " + std::to_string(distance_m));
    double xi = 0.0;
    if (budget.shadow_sigma > 0.0) {
        std::normal_distribution<double> shadow(0.0, budget.shadow_sigma);
        xi = shadow(rng);
    }
    return budget.a_intercept + 10.0 * budget.b_exponent * std::log10(distance_m) + xi;
}

namespace {

double uniform(Rng& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng);
}

// Rician split: index 0 is LOS with CN(0, 10^(-kappa/10)), the rest NLOS with an extra mu dB.
cdouble draw_gain(Rng& rng, int index, double kappa_db, double mu_db)
{
    const double loss_db = index == 0 ? kappa_db : kappa_db + mu_db;
    return complex_gaussian(rng, std::pow(10.0, -0.1 * loss_db));
}

} // namespace

PathSet sample_paths(Rng& rng, const ArrayGeometry& geometry, const LinkBudget& budget,
                     const LinkDistances& distances, int p_paths, int l_paths)
{
    geometry.validate();
    if (p_paths < 1 || l_paths < 1)
        throw DomainError("sample_paths: path counts must be >= 1");

    const double m = geometry.lis_elements();
    const double alpha_scale = std::sqrt(geometry.n_tx * m / p_paths);
    const double beta_scale = std::sqrt(m * geometry.n_rx / l_paths);

    // Shadowing is a large-scale effect: one draw per hop per realization.
    const double kappa_bs_lis = path_loss_db(distances.bs_lis_m, budget, rng);
    const double kappa_lis_ue = path_loss_db(distances.lis_ue_m, budget, rng);

    const double half_pi = kPi / 2.0;
    const double quarter_pi = kPi / 4.0;

    PathSet paths;
    paths.bs_lis.reserve(p_paths);
    for (int i = 0; i < p_paths; ++i) {
        BsLisPath p;
        p.gain = alpha_scale * draw_gain(rng, i, kappa_bs_lis, budget.rician_mu);
        p.aod_bs = uniform(rng, -half_pi, half_pi);
        p.aoa_az = uniform(rng, -half_pi, half_pi);
        p.aoa_el = uniform(rng, -quarter_pi, quarter_pi);
        paths.bs_lis.push_back(p);
    }
    paths.lis_ue.reserve(l_paths);
    for (int i = 0; i < l_paths; ++i) {
        LisUePath p;
        p.gain = beta_scale * draw_gain(rng, i, kappa_lis_ue, budget.rician_mu);
        p.aod_az = uniform(rng, -half_pi, half_pi);
        p.aod_el = uniform(rng, -quarter_pi, quarter_pi);
        p.aoa_ue = uniform(rng, -half_pi, half_pi);
        paths.lis_ue.push_back(p);
    }
    return paths;
}

PathSet sort_paths_descending(PathSet paths)
{
    auto by_gain = [](const auto& a, const auto& b) { return std::abs(a.gain) > std::abs(b.gain); };
    std::stable_sort(paths.bs_lis.begin(), paths.bs_lis.end(), by_gain);
    std::stable_sort(paths.lis_ue.begin(), paths.lis_ue.end(), by_gain);
    return paths;
}

MmWaveChannel assemble_channels(const PathSet& paths, const ArrayGeometry& geometry, const LinkBudget& budget)
{
    geometry.validate();
    if (paths.bs_lis.empty() || paths.lis_ue.empty())
        throw DimensionError("assemble_channels: both hops need at least one path");

    const int m = geometry.lis_elements();
    MmWaveChannel ch;
    ch.g = CMat::Zero(m, geometry.n_tx);
    ch.r = CMat::Zero(geometry.n_rx, m);
    ch.tx_gain = budget.tx_antenna_gain;
    ch.rx_gain = budget.rx_antenna_gain;

    for (const auto& p : paths.bs_lis) {
        const CVec a_lis = upa_response(p.aoa_az, p.aoa_el, geometry.lis_y, geometry.lis_z, geometry.spacing_ratio);
        const CVec a_bs = ula_response(p.aod_bs, geometry.n_tx, geometry.spacing_ratio);
        ch.g.noalias() += p.gain * a_lis * a_bs.adjoint();
    }
    for (const auto& p : paths.lis_ue) {
        const CVec a_ue = ula_response(p.aoa_ue, geometry.n_rx, geometry.spacing_ratio);
        const CVec a_lis = upa_response(p.aod_az, p.aod_el, geometry.lis_y, geometry.lis_z, geometry.spacing_ratio);
        ch.r.noalias() += p.gain * a_ue * a_lis.adjoint();
    }
    return ch;
}

CompositePathBank composite_path_vectors(const PathSet& paths, const ArrayGeometry& geometry)
{
    geometry.validate();
    const int l = static_cast<int>(paths.lis_ue.size());
    const int p = static_cast<int>(paths.bs_lis.size());
    CompositePathBank bank(l, p, geometry.lis_elements());

    std::vector<CVec> departures;
    departures.reserve(l);
    for (const auto& path : paths.lis_ue)
        departures.push_back(
            upa_response(path.aod_az, path.aod_el, geometry.lis_y, geometry.lis_z, geometry.spacing_ratio).conjugate());

    for (int j = 0; j < p; ++j) {
        const auto& path = paths.bs_lis[j];
        const CVec arrival = upa_response(path.aoa_az, path.aoa_el, geometry.lis_y, geometry.lis_z, geometry.spacing_ratio);
        for (int i = 0; i < l; ++i)
            bank.at(i, j) = departures[i].cwiseProduct(arrival);
    }
    return bank;
}

CMat effective_channel(const MmWaveChannel& channel, const CVec& v)
{
    const Eigen::Index m = channel.g.rows();
    if (v.size() != m || channel.r.cols() != m)
        throw DimensionError("effective_channel: LIS dimension mismatch");
    CMat h = channel.r * v.conjugate().asDiagonal() * channel.g;
    h *= channel.tx_gain * channel.rx_gain;
    return h;
}

PathSet perturb_angles(PathSet paths, double beta, Rng& rng)
{
    if (beta < 0.0)
        throw DomainError("perturb_angles: beta must be non-negative");
    // delta = beta * u with u ~ U(-1, 1): identical draw counts for every beta,
    // so sweeps over beta reuse the same error directions.
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto jitter = [&](double& angle) { angle += beta * unit(rng); };
    for (auto& p : paths.bs_lis) {
        jitter(p.aod_bs);
        jitter(p.aoa_az);
        jitter(p.aoa_el);
    }
    for (auto& p : paths.lis_ue) {
        jitter(p.aod_az);
        jitter(p.aod_el);
        jitter(p.aoa_ue);
    }
    return paths;
}

} // namespace lisbeam
