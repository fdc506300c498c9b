#include "lisbeam/passive_bf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lisbeam {

TsvdProblem make_tsvd_problem(const PathSet& sorted_paths, const CompositePathBank& bank, int n_streams,
                              const LinkBudget& budget)
{
    const int l = static_cast<int>(sorted_paths.lis_ue.size());
    const int p = static_cast<int>(sorted_paths.bs_lis.size());
    if (n_streams < 1 || n_streams > std::min(l, p))
        throw ConfigurationError("tsvd: n_streams must lie in [1, min(L, P)]");
    if (bank.l_paths() != l || bank.p_paths() != p)
        throw DimensionError("tsvd: composite bank does not match the path set");

    const double antenna = budget.tx_antenna_gain * budget.rx_antenna_gain;
    const double snr = budget.tx_power * antenna * antenna / (n_streams * budget.noise_power);

    TsvdProblem prob;
    prob.n_streams = n_streams;
    for (int i = 0; i < n_streams; ++i) {
        prob.diagonal.push_back(bank.at(i, i));
        prob.weights.push_back(snr * std::norm(sorted_paths.bs_lis[i].gain * sorted_paths.lis_ue[i].gain));
    }
    return prob;
}

double tsvd_objective(const CVec& v, const TsvdProblem& prob)
{
    double f = 0.0;
    for (int i = 0; i < prob.n_streams; ++i) {
        const cdouble d = prob.diagonal[i].dot(v); // (p^{ii})^H v = conj(v^H p^{ii})
        f -= std::log2(1.0 + prob.weights[i] * std::norm(d));
    }
    return f;
}

CVec tsvd_euclidean_gradient(const CVec& v, const TsvdProblem& prob)
{
    CVec g = CVec::Zero(v.size());
    for (int i = 0; i < prob.n_streams; ++i) {
        const CVec& p = prob.diagonal[i];
        const cdouble d = p.dot(v);
        const double a = prob.weights[i];
        const double coef = -2.0 * a / (std::numbers::ln2 * (1.0 + a * std::norm(d)));
        g += (coef * d) * p;
    }
    return g;
}

PhaseVector random_phases(Rng& rng, int m)
{
    if (m < 1)
        throw DomainError("random_phases: m must be >= 1");
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    CVec v(m);
    for (int k = 0; k < m; ++k)
        v[k] = std::polar(1.0, phase(rng));
    return PhaseVector(std::move(v));
}

PassiveDesign optimize_tsvd(const TsvdProblem& prob, PhaseVector start, const DescentConfig& cfg)
{
    if (start.size() != prob.elements())
        throw DimensionError("optimize_tsvd: start point has the wrong length");
    auto f = [&prob](const CVec& v) { return tsvd_objective(v, prob); };
    auto grad = [&prob](const CVec& v) { return tsvd_euclidean_gradient(v, prob); };
    DescentResult res = ccm_descent(f, grad, std::move(start), cfg);
    return {std::move(res.point), std::move(res.trace), res.iterations};
}

PassiveDesign optimize_tsvd(const PathSet& paths, const ArrayGeometry& geometry, const LinkBudget& budget,
                            int n_streams, const DescentConfig& cfg, Rng& rng)
{
    const PathSet sorted = sort_paths_descending(paths);
    const CompositePathBank bank = composite_path_vectors(sorted, geometry);
    const TsvdProblem prob = make_tsvd_problem(sorted, bank, n_streams, budget);
    return optimize_tsvd(prob, random_phases(rng, geometry.lis_elements()), cfg);
}

SpgmProblem make_spgm_problem(const MmWaveChannel& channel)
{
    if (channel.r.cols() != channel.g.rows())
        throw DimensionError("spgm: LIS dimension mismatch between R and G");
    SpgmProblem prob;
    const CMat rr = channel.r.adjoint() * channel.r;
    const CMat gg = channel.g * channel.g.adjoint();
    prob.q = rr.cwiseProduct(gg.transpose());
    prob.scale = prob.q.diagonal().real().sum();
    if (!(prob.scale > 0.0))
        throw NumericalError("spgm: channel has zero energy");
    return prob;
}

double spgm_path_gain(const CVec& v, const SpgmProblem& prob)
{
    const CVec w = v.conjugate();
    return w.dot(prob.q * w).real();
}

double spgm_objective(const CVec& w, const SpgmProblem& prob)
{
    return -w.dot(prob.q * w).real() / prob.scale;
}

CVec spgm_euclidean_gradient(const CVec& w, const SpgmProblem& prob)
{
    return (-2.0 / prob.scale) * (prob.q * w);
}

PassiveDesign optimize_spgm(const MmWaveChannel& channel, const DescentConfig& cfg, Rng& rng)
{
    const SpgmProblem prob = make_spgm_problem(channel);
    auto f = [&prob](const CVec& w) { return spgm_objective(w, prob); };
    auto grad = [&prob](const CVec& w) { return spgm_euclidean_gradient(w, prob); };
    DescentResult res = ccm_descent(f, grad, random_phases(rng, channel.lis_elements()), cfg);
    // The solver works on w = diag(Phi); the LIS state vector is v = conj(w).
    return {PhaseVector(res.point.values().conjugate()), std::move(res.trace), res.iterations};
}

CouplingMatrix coupling_matrix(const CVec& v, const PathSet& paths, const CompositePathBank& bank)
{
    const int l = static_cast<int>(paths.lis_ue.size());
    const int p = static_cast<int>(paths.bs_lis.size());
    if (bank.l_paths() != l || bank.p_paths() != p || bank.elements() != v.size())
        throw DimensionError("coupling_matrix: dimensions do not match");
    CouplingMatrix c{CMat(l, p), CMat(l, p)};
    for (int i = 0; i < l; ++i) {
        for (int j = 0; j < p; ++j) {
            const cdouble dij = v.dot(bank.at(i, j)); // v^H p^{ij}
            c.passive(i, j) = dij;
            c.d(i, j) = paths.lis_ue[i].gain * paths.bs_lis[j].gain * dij;
        }
    }
    return c;
}

double offdiag_ratio(const CouplingMatrix& coupling, int n_streams)
{
    const auto& d = coupling.passive;
    const int n = std::min<int>(n_streams, static_cast<int>(std::min(d.rows(), d.cols())));
    if (n < 2)
        return 0.0;
    double diag = 0.0;
    double off = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            (i == j ? diag : off) += std::abs(d(i, j));
    diag /= n;
    off /= static_cast<double>(n) * (n - 1);
    if (diag == 0.0)
        throw NumericalError("offdiag_ratio: diagonal passive gains are all zero");
    return off / diag;
}

double default_tau(const CouplingMatrix& coupling, int n_streams)
{
    const auto& d = coupling.passive;
    const int n = std::min<int>(n_streams, static_cast<int>(std::min(d.rows(), d.cols())));
    double smallest = std::abs(d(0, 0));
    for (int i = 1; i < n; ++i)
        smallest = std::min(smallest, std::abs(d(i, i)));
    return 0.1 * smallest;
}

} // namespace lisbeam
