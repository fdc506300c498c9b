#pragma once

// Shared fixtures and independent reference computations for the test suites.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "lisbeam/channel.hpp"
#include "lisbeam/manifold.hpp"
#include "lisbeam/passive_bf.hpp"

namespace testutil {

using namespace lisbeam;

inline CMat random_cmat(Rng& rng, Eigen::Index rows, Eigen::Index cols)
{
    CMat m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            m(r, c) = complex_gaussian(rng, 1.0);
    return m;
}

inline CVec random_cvec(Rng& rng, Eigen::Index n)
{
    CVec v(n);
    for (Eigen::Index k = 0; k < n; ++k)
        v[k] = complex_gaussian(rng, 1.0);
    return v;
}

inline double relative_error(double got, double want)
{
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Central differences along every real and imaginary coordinate. Under the
// 2 df/d(conj v) convention, Re g_k = df/dx_k and Im g_k = df/dy_k.
inline CVec finite_difference_gradient(const std::function<double(const CVec&)>& f, const CVec& v, double h)
{
    CVec g(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        CVec a = v, b = v;
        a[k] += h;
        b[k] -= h;
        const double re = (f(a) - f(b)) / (2.0 * h);
        a = v;
        b = v;
        a[k] += cdouble(0.0, h);
        b[k] -= cdouble(0.0, h);
        const double im = (f(a) - f(b)) / (2.0 * h);
        g[k] = {re, im};
    }
    return g;
}

inline double gradient_error(const std::function<double(const CVec&)>& f, const CVec& analytic, const CVec& v,
                             double h = 1e-6)
{
    const CVec fd = finite_difference_gradient(f, v, h);
    return (fd - analytic).norm() / std::max(analytic.norm(), 1e-300);
}

// Paths with unit-scale gains and angles from the channel model's ranges.
inline PathSet random_paths(Rng& rng, int p, int l)
{
    std::uniform_real_distribution<double> az(-kPi / 2, kPi / 2);
    std::uniform_real_distribution<double> el(-kPi / 4, kPi / 4);
    PathSet s;
    for (int i = 0; i < p; ++i)
        s.bs_lis.push_back({complex_gaussian(rng, 1.0), az(rng), az(rng), el(rng)});
    for (int i = 0; i < l; ++i)
        s.lis_ue.push_back({complex_gaussian(rng, 1.0), az(rng), el(rng), az(rng)});
    return s;
}

// Surrogate with random diagonal vectors drawn from a real path bank and O(1..100) weights.
inline TsvdProblem random_tsvd_problem(Rng& rng, int m_y, int m_z, int n_streams)
{
    ArrayGeometry geo;
    geo.lis_y = m_y;
    geo.lis_z = m_z;
    const PathSet paths = sort_paths_descending(random_paths(rng, n_streams, n_streams));
    const CompositePathBank bank = composite_path_vectors(paths, geo);
    std::uniform_real_distribution<double> w(1.0, 100.0);
    TsvdProblem prob;
    prob.n_streams = n_streams;
    const double m = geo.lis_elements();
    for (int i = 0; i < n_streams; ++i) {
        prob.diagonal.push_back(bank.at(i, i));
        prob.weights.push_back(w(rng) * m); // |v^H p| <= 1, so scale the weights into a non-trivial regime
    }
    return prob;
}

inline double naive_tsvd_objective(const CVec& v, const TsvdProblem& prob)
{
    double s = 0.0;
    for (int i = 0; i < prob.n_streams; ++i) {
        cdouble d = 0.0;
        for (Eigen::Index m = 0; m < v.size(); ++m)
            d += std::conj(v[m]) * prob.diagonal[i][m];
        s += std::log2(1.0 + prob.weights[i] * std::norm(d));
    }
    return -s;
}

// max over permutation pairs of sum_k log2(1 + e |a_{pi(k)}|^2 |b_{tau(k)}|^2), first n entries.
inline double best_pairing(const std::vector<double>& a2, const std::vector<double>& b2, int n, double e)
{
    std::vector<int> pa(a2.size()), pb(b2.size());
    std::iota(pa.begin(), pa.end(), 0);
    double best = -1.0;
    do {
        std::iota(pb.begin(), pb.end(), 0);
        do {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += std::log2(1.0 + e * a2[pa[k]] * b2[pb[k]]);
            best = std::max(best, s);
        } while (std::next_permutation(pb.begin(), pb.end()));
    } while (std::next_permutation(pa.begin(), pa.end()));
    return best;
}

} // namespace testutil
