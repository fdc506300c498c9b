#pragma once

// First-order Riemannian optimization on the complex circle manifold
//   CCM = { u in C^M : |u_m| = 1 for all m }.
//
// Gradient convention: for a real objective f(v), the Euclidean gradient is
// 2 df/d(conj v), i.e. the gradient under the real inner product Re{x^H y}.
// The engine minimizes; maximization problems pass a negated objective.

#include <functional>
#include <span>
#include <vector>

#include "lisbeam/types.hpp"

namespace lisbeam {

inline constexpr double kUnitModulusTolerance = 1e-12;

// Point on the CCM. Construction checks the unit-modulus invariant.
class PhaseVector {
public:
    explicit PhaseVector(CVec entries);

    static PhaseVector ones(int m);
    static PhaseVector from_phases(std::span<const double> phases);

    const CVec& values() const { return entries_; }
    Eigen::Index size() const { return entries_.size(); }
    cdouble operator[](Eigen::Index m) const { return entries_[m]; }

    // Largest | |v_m| - 1 | over the entries.
    double modulus_error() const;

private:
    CVec entries_;
};

// Zero entry encountered while normalizing.
class DegenerateRetraction : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// No acceptable Armijo step within the shrink budget.
class LineSearchFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct DescentConfig {
    double epsilon = 1e-4;      // stop once |f(v^{k+1}) - f(v^k)| < epsilon
    int max_iters = 500;
    double armijo_shrink = 0.5;
    double armijo_slope = 1e-4;
    double initial_step = 1.0;  // first trial step, as a manifold displacement length
    int max_shrinks = 50;

    void validate() const;
};

using Objective = std::function<double(const CVec&)>;
using EuclideanGradient = std::function<CVec(const CVec&)>;

struct DescentResult {
    PhaseVector point;
    std::vector<double> trace; // f(v^0), f(v^1), ...
    int iterations = 0;
    bool line_search_stalled = false;
};

// g - Re{g .* conj(v)} .* v
CVec tangent_project(const PhaseVector& v, const CVec& g);

// Entrywise normalization back onto the manifold.
PhaseVector retract(const CVec& v_bar);

// Backtracking from `initial_step`: the largest step initial_step * shrink^t with
//   f(R(v - step * riem_grad)) <= f(v) - slope * step * ||riem_grad||^2.
// `f_at_v` must equal f(v.values()). Throws LineSearchFailure after cfg.max_shrinks.
double armijo_step(const Objective& f, const PhaseVector& v, double f_at_v, const CVec& riem_grad,
                   const DescentConfig& cfg, double initial_step);

inline double armijo_step(const Objective& f, const PhaseVector& v, const CVec& riem_grad, const DescentConfig& cfg)
{
    return armijo_step(f, v, f(v.values()), riem_grad, cfg, cfg.initial_step);
}

// Riemannian steepest descent with Armijo backtracking and retraction.
//
// The first trial step moves a manifold distance of cfg.initial_step; later
// iterations start from the Barzilai-Borwein step of the last two iterates.
// Stops on an objective gap below cfg.epsilon, on cfg.max_iters, or on a
// stalled line search (reported, not thrown). The trace is non-increasing.
DescentResult ccm_descent(const Objective& f, const EuclideanGradient& grad_f, PhaseVector v0,
                          const DescentConfig& cfg);

} // namespace lisbeam
