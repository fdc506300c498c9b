#include "lisbeam/manifold.hpp"

#include <cmath>
#include <string>

namespace lisbeam {

PhaseVector::PhaseVector(CVec entries) : entries_(std::move(entries))
{
    if (entries_.size() == 0)
        throw DimensionError("PhaseVector: empty");
    const double err = modulus_error();
    if (!(err <= kUnitModulusTolerance))
        throw DomainError("PhaseVector: entries are not unit modulus (max error " + std::to_string(err) + ")");
}

PhaseVector PhaseVector::ones(int m)
{
    return PhaseVector(CVec::Ones(m));
}

PhaseVector PhaseVector::from_phases(std::span<const double> phases)
{
    CVec v(static_cast<Eigen::Index>(phases.size()));
    for (std::size_t m = 0; m < phases.size(); ++m)
        v[static_cast<Eigen::Index>(m)] = std::polar(1.0, phases[m]);
    return PhaseVector(std::move(v));
}

double PhaseVector::modulus_error() const
{
    double err = 0.0;
    for (Eigen::Index m = 0; m < entries_.size(); ++m)
        err = std::max(err, std::abs(std::abs(entries_[m]) - 1.0));
    return err;
}

void DescentConfig::validate() const
{
    if (!(epsilon > 0.0))
        throw ConfigError("descent: epsilon must be positive");
    if (max_iters < 1)
        throw ConfigError("descent: max_iters must be >= 1");
    if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0))
        throw ConfigError("descent: armijo_shrink must lie in (0, 1)");
    if (!(armijo_slope > 0.0 && armijo_slope < 1.0))
        throw ConfigError("descent: armijo_slope must lie in (0, 1)");
    if (!(initial_step > 0.0))
        throw ConfigError("descent: initial_step must be positive");
    if (max_shrinks < 1)
        throw ConfigError("descent: max_shrinks must be >= 1");
}

CVec tangent_project(const PhaseVector& v, const CVec& g)
{
    const CVec& x = v.values();
    if (g.size() != x.size())
        throw DimensionError("tangent_project: length mismatch");
    CVec z(x.size());
    for (Eigen::Index m = 0; m < x.size(); ++m)
        z[m] = g[m] - std::real(g[m] * std::conj(x[m])) * x[m];
    return z;
}

PhaseVector retract(const CVec& v_bar)
{
    CVec out(v_bar.size());
    for (Eigen::Index m = 0; m < v_bar.size(); ++m) {
        const double mag = std::abs(v_bar[m]);
        if (mag == 0.0)
            throw DegenerateRetraction("retract: zero entry at index " + std::to_string(m));
        if (!std::isfinite(mag))
            throw NumericalError("retract: non-finite entry at index " + std::to_string(m));
        out[m] = v_bar[m] / mag;
    }
    return PhaseVector(std::move(out));
}

double armijo_step(const Objective& f, const PhaseVector& v, double f_at_v, const CVec& riem_grad,
                   const DescentConfig& cfg, double initial_step)
{
    const double grad_norm2 = riem_grad.squaredNorm();
    double step = initial_step;
    for (int t = 0; t <= cfg.max_shrinks; ++t) {
        const PhaseVector trial = retract(v.values() - step * riem_grad);
        const double f_trial = f(trial.values());
        if (std::isfinite(f_trial) && f_trial <= f_at_v - cfg.armijo_slope * step * grad_norm2)
            return step;
        step *= cfg.armijo_shrink;
    }
    throw LineSearchFailure("armijo_step: no sufficient decrease after " + std::to_string(cfg.max_shrinks) +
                            " shrinks");
}

DescentResult ccm_descent(const Objective& f, const EuclideanGradient& grad_f, PhaseVector v0,
                          const DescentConfig& cfg)
{
    cfg.validate();

    DescentResult result{std::move(v0), {}, 0, false};
    PhaseVector& v = result.point;

    double f_v = f(v.values());
    if (!std::isfinite(f_v))
        throw NumericalError("ccm_descent: non-finite objective at the starting point");
    result.trace.push_back(f_v);

    CVec prev_point;
    CVec prev_grad;
    for (int k = 0; k < cfg.max_iters; ++k) {
        const CVec egrad = grad_f(v.values());
        if (egrad.size() != v.size())
            throw DimensionError("ccm_descent: gradient length mismatch");
        const CVec rgrad = tangent_project(v, egrad);
        const double gnorm = rgrad.norm();
        if (!std::isfinite(gnorm))
            throw NumericalError("ccm_descent: non-finite gradient");

        double guess = gnorm > 0.0 ? cfg.initial_step / gnorm : cfg.initial_step;
        if (k > 0 && gnorm > 0.0) {
            // Barzilai-Borwein guess; the previous gradient is moved to the
            // current tangent space by projection.
            const CVec s = tangent_project(v, v.values() - prev_point);
            const CVec y = rgrad - tangent_project(v, prev_grad);
            const double sy = s.dot(y).real();
            if (sy > 0.0)
                guess = s.squaredNorm() / sy;
        }

        double step = 0.0;
        try {
            step = armijo_step(f, v, f_v, rgrad, cfg, guess);
        } catch (const LineSearchFailure&) {
            result.line_search_stalled = true;
            break;
        }

        PhaseVector next = retract(v.values() - step * rgrad);
        const double f_next = f(next.values());
        if (!std::isfinite(f_next))
            throw NumericalError("ccm_descent: non-finite objective");

        prev_point = v.values();
        prev_grad = rgrad;
        const double gap = std::abs(f_next - f_v);
        v = std::move(next);
        f_v = f_next;
        result.trace.push_back(f_v);
        ++result.iterations;
        if (gap < cfg.epsilon)
            break;
    }
    return result;
}

} // namespace lisbeam
