#include "lisbeam/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "lisbeam/metrics.hpp"
#include "lisbeam/passive_bf.hpp"
#include "lisbeam/transceiver.hpp"

namespace lisbeam {

const char* to_string(PrecodingMode m)
{
    return m == PrecodingMode::digital ? "digital" : "hybrid";
}

namespace {

// Independent streams inside one trial.
enum Stream : std::uint64_t {
    channel_stream = 0,
    perturbation_stream = 1,
    design_stream = 2, // + method index
    hybrid_tx_stream = 5,
    hybrid_rx_stream = 6,
};

constexpr Method kMethodOrder[] = {Method::tsvd, Method::spgm, Method::random};

int method_index(Method m)
{
    return static_cast<int>(m);
}

bool wants(Precoding p, PrecodingMode mode)
{
    return p == Precoding::both || (p == Precoding::digital) == (mode == PrecodingMode::digital);
}

} // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, int trial)
{
    return mix_seed(master_seed, static_cast<std::uint64_t>(trial));
}

std::vector<MethodOutcome> run_trial(const ExperimentConfig& point, std::uint64_t seed)
{
    const LinkBudget budget = point.link_budget();
    const ArrayGeometry& geometry = point.geometry;
    const int ns = point.n_streams;

    Rng channel_rng(mix_seed(seed, channel_stream));
    const PathSet truth =
        sort_paths_descending(sample_paths(channel_rng, geometry, budget, point.distances(), point.p_paths,
                                           point.l_paths));
    Rng perturb_rng(mix_seed(seed, perturbation_stream));
    const PathSet estimate = perturb_angles(truth, units::deg_to_rad(point.angle_error_deg), perturb_rng);

    const MmWaveChannel true_channel = assemble_channels(truth, geometry, budget);
    const MmWaveChannel est_channel = assemble_channels(estimate, geometry, budget);
    const CompositePathBank true_bank = composite_path_vectors(truth, geometry);

    std::vector<MethodOutcome> out;
    for (Method method : kMethodOrder) {
        if (std::find(point.methods.begin(), point.methods.end(), method) == point.methods.end())
            continue;
        const auto mi = static_cast<std::uint64_t>(method_index(method));
        MethodOutcome o;
        o.method = method;
        try {
            const auto start = std::chrono::steady_clock::now();
            Rng design_rng(mix_seed(seed, design_stream, mi));
            CVec v;
            switch (method) {
            case Method::tsvd: {
                PassiveDesign d = optimize_tsvd(estimate, geometry, budget, ns, point.descent, design_rng);
                v = d.v.values();
                o.iterations = d.iterations;
                break;
            }
            case Method::spgm: {
                PassiveDesign d = optimize_spgm(est_channel, point.descent, design_rng);
                v = d.v.values();
                o.iterations = d.iterations;
                break;
            }
            case Method::random:
                v = random_phases(design_rng, geometry.lis_elements()).values();
                break;
            }

            const TruncatedSvd svd = truncated_svd(effective_channel(est_channel, v), ns);
            const CMat f_opt = point.power_allocation == PowerAllocationMode::water_filling
                                   ? digital_precoder(svd, water_filling(svd.sigma1, budget.tx_power,
                                                                         budget.noise_power))
                                   : digital_precoder_equal_power(svd, budget.tx_power);
            const CMat w_opt = digital_combiner(svd);

            std::optional<CMat> f_hyb;
            std::optional<CMat> w_hyb;
            if (wants(point.precoding, PrecodingMode::hybrid)) {
                Rng tx_rng(mix_seed(seed, hybrid_tx_stream, mi));
                Rng rx_rng(mix_seed(seed, hybrid_rx_stream, mi));
                f_hyb = hybrid_precoder(f_opt, point.n_rf_tx, budget.tx_power, point.hybrid, tx_rng).product();
                w_hyb = hybrid_combiner(w_opt, point.n_rf_rx, point.hybrid, rx_rng).product();
            }
            o.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

            const CMat h_true = effective_channel(true_channel, v);
            o.se_digital = spectral_efficiency(h_true, f_opt, w_opt, budget.noise_power);
            if (f_hyb)
                o.se_hybrid = spectral_efficiency(h_true, *f_hyb, *w_hyb, budget.noise_power);
            o.cond = truncated_condition_number(h_true, ns);
            o.offdiag = offdiag_ratio(coupling_matrix(v, truth, true_bank), ns);
        } catch (const NumericalError& e) {
            o.failed = true;
            o.error = e.what();
        }
        out.push_back(std::move(o));
    }
    return out;
}

namespace {

struct Accumulator {
    std::vector<double> se;
    double cond = 0.0;
    double offdiag = 0.0;
    double iters = 0.0;
    double wall_ms = 0.0;
    int errors = 0;
};

SweepRow summarize(double sweep_value, Method method, PrecodingMode mode, const Accumulator& acc)
{
    SweepRow row;
    row.sweep_value = sweep_value;
    row.method = method;
    row.precoding = mode;
    row.errors = acc.errors;
    const auto n = static_cast<double>(acc.se.size());
    if (acc.se.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.mean_se = row.std_se = row.mean_cond = row.mean_offdiag = row.mean_iters = row.wall_ms = nan;
        return row;
    }
    double sum = 0.0;
    for (double x : acc.se)
        sum += x;
    row.mean_se = sum / n;
    double ss = 0.0;
    for (double x : acc.se)
        ss += (x - row.mean_se) * (x - row.mean_se);
    row.std_se = acc.se.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    row.mean_cond = acc.cond / n;
    row.mean_offdiag = acc.offdiag / n;
    row.mean_iters = acc.iters / n;
    row.wall_ms = acc.wall_ms / n;
    return row;
}

} // namespace

SweepResult run_sweep(const ExperimentConfig& cfg, int parallel)
{
    cfg.validate();
    if (parallel < 1)
        throw ConfigError("run_sweep: parallel must be >= 1");

    const std::size_t n_points = cfg.sweep_values.size();
    const std::size_t n_trials = static_cast<std::size_t>(cfg.trials);
    std::vector<ExperimentConfig> points;
    for (double value : cfg.sweep_values)
        points.push_back(cfg.at_sweep_value(value));

    // Work unit (point, trial); outcomes are stored by index so the order of completion is irrelevant.
    std::vector<std::vector<MethodOutcome>> outcomes(n_points * n_trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t unit = next.fetch_add(1);
            if (unit >= outcomes.size())
                return;
            try {
                const std::size_t s = unit / n_trials;
                const int t = static_cast<int>(unit % n_trials);
                outcomes[unit] = run_trial(points[s], trial_seed(cfg.seed, t));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(outcomes.size());
            }
        }
    };

    const int threads = static_cast<int>(std::min<std::size_t>(parallel, outcomes.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < threads; ++k)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    SweepResult result;
    for (std::size_t s = 0; s < n_points; ++s) {
        for (Method method : kMethodOrder) {
            if (std::find(cfg.methods.begin(), cfg.methods.end(), method) == cfg.methods.end())
                continue;
            for (PrecodingMode mode : {PrecodingMode::digital, PrecodingMode::hybrid}) {
                if (!wants(cfg.precoding, mode))
                    continue;
                Accumulator acc;
                for (std::size_t t = 0; t < n_trials; ++t) {
                    for (const MethodOutcome& o : outcomes[s * n_trials + t]) {
                        if (o.method != method)
                            continue;
                        if (o.failed) {
                            ++acc.errors;
                            continue;
                        }
                        acc.se.push_back(mode == PrecodingMode::digital ? o.se_digital : *o.se_hybrid);
                        acc.cond += o.cond;
                        acc.offdiag += o.offdiag;
                        acc.iters += o.iterations;
                        acc.wall_ms += o.wall_ms;
                    }
                }
                result.rows.push_back(summarize(cfg.sweep_values[s], method, mode, acc));
            }
        }
    }
    return result;
}

} // namespace lisbeam
