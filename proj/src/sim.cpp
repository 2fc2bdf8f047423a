#include "ruin/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ruin {

namespace {

// Flattened per-slot sampler. Exponential draws take the fast path
// through the batched log below; everything else routes through the
// shared quantile.
struct DrawLaw {
    bool is_exp = false;
    double inv_rate = 0.0;
    const DistributionSpec* spec = nullptr;
};

struct UnrolledModel {
    std::vector<DrawLaw> theta;
    std::vector<DrawLaw> z;
    std::size_t prefix_len = 0;
    double premium = 0.0;
};

DrawLaw flatten(const DistributionSpec& d) {
    DrawLaw l;
    l.spec = &d;
    if (d.kind() == DistKind::Exponential) {
        l.is_exp = true;
        l.inv_rate = 1.0 / d.rate();
    }
    return l;
}

UnrolledModel unroll(const ModelConfig& m) {
    UnrolledModel um;
    um.premium = m.premium;
    um.prefix_len = m.schedule.prefix.size();
    for (const StepLaw* law : m.schedule.all_laws()) {
        um.theta.push_back(flatten(law->inter));
        um.z.push_back(flatten(law->claim));
    }
    return um;
}

inline double draw_value(const DrawLaw& l, double u, double neg_log_1mu) {
    if (l.is_exp) return neg_log_1mu * l.inv_rate;
    return quantile(*l.spec, u);
}

struct TrialOutcome {
    double running_max = 0.0;  // max of S_n over n >= 1 (0 if the walk never goes up)
    double terminal = 0.0;     // S at the last simulated step
    bool early_exit = false;   // stopped once the max cleared the whole grid
};

// One path of S_n = sum of (Z_i - c theta_i), theta drawn before Z at
// every step. Steps are processed in blocks so the exponential-quantile
// logs pipeline well; the step -> counter mapping is fixed, so results
// are independent of the block size.
TrialOutcome run_trial(const UnrolledModel& um, double x_max, std::int64_t horizon,
                       RngStream stream) {
    constexpr int kBlock = 128;
    double u[2 * kBlock];
    double neg_log[2 * kBlock];

    TrialOutcome out;
    double s = 0.0;
    double peak = 0.0;
    const std::size_t slots = um.theta.size();
    std::size_t slot = 0;

    std::int64_t done = 0;
    while (done < horizon) {
        const int count = static_cast<int>(std::min<std::int64_t>(kBlock, horizon - done));
        for (int i = 0; i < 2 * count; ++i) u[i] = stream.next_unit();
#pragma omp simd
        for (int i = 0; i < 2 * count; ++i) neg_log[i] = -std::log(1.0 - u[i]);

        for (int i = 0; i < count; ++i) {
            const double theta = draw_value(um.theta[slot], u[2 * i], neg_log[2 * i]);
            const double z = draw_value(um.z[slot], u[2 * i + 1], neg_log[2 * i + 1]);
            s += z - um.premium * theta;
            if (s > peak) {
                peak = s;
                if (peak > x_max) {  // every grid point is hit; nothing left to learn
                    out.running_max = peak;
                    out.terminal = s;
                    out.early_exit = true;
                    return out;
                }
            }
            if (++slot == slots) slot = um.prefix_len;
        }
        done += count;
    }
    out.running_max = peak;
    out.terminal = s;
    return out;
}

std::vector<RuinEstimate> build_estimates(const ModelConfig& m,
                                          const std::vector<double>& x_grid,
                                          std::int64_t horizon_n, std::int64_t trials,
                                          std::uint64_t seed, int workers,
                                          const std::vector<std::int64_t>& hits,
                                          const std::vector<std::int64_t>& near) {
    std::vector<RuinEstimate> out(x_grid.size());
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        RuinEstimate& e = out[j];
        e.x = x_grid[j];
        e.horizon_n = horizon_n;
        e.trials = trials;
        e.hits = hits[j];
        e.psi_hat = static_cast<double>(hits[j]) / static_cast<double>(trials);
        std::tie(e.ci_low, e.ci_high) = wilson_interval(hits[j], trials);
        e.seed = seed;
        e.worker_count = workers;
        const std::int64_t misses = trials - hits[j];
        e.near_horizon_frac =
            misses > 0 ? static_cast<double>(near[j]) / static_cast<double>(misses) : 0.0;
    }
    return out;
}

void check_args(const ModelConfig& m, const std::vector<double>& x_grid,
                std::int64_t horizon_n, std::int64_t trials) {
    validate(m);
    if (x_grid.empty()) throw std::invalid_argument("estimate_ruin: x_grid must be nonempty");
    for (double x : x_grid)
        if (!(std::isfinite(x) && x >= 0.0))
            throw std::invalid_argument("estimate_ruin: x values must be finite and >= 0");
    if (horizon_n < 1) throw std::invalid_argument("estimate_ruin: horizon_n must be >= 1");
    if (trials < 1) throw std::invalid_argument("estimate_ruin: trials must be >= 1");
}

}  // namespace

Trajectory simulate_path(const ModelConfig& m, double x, std::int64_t horizon_n,
                         RngStream stream) {
    validate(m);
    if (!(x >= 0.0)) throw std::invalid_argument("simulate_path: x must be >= 0");
    if (horizon_n < 1) throw std::invalid_argument("simulate_path: horizon_n must be >= 1");

    Trajectory tr;
    double t = 0.0;
    double s = 0.0;
    for (std::int64_t n = 1; n <= horizon_n; ++n) {
        const StepLaw& law = m.schedule.law_at(static_cast<std::size_t>(n));
        const double theta = sample(law.inter, stream);  // theta before Z, always
        const double z = sample(law.claim, stream);
        t += theta;
        s += z - m.premium * theta;
        tr.event_times.push_back(t);
        tr.surplus.push_back(x - s);
        if (s > x) {  // U(T_n) < 0
            tr.ruined = true;
            tr.ruin_index = static_cast<std::size_t>(n);
            tr.ruin_time = t;
            break;
        }
    }
    return tr;
}

std::vector<RuinEstimate> estimate_ruin(const ModelConfig& m, const std::vector<double>& x_grid,
                                        std::int64_t horizon_n, std::int64_t trials,
                                        std::uint64_t seed, int workers) {
    check_args(m, x_grid, horizon_n, trials);
    if (workers < 1) throw std::invalid_argument("estimate_ruin: workers must be >= 1");

    const UnrolledModel um = unroll(m);
    const double x_max = *std::max_element(x_grid.begin(), x_grid.end());
    const double buffer = 30.0 / m.gamma;
    const std::size_t grid = x_grid.size();

    std::vector<std::int64_t> hits(grid, 0), near(grid, 0);

#pragma omp parallel num_threads(workers)
    {
        std::vector<std::int64_t> local_hits(grid, 0), local_near(grid, 0);
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < trials; ++t) {
            const TrialOutcome o = run_trial(um, x_max, horizon_n, RngStream(seed, t));
            for (std::size_t j = 0; j < grid; ++j) {
                if (o.running_max > x_grid[j])
                    ++local_hits[j];
                else if (o.terminal > x_grid[j] - buffer)
                    ++local_near[j];
            }
        }
        // integer sums: any merge order gives the same totals
#pragma omp critical
        for (std::size_t j = 0; j < grid; ++j) {
            hits[j] += local_hits[j];
            near[j] += local_near[j];
        }
    }

    return build_estimates(m, x_grid, horizon_n, trials, seed, workers, hits, near);
}

std::vector<RuinEstimate> estimate_ruin_serial(const ModelConfig& m,
                                               const std::vector<double>& x_grid,
                                               std::int64_t horizon_n, std::int64_t trials,
                                               std::uint64_t seed) {
    check_args(m, x_grid, horizon_n, trials);

    const UnrolledModel um = unroll(m);
    const double x_max = *std::max_element(x_grid.begin(), x_grid.end());
    const double buffer = 30.0 / m.gamma;
    const std::size_t grid = x_grid.size();

    std::vector<std::int64_t> hits(grid, 0), near(grid, 0);
    for (std::int64_t t = 0; t < trials; ++t) {
        const TrialOutcome o = run_trial(um, x_max, horizon_n, RngStream(seed, t));
        for (std::size_t j = 0; j < grid; ++j) {
            if (o.running_max > x_grid[j])
                ++hits[j];
            else if (o.terminal > x_grid[j] - buffer)
                ++near[j];
        }
    }

    return build_estimates(m, x_grid, horizon_n, trials, seed, 1, hits, near);
}

std::pair<double, double> wilson_interval(std::int64_t hits, std::int64_t trials) {
    if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
    if (hits < 0 || hits > trials) throw std::invalid_argument("wilson_interval: bad hit count");
    constexpr double z = 1.959963984540054;  // two-sided 95%
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    const double z2n = z * z / n;
    const double denom = 1.0 + z2n;
    const double center = (p + 0.5 * z2n) / denom;
    const double half = (z / denom) * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n);
    // the endpoints are exact at the extremes; don't let cancellation leak
    const double lo = hits == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = hits == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

}  // namespace ruin
