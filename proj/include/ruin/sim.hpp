#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ruin/rng.hpp"
#include "ruin/schedule.hpp"

namespace ruin {

// Event-time skeleton of one surplus path. Between claim arrivals the
// surplus only grows, so the values at arrival times are the local minima
// and determine ruin.
struct Trajectory {
    std::vector<double> event_times;        // T_n = theta_1 + ... + theta_n
    std::vector<double> surplus;            // U(T_n) = x + c T_n - sum Z_i
    bool ruined = false;
    std::optional<std::size_t> ruin_index;  // first n with U(T_n) < 0 (1-based)
    std::optional<double> ruin_time;        // tau = T_n at that n
};

// Draws (theta_i, Z_i) for i = 1..horizon_n, theta before Z at every step;
// stops at the first ruin event.
Trajectory simulate_path(const ModelConfig& m, double x, std::int64_t horizon_n,
                         RngStream stream);

struct RuinEstimate {
    double x = 0.0;
    std::int64_t horizon_n = 0;
    std::int64_t trials = 0;
    std::int64_t hits = 0;
    double psi_hat = 0.0;
    double ci_low = 0.0;   // Wilson 95%
    double ci_high = 0.0;
    std::uint64_t seed = 0;
    int worker_count = 1;
    // Fraction of non-ruined paths whose terminal S_N ends within
    // 30/gamma of the barrier; values well above 0 flag an insufficient
    // horizon.
    double near_horizon_frac = 0.0;
};

// Common-random-numbers estimator: trial t owns stream_id t, one path's
// running maximum is compared against every x in the grid, and hit counts
// merge by summation — so the result is identical for any worker count
// and psi_hat is exactly nonincreasing along the grid.
std::vector<RuinEstimate> estimate_ruin(const ModelConfig& m,
                                        const std::vector<double>& x_grid,
                                        std::int64_t horizon_n, std::int64_t trials,
                                        std::uint64_t seed, int workers);

// Plain-loop reference the parallel driver must match bit for bit.
std::vector<RuinEstimate> estimate_ruin_serial(const ModelConfig& m,
                                               const std::vector<double>& x_grid,
                                               std::int64_t horizon_n, std::int64_t trials,
                                               std::uint64_t seed);

// 95% Wilson score interval; well behaved at hits = 0.
std::pair<double, double> wilson_interval(std::int64_t hits, std::int64_t trials);

}  // namespace ruin
