#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "ruin/oracle.hpp"
#include "ruin/sim.hpp"

using namespace ruin;

TEST_CASE("simulate_path hand-checked cases") {
    // zero claims: the surplus never drops
    ModelConfig zero;
    zero.premium = 1.0;
    zero.gamma = 1.0;
    zero.schedule.cycle.push_back(
        {DistributionSpec::deterministic(0.0), DistributionSpec::exponential(1.0)});
    for (double x : {0.0, 1.0}) {
        const auto tr = simulate_path(zero, x, 1000, RngStream(1, 0));
        CHECK(!tr.ruined);
        CHECK(tr.event_times.size() == 1000);
    }

    // Z = 2, theta = 1, c = 1, x = 0: S_1 = 1 > 0, ruin at the first event
    ModelConfig det;
    det.premium = 1.0;
    det.gamma = 1.0;
    det.schedule.cycle.push_back(
        {DistributionSpec::deterministic(2.0), DistributionSpec::deterministic(1.0)});
    const auto tr = simulate_path(det, 0.0, 100, RngStream(1, 0));
    CHECK(tr.ruined);
    CHECK(*tr.ruin_index == 1);
    CHECK(*tr.ruin_time == 1.0);
    REQUIRE(tr.event_times.size() == 1);
    CHECK(tr.surplus[0] == doctest::Approx(-1.0));  // x + c*1 - 2

    // identical streams give identical trajectories
    const auto m = testm::two_cycle();
    const auto a = simulate_path(m, 2.0, 500, RngStream(9, 3));
    const auto b = simulate_path(m, 2.0, 500, RngStream(9, 3));
    CHECK(a.event_times == b.event_times);
    CHECK(a.surplus == b.surplus);
    CHECK(a.ruined == b.ruined);
}

TEST_CASE("trajectory surplus is consistent with event times") {
    const auto m = testm::homogeneous_exp();
    const auto tr = simulate_path(m, 5.0, 200, RngStream(4, 11));
    REQUIRE(!tr.event_times.empty());
    double prev_t = 0.0;
    for (std::size_t n = 0; n < tr.event_times.size(); ++n) {
        CHECK(tr.event_times[n] >= prev_t);  // nondecreasing
        prev_t = tr.event_times[n];
    }
    if (tr.ruined) {
        CHECK(tr.surplus.back() < 0.0);
        CHECK(*tr.ruin_index == tr.event_times.size());
        CHECK(*tr.ruin_time == tr.event_times.back());
    } else {
        for (double u : tr.surplus) CHECK(u >= 0.0);
    }
}

TEST_CASE("wilson interval frozen values") {
    auto [lo0, hi0] = wilson_interval(0, 100);
    CHECK(lo0 == 0.0);
    CHECK(hi0 == doctest::Approx(0.036993498206985684).epsilon(1e-12));

    auto [lo8, hi8] = wilson_interval(8, 10);
    CHECK(lo8 == doctest::Approx(0.4901624715366417).epsilon(1e-12));
    CHECK(hi8 == doctest::Approx(0.9433178485456247).epsilon(1e-12));

    auto [lo50, hi50] = wilson_interval(50, 200);
    CHECK(lo50 == doctest::Approx(0.19508168006817497).epsilon(1e-12));
    CHECK(hi50 == doctest::Approx(0.31434098312045831).epsilon(1e-12));

    auto [lon, hin] = wilson_interval(10, 10);
    CHECK(lon == doctest::Approx(0.7224672001371107).epsilon(1e-12));
    CHECK(hin == 1.0);
}

TEST_CASE("estimator is invariant to worker count and matches the serial reference") {
    const auto m = testm::two_cycle();
    const std::vector<double> grid = {0.0, 0.5, 1.0, 2.0};
    const auto serial = estimate_ruin_serial(m, grid, 400, 20000, 11);
    for (int workers : {1, 2, 8}) {
        const auto par = estimate_ruin(m, grid, 400, 20000, 11, workers);
        REQUIRE(par.size() == serial.size());
        for (std::size_t j = 0; j < par.size(); ++j) {
            CHECK(par[j].hits == serial[j].hits);
            CHECK(par[j].psi_hat == serial[j].psi_hat);
            CHECK(par[j].ci_low == serial[j].ci_low);
            CHECK(par[j].ci_high == serial[j].ci_high);
            CHECK(par[j].near_horizon_frac == serial[j].near_horizon_frac);
            CHECK(par[j].worker_count == workers);
        }
    }
}

TEST_CASE("common random numbers make psi_hat exactly monotone in x") {
    const auto m = testm::homogeneous_exp();
    const std::vector<double> grid = {0.0, 0.5, 1.0, 2.0, 3.5, 5.0};
    const auto rows = estimate_ruin(m, grid, 500, 30000, 3, 2);
    for (std::size_t j = 1; j < rows.size(); ++j) CHECK(rows[j].psi_hat <= rows[j - 1].psi_hat);

    // per-x results do not depend on grid order
    const auto shuffled = estimate_ruin(m, {2.0, 0.0, 3.5}, 500, 30000, 3, 2);
    CHECK(shuffled[0].hits == rows[3].hits);
    CHECK(shuffled[1].hits == rows[0].hits);
    CHECK(shuffled[2].hits == rows[4].hits);
}

TEST_CASE("psi_hat is nondecreasing in the horizon on identical streams") {
    const auto m = testm::two_cycle();
    const std::vector<double> grid = {0.0, 1.0, 2.0};
    const auto short_run = estimate_ruin(m, grid, 200, 20000, 5, 2);
    const auto long_run = estimate_ruin(m, grid, 1000, 20000, 5, 2);
    for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(short_run[j].hits <= long_run[j].hits);
}

TEST_CASE("deep barrier yields zero hits with a tight upper limit") {
    const auto m = testm::homogeneous_exp();
    const auto rows = estimate_ruin(m, {1e6}, 1000, 100000, 1, 2);
    CHECK(rows[0].hits == 0);
    CHECK(rows[0].psi_hat == 0.0);
    CHECK(rows[0].ci_high < 1e-4);
}

TEST_CASE("estimates agree with the closed form at moderate size") {
    const auto m = testm::homogeneous_exp();
    const std::vector<double> grid = {0.0, 1.0};
    const auto rows = estimate_ruin(m, grid, 2000, 100000, 1, 2);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double psi = closed_form_cramer_lundberg(1.0, 1.0, 2.0, grid[j]);
        CHECK(rows[j].ci_low <= psi);
        CHECK(psi <= rows[j].ci_high);
    }
}

TEST_CASE("near-horizon diagnostic flags an insufficient horizon") {
    // barely-negative drift and a short horizon: many survivors end close
    // to the barrier
    ModelConfig weak;
    weak.premium = 1.02;
    weak.gamma = 0.5;
    weak.schedule.cycle.push_back(
        {DistributionSpec::exponential(1.0), DistributionSpec::exponential(1.0)});
    const auto flagged = estimate_ruin(weak, {5.0}, 50, 2000, 2, 1);
    CHECK(flagged[0].near_horizon_frac > 0.01);

    // healthy drift and a long horizon: survivors end far below the barrier
    const auto healthy = estimate_ruin(testm::homogeneous_exp(), {5.0}, 2000, 2000, 2, 1);
    CHECK(healthy[0].near_horizon_frac == 0.0);
}

TEST_CASE("argument validation") {
    const auto m = testm::homogeneous_exp();
    CHECK_THROWS_AS(estimate_ruin(m, {}, 100, 100, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_ruin(m, {-1.0}, 100, 100, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_ruin(m, {1.0}, 0, 100, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_ruin(m, {1.0}, 100, 0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_ruin(m, {1.0}, 100, 100, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate_path(m, -1.0, 100, RngStream(1, 0)), std::invalid_argument);
}
