// Timings for the trial-parallel estimator against the plain serial
// reference, checking that the two agree bit for bit while they race.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ruin/sim.hpp"

using namespace ruin;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const std::int64_t trials = argc > 1 ? std::atoll(argv[1]) : 100000;
    const std::int64_t horizon = argc > 2 ? std::atoll(argv[2]) : 2000;
    const std::uint64_t seed = 42;

    ModelConfig m;
    m.premium = 2.0;
    m.gamma = 0.5;
    m.schedule.cycle.push_back(
        {DistributionSpec::exponential(1.0), DistributionSpec::exponential(1.0)});
    const std::vector<double> x_grid = {0.0, 1.0, 2.0, 5.0};

    int hw = 1;
#ifdef _OPENMP
    hw = omp_get_max_threads();
#endif

    std::printf("trials=%lld horizon=%lld grid=%zu\n", static_cast<long long>(trials),
                static_cast<long long>(horizon), x_grid.size());

    auto t0 = std::chrono::steady_clock::now();
    const auto serial = estimate_ruin_serial(m, x_grid, horizon, trials, seed);
    const double t_serial = seconds_since(t0);
    std::printf("%-24s %8.3f s\n", "serial reference", t_serial);

    for (int workers : {1, 2, hw}) {
        t0 = std::chrono::steady_clock::now();
        const auto par = estimate_ruin(m, x_grid, horizon, trials, seed, workers);
        const double t_par = seconds_since(t0);
        bool same = true;
        for (std::size_t j = 0; j < x_grid.size(); ++j)
            same = same && par[j].hits == serial[j].hits;
        std::printf("openmp workers=%-9d %8.3f s  speedup %.2fx  hits %s\n", workers, t_par,
                    t_serial / t_par, same ? "identical" : "MISMATCH");
        if (!same) return 1;
    }

    std::printf("psi_hat:");
    for (const auto& e : serial) std::printf("  %.6f", e.psi_hat);
    std::printf("\n");
    return 0;
}
