#include "ruin/lundberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ruin/errors.hpp"

namespace ruin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
    const double m = std::max(a, b);
    if (m == -kInf) return -kInf;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

std::optional<double> sup_eta_mgf(const ModelConfig& m, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("sup_eta_mgf: delta must be positive");
    double best = 0.0;
    for (const StepLaw* law : m.schedule.all_laws()) {
        auto claim_part = mgf(law->claim, delta);
        if (!claim_part) return std::nullopt;
        // by independence E e^{delta(Z - c theta)} factors; the theta part
        // always converges at a negative argument
        const double inter_part = *mgf(law->inter, -m.premium * delta);
        best = std::max(best, *claim_part * inter_part);
    }
    return best;
}

double c5_of_delta(double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("c5_of_delta: delta must be positive");
    // exp(delta v/2)/v^2 is minimized at v = 4/delta with value e^2 delta^2/16;
    // when that minimum is >= 1 (delta >= 4/e) the inequality holds everywhere
    const double min_val = std::exp(2.0) * delta * delta / 16.0;
    if (min_val >= 1.0) return 0.0;

    auto f = [delta](double v) { return 0.5 * delta * v - 2.0 * std::log(v); };
    double lo = 4.0 / delta;  // f < 0 at the minimum
    double hi = lo;
    do {
        hi *= 2.0;
    } while (f(hi) < 0.0);
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    // return the bracket end where the inequality already holds, so the
    // certificate e^{delta v/2} >= v^2 is true at c5 itself
    return hi;
}

double neg_part_mean_bound(const ModelConfig& m) {
    double worst = 0.0;
    for (const StepLaw* law : m.schedule.all_laws())
        worst = std::max(worst, mean(law->inter));
    return m.premium * worst;
}

double trunc_surrogate(const ModelConfig& m, double u) {
    if (!(u > 0.0)) throw std::invalid_argument("trunc_surrogate: u must be positive");
    const double c = m.premium;
    double worst = 0.0;
    for (const StepLaw* law : m.schedule.all_laws()) {
        const double z_part = mean(law->claim) * tail_prob(law->inter, u / (2.0 * c));
        const double t_part = c * upper_trunc_mean_incl(law->inter, u / c);
        worst = std::max(worst, z_part + t_part);
    }
    return worst;
}

double alpha(const ModelConfig& m, const AlphaParams& p, double y) {
    if (!(y > 0.0 && y <= p.delta / 2.0))
        throw std::invalid_argument("alpha: y must lie in (0, delta/2]");
    const double u = std::pow(y, -0.25);
    return 2.0 * p.surrogate_scale * trunc_surrogate(m, u) + std::sqrt(y) / 2.0 +
           (y / 2.0) * (p.c5 * p.c5 + 1.0) * p.sup_mgf;
}

std::int64_t certify_m_cutoff(const ModelConfig& m, double c6) {
    if (!(c6 > 0.0)) throw std::invalid_argument("certify_m_cutoff: c6 must be positive");
    const std::int64_t p = static_cast<std::int64_t>(m.schedule.prefix.size());
    const std::int64_t L = static_cast<std::int64_t>(m.schedule.cycle.size());
    const double mbar = -c6;

    // k violates iff S_k/k > -c6/2, i.e. R_k := S_k - k*mbar > k*c6/2.
    // Past the prefix R_k only depends on the cycle residue, so each
    // residue class violates exactly on an initial segment of indices.
    std::vector<double> cycle_means(L);
    for (std::int64_t r = 0; r < L; ++r)
        cycle_means[r] = step_mean(m, static_cast<std::size_t>(p + 1 + r));
    double cycle_sum = 0.0;
    for (double v : cycle_means) cycle_sum += v;

    double s_prefix = 0.0;
    std::int64_t last_viol = 0;
    {
        double s = 0.0;
        for (std::int64_t k = 1; k <= p; ++k) {
            s += step_mean(m, static_cast<std::size_t>(k));
            if (s / static_cast<double>(k) > -c6 / 2.0) last_viol = k;
        }
        s_prefix = s;
    }

    auto avg_at = [&](std::int64_t k) {
        // k > p: k = p + j*L + r with r in [1, L]
        const std::int64_t j = (k - p - 1) / L;
        const std::int64_t r = (k - p - 1) % L;
        double s = s_prefix + static_cast<double>(j) * cycle_sum;
        for (std::int64_t i = 0; i <= r; ++i) s += cycle_means[i];
        return s / static_cast<double>(k);
    };

    double partial = 0.0;
    for (std::int64_t r = 1; r <= L; ++r) {
        partial += cycle_means[r - 1];
        const double residual = (s_prefix - static_cast<double>(p) * mbar) +
                                (partial - static_cast<double>(r) * mbar);
        if (residual <= 0.0) continue;
        // violations in this class are exactly k < 2*residual/c6
        const double bound = 2.0 * residual / c6;
        std::int64_t j = static_cast<std::int64_t>(std::floor((bound + static_cast<double>(L) -
                                                               static_cast<double>(p + r)) /
                                                              static_cast<double>(L)));
        if (j < 0) j = 0;
        std::int64_t k = p + j * L + r;
        while (k > p && avg_at(k) <= -c6 / 2.0) k -= L;
        if (k > p) last_viol = std::max(last_viol, k);
    }

    return std::max<std::int64_t>(last_viol, 1);
}

double bound_prefactor_log(double big_delta, std::int64_t m_cutoff, double y_star, double c6) {
    if (!(big_delta > 1.0)) throw std::invalid_argument("prefactor: big_delta must exceed 1");
    if (m_cutoff < 1) throw std::invalid_argument("prefactor: M must be >= 1");
    // log of Delta(Delta^M - 1)/(Delta - 1)
    const double t = static_cast<double>(m_cutoff) * std::log(big_delta);
    const double log_pow_m1 = t + std::log1p(-std::exp(-t));  // log(Delta^M - 1)
    const double log_a = std::log(big_delta) + log_pow_m1 - std::log(big_delta - 1.0);
    // log of e^s/(e^s - 1) = -log(1 - e^{-s})
    const double s = y_star * c6 / 4.0;
    const double log_b = -std::log(-std::expm1(-s));
    return log_add_exp(log_a, log_b);
}

BoundConstants bound_constants(const ModelConfig& m, double delta, double surrogate_scale) {
    if (!(delta > 0.0)) throw std::invalid_argument("bound_constants: delta must be positive");
    if (!(surrogate_scale >= 1.0))
        throw std::invalid_argument("bound_constants: surrogate_scale must be >= 1");

    BoundConstants k;
    k.delta = delta;
    k.surrogate_scale = surrogate_scale;

    const double drift = cycle_drift(m);
    if (!(drift < -1e-12)) {
        std::ostringstream os;
        os << "cycle drift " << drift << " is not strictly negative";
        throw ModelError(ErrorCode::DriftNotNegative, os.str());
    }
    k.c6 = -drift;

    auto sup = sup_eta_mgf(m, delta);
    if (!sup) {
        std::ostringstream os;
        os << "E exp(delta Z) diverges at delta = " << delta << "; shrink delta";
        throw ModelError(ErrorCode::MgfDiverges, os.str());
    }
    k.sup_eta_mgf = *sup;

    k.c5 = c5_of_delta(delta);
    k.neg_part_bound = neg_part_mean_bound(m);
    k.y_hat = std::min(delta / 2.0, 1.0 / (2.0 * k.neg_part_bound));

    const AlphaParams ap{delta, k.c5, k.sup_eta_mgf, surrogate_scale};
    const double target = k.c6 / 4.0;
    if (alpha(m, ap, k.y_hat) <= target) {
        k.y_star = k.y_hat;
    } else {
        // alpha is nondecreasing in y and vanishes as y -> 0: halve until
        // admissible, then bisect for the boundary
        double lo = k.y_hat;
        do {
            lo *= 0.5;
            if (lo < 1e-300)
                throw ModelError(ErrorCode::VacuousBound,
                                 "y* underflowed; the drift is too weak for a usable bound");
        } while (alpha(m, ap, lo) > target);
        double hi = std::min(2.0 * lo, k.y_hat);
        while (hi - lo > 1e-9 * lo) {
            const double mid = 0.5 * (lo + hi);
            (alpha(m, ap, mid) <= target ? lo : hi) = mid;
        }
        // one tolerance unit below the boundary so the inequality holds
        // strictly at the reported value
        k.y_star = lo * (1.0 - 1e-9);
        if (k.y_star < 1e-300)
            throw ModelError(ErrorCode::VacuousBound,
                             "y* underflowed; the drift is too weak for a usable bound");
    }
    k.alpha_at_y_star = alpha(m, ap, k.y_star);

    k.m_cutoff = certify_m_cutoff(m, k.c6);
    k.big_delta = 1.0 + k.sup_eta_mgf;
    k.log_c3 = bound_prefactor_log(k.big_delta, k.m_cutoff, k.y_star, k.c6);
    k.c3 = std::exp(k.log_c3);  // +inf when Delta^M overflows; log_c3 stays usable
    k.c4 = k.y_star;
    return k;
}

RuinBound ruin_bound(const ModelConfig& m, const BoundOptions& opts) {
    const double gamma = m.gamma;
    if (opts.delta && opts.grid_search)
        throw std::invalid_argument("ruin_bound: delta override and grid search are exclusive");
    if (opts.delta && !(*opts.delta > 0.0 && *opts.delta <= gamma))
        throw std::invalid_argument("ruin_bound: delta override must lie in (0, gamma]");

    BoundConstants chosen;
    if (!opts.grid_search) {
        // delta = gamma is always admissible for C1*:
        // E e^{gamma(Z - c theta)} <= E e^{gamma Z}
        chosen = bound_constants(m, opts.delta.value_or(gamma), opts.surrogate_scale);
    } else {
        constexpr int kGridSize = 64;
        std::vector<std::optional<BoundConstants>> results(kGridSize);
#pragma omp parallel for schedule(dynamic)
        for (int j = 1; j <= kGridSize; ++j) {
            const double delta = gamma * static_cast<double>(j) / kGridSize;
            try {
                results[j - 1] = bound_constants(m, delta, opts.surrogate_scale);
            } catch (const ModelError&) {
                // candidate inadmissible; skip
            }
        }
        bool found = false;
        for (int j = 0; j < kGridSize; ++j) {  // ascending delta: ties go to the smaller one
            if (!results[j]) continue;
            if (!found || results[j]->c4 > chosen.c4) {
                chosen = *results[j];
                found = true;
            }
        }
        if (!found)
            chosen = bound_constants(m, gamma, opts.surrogate_scale);  // surface the error
    }

    RuinBound b;
    b.provenance = chosen;
    b.c1 = chosen.c4 / 2.0;
    b.c2 = std::max(0.0, 2.0 * chosen.log_c3 / chosen.c4);
    return b;
}

AdjustmentCoefficient adjustment_coefficient(const DistributionSpec& claim,
                                             const DistributionSpec& inter, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("adjustment_coefficient: c must be positive");
    if (!(mean(claim) - c * mean(inter) < 0.0))
        throw ModelError(ErrorCode::NetProfitViolated,
                         "net profit condition E Z - c E theta < 0 fails");

    const double t_max = mgf_domain_sup(claim);
    // cumulant generating function of Z - c theta: zero at 0, negative
    // slope at 0 under net profit, convex
    auto g = [&](double t) { return *log_mgf(claim, t) + *log_mgf(inter, -c * t); };

    double lo, hi;
    if (std::isfinite(t_max)) {
        // g -> +inf at the boundary; the root can still sit closer to
        // t_max than doubles can represent
        hi = 0.5 * t_max;
        while (g(hi) <= 0.0) {
            const double next = t_max - 0.5 * (t_max - hi);
            if (!(next > hi) || !(next < t_max))
                throw ModelError(ErrorCode::NoRootInDomain,
                                 "root at or beyond the claim MGF boundary");
            hi = next;
        }
        lo = 0.5 * hi;
        while (g(lo) >= 0.0) lo *= 0.5;
    } else {
        // bounded-support claim: g(t)/t tends to max Z - c min theta
        const double slope = max_support(claim) - c * min_support(inter);
        if (slope <= 0.0)
            throw ModelError(ErrorCode::NoRootInDomain,
                             "E exp(t(Z - c theta)) stays below 1 for all t > 0");
        hi = 1.0;
        while (g(hi) <= 0.0) hi *= 2.0;
        lo = 0.5 * hi;
        while (g(lo) >= 0.0) lo *= 0.5;
    }

    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }

    AdjustmentCoefficient a;
    a.r = 0.5 * (lo + hi);
    a.t_max = t_max;
    a.residual = std::abs(*mgf(claim, a.r) * *mgf(inter, -c * a.r) - 1.0);
    return a;
}

double bound_at(const BoundConstants& k, double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("bound_at: x must be >= 0");
    return std::min(1.0, std::exp(k.log_c3 - k.c4 * x));
}

std::optional<double> bound_at(const RuinBound& b, double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("bound_at: x must be >= 0");
    if (x < b.c2) return std::nullopt;
    return std::exp(-b.c1 * x);
}

}  // namespace ruin
