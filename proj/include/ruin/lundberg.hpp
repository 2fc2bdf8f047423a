#pragma once

#include <cstdint>
#include <optional>

#include "ruin/schedule.hpp"

namespace ruin {

// Every intermediate of the bound construction, kept together so each
// inequality can be re-verified from the serialized record alone.
struct BoundConstants {
    double delta = 0.0;          // exponent of the increment moment condition
    double sup_eta_mgf = 0.0;    // sup_i E exp(delta eta_i), eta = Z - c theta
    double c5 = 0.0;             // exp(delta v/2) >= v^2 for all v >= c5
    double c6 = 0.0;             // minus the cycle-average drift
    double neg_part_bound = 0.0; // upper bound for sup_i E(|eta_i| 1{eta_i<0})
    double y_hat = 0.0;          // admissible exponent cap
    double y_star = 0.0;         // chosen exponent; alpha(y_star) <= c6/4
    double alpha_at_y_star = 0.0;
    std::int64_t m_cutoff = 1;   // "M": running averages <= -c6/2 for all k > M
    double big_delta = 0.0;      // 1 + sup_eta_mgf
    double c3 = 0.0;             // prefactor; +inf when it overflows, see log_c3
    double log_c3 = 0.0;         // always finite; bound evaluation works in logs
    double c4 = 0.0;             // decay rate (= y_star)
    double surrogate_scale = 1.0;
};

// The certificate of the final inequality: psi(x) <= exp(-c1 x) for
// x >= c2. c7/c8 in the serialized form are aliases of the provenance
// c3/c4.
struct RuinBound {
    double c1 = 0.0;  // = c4 / 2
    double c2 = 0.0;  // = max{0, 2 log(c3) / c4}
    BoundConstants provenance;
};

struct AdjustmentCoefficient {
    double r = 0.0;
    double residual = 0.0;  // |E exp(r (Z - c theta)) - 1| at the root
    double t_max = 0.0;     // MGF blow-up boundary used for bracketing (+inf if none)
};

// max_i E exp(delta Z_i) E exp(-c delta theta_i); nullopt if any claim MGF
// diverges at delta.
std::optional<double> sup_eta_mgf(const ModelConfig& m, double delta);

// Smallest v0 >= 0 with exp(delta v/2) >= v^2 for all v >= v0. Zero iff
// delta >= 4/e; otherwise the larger root of exp(delta v/2) = v^2.
double c5_of_delta(double delta);

// c * max_i E theta_i, which dominates sup_i E(|eta_i| 1{eta_i<0}) because
// the claims are nonnegative. Using an upper bound here only shrinks y_hat.
double neg_part_mean_bound(const ModelConfig& m);

// Upper bound for sup_i E(|eta_i| 1{eta_i <= -u}), u > 0, built from
// univariate queries:
//   E(Z 1{eta<=-u})     <= E Z * P(theta > u/(2c))
//   E(theta 1{eta<=-u}) <= E(theta 1{theta >= u/c})
double trunc_surrogate(const ModelConfig& m, double u);

struct AlphaParams {
    double delta = 0.0;
    double c5 = 0.0;
    double sup_mgf = 0.0;
    double surrogate_scale = 1.0;
};

// Remainder-control function: vanishes as y -> 0, nondecreasing in y on
// (0, delta/2].
double alpha(const ModelConfig& m, const AlphaParams& p, double y);

// Smallest M >= 1 such that (1/k) sum_{i<=k} step_mean(i) <= -c6/2 for all
// k >= M+1. Exact for any drift magnitude via the cycle periodicity of the
// drift-removed partial sums.
std::int64_t certify_m_cutoff(const ModelConfig& m, double c6);

// log of  Delta (Delta^M - 1)/(Delta - 1) + e^s/(e^s - 1),  s = y* c6/4.
double bound_prefactor_log(double big_delta, std::int64_t m_cutoff, double y_star, double c6);

// The full pipeline. surrogate_scale >= 1 inflates trunc_surrogate inside
// alpha; the bound degrades monotonically but stays valid.
BoundConstants bound_constants(const ModelConfig& m, double delta, double surrogate_scale = 1.0);

struct BoundOptions {
    std::optional<double> delta;  // default: the model's gamma
    bool grid_search = false;     // scan delta in (0, gamma] for the best c1
    double surrogate_scale = 1.0;
};

RuinBound ruin_bound(const ModelConfig& m, const BoundOptions& opts = {});

// Unique positive root of E exp(t(Z - c theta)) = 1.
AdjustmentCoefficient adjustment_coefficient(const DistributionSpec& claim,
                                             const DistributionSpec& inter, double c);

// min{1, c3 exp(-c4 x)}, valid for every x >= 0. Evaluated in log space so
// an overflowed c3 is harmless.
double bound_at(const BoundConstants& k, double x);

// exp(-c1 x) for x >= c2; nullopt (not applicable) below c2.
std::optional<double> bound_at(const RuinBound& b, double x);

}  // namespace ruin
