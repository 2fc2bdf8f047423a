#pragma once

#include <optional>
#include <vector>

#include "ruin/rng.hpp"

namespace ruin {

enum class DistKind { Exponential, Gamma, Uniform, Deterministic, DiscreteFinite };

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

// A nonnegative univariate law with closed-form moment queries and
// quantile-based sampling. The variant set is restricted to laws whose
// MGF has a closed form, so the bound pipeline never needs quadrature.
// Heavy-tailed laws are rejected at construction: the exponential-moment
// condition they violate is exactly the hypothesis the bound rests on.
class DistributionSpec {
public:
    static DistributionSpec exponential(double rate);
    static DistributionSpec gamma(double shape, double rate);
    static DistributionSpec uniform(double lo, double hi);
    static DistributionSpec deterministic(double value);
    static DistributionSpec discrete(std::vector<Atom> atoms);  // sorted by value

    DistKind kind() const noexcept { return kind_; }
    double rate() const noexcept { return p1_; }                // Exponential, Gamma
    double shape() const noexcept { return p0_; }               // Gamma
    double lo() const noexcept { return p0_; }                  // Uniform
    double hi() const noexcept { return p1_; }                  // Uniform
    double value() const noexcept { return p0_; }               // Deterministic
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }

private:
    DistributionSpec(DistKind k, double p0, double p1) : kind_(k), p0_(p0), p1_(p1) {}

    DistKind kind_ = DistKind::Deterministic;
    double p0_ = 0.0;
    double p1_ = 0.0;
    std::vector<Atom> atoms_;
};

double mean(const DistributionSpec& d);

// E exp(tX); nullopt when the integral diverges (t at or beyond the
// Exponential/Gamma rate).
std::optional<double> mgf(const DistributionSpec& d, double t);

// log E exp(tX), stable for arguments where the plain MGF would
// over- or underflow.
std::optional<double> log_mgf(const DistributionSpec& d, double t);

// P(X > u).
double tail_prob(const DistributionSpec& d, double u);

// E(X 1{X > u}).
double upper_trunc_mean(const DistributionSpec& d, double u);

// E(X 1{X >= u}); differs from the above only by atoms sitting exactly at
// u. Borderline atoms are pulled in, which can only enlarge the result —
// the direction the dominance arguments need.
double upper_trunc_mean_incl(const DistributionSpec& d, double u);

// P(X = 0); used to enforce nondegeneracy of interarrival laws.
double prob_zero(const DistributionSpec& d);

// Quantile transform F^{-1}(u) for u in (0,1).
double quantile(const DistributionSpec& d, double u);

// One variate by inversion; always consumes exactly one uniform so stream
// positions are independent of the law mixture.
double sample(const DistributionSpec& d, RngStream& stream);

// Supremum of the MGF convergence domain: the rate for Exponential/Gamma,
// +inf otherwise.
double mgf_domain_sup(const DistributionSpec& d);

double min_support(const DistributionSpec& d);
double max_support(const DistributionSpec& d);  // +inf for Exponential/Gamma

}  // namespace ruin
