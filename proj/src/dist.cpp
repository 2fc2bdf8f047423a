#include "ruin/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace ruin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

DistributionSpec DistributionSpec::exponential(double rate) {
    require(std::isfinite(rate) && rate > 0.0, "exponential: rate must be positive");
    return DistributionSpec(DistKind::Exponential, 0.0, rate);
}

DistributionSpec DistributionSpec::gamma(double shape, double rate) {
    require(std::isfinite(shape) && shape > 0.0, "gamma: shape must be positive");
    require(std::isfinite(rate) && rate > 0.0, "gamma: rate must be positive");
    return DistributionSpec(DistKind::Gamma, shape, rate);
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
    require(finite_nonneg(lo), "uniform: lo must be >= 0");
    require(std::isfinite(hi) && hi > lo, "uniform: hi must exceed lo");
    return DistributionSpec(DistKind::Uniform, lo, hi);
}

DistributionSpec DistributionSpec::deterministic(double value) {
    require(finite_nonneg(value), "deterministic: value must be >= 0");
    return DistributionSpec(DistKind::Deterministic, value, 0.0);
}

DistributionSpec DistributionSpec::discrete(std::vector<Atom> atoms) {
    require(!atoms.empty(), "discrete: needs at least one atom");
    double total = 0.0;
    for (const Atom& a : atoms) {
        require(finite_nonneg(a.value), "discrete: atom values must be >= 0");
        require(std::isfinite(a.prob) && a.prob > 0.0 && a.prob <= 1.0,
                "discrete: atom probabilities must lie in (0,1]");
        total += a.prob;
    }
    require(std::abs(total - 1.0) <= 1e-12, "discrete: probabilities must sum to 1");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    DistributionSpec d(DistKind::DiscreteFinite, 0.0, 0.0);
    d.atoms_ = std::move(atoms);
    return d;
}

double mean(const DistributionSpec& d) {
    switch (d.kind()) {
        case DistKind::Exponential: return 1.0 / d.rate();
        case DistKind::Gamma: return d.shape() / d.rate();
        case DistKind::Uniform: return 0.5 * (d.lo() + d.hi());
        case DistKind::Deterministic: return d.value();
        case DistKind::DiscreteFinite: {
            double s = 0.0;
            for (const Atom& a : d.atoms()) s += a.prob * a.value;
            return s;
        }
    }
    return 0.0;
}

std::optional<double> mgf(const DistributionSpec& d, double t) {
    if (t == 0.0) return 1.0;
    switch (d.kind()) {
        case DistKind::Exponential: {
            if (t >= d.rate()) return std::nullopt;
            return d.rate() / (d.rate() - t);
        }
        case DistKind::Gamma: {
            if (t >= d.rate()) return std::nullopt;
            return std::pow(d.rate() / (d.rate() - t), d.shape());
        }
        case DistKind::Uniform: {
            const double w = d.hi() - d.lo();
            const double s = t * w;
            // series near 0 to dodge the 0/0 cancellation
            if (std::abs(s) < 1e-6)
                return std::exp(t * d.lo()) * (1.0 + s / 2.0 + s * s / 6.0);
            return std::exp(t * d.lo()) * std::expm1(s) / s;
        }
        case DistKind::Deterministic: return std::exp(t * d.value());
        case DistKind::DiscreteFinite: {
            double s = 0.0;
            for (const Atom& a : d.atoms()) s += a.prob * std::exp(t * a.value);
            return s;
        }
    }
    return std::nullopt;
}

std::optional<double> log_mgf(const DistributionSpec& d, double t) {
    if (t == 0.0) return 0.0;
    switch (d.kind()) {
        case DistKind::Exponential: {
            if (t >= d.rate()) return std::nullopt;
            return -std::log1p(-t / d.rate());
        }
        case DistKind::Gamma: {
            if (t >= d.rate()) return std::nullopt;
            return -d.shape() * std::log1p(-t / d.rate());
        }
        case DistKind::Uniform: {
            const double w = d.hi() - d.lo();
            const double s = t * w;
            if (std::abs(s) < 1e-6)
                return t * d.lo() + std::log1p(s / 2.0 + s * s / 6.0);
            if (s > 0.0)
                return t * d.hi() + std::log1p(-std::exp(-s)) - std::log(s);
            return t * d.lo() + std::log1p(-std::exp(s)) - std::log(-s);
        }
        case DistKind::Deterministic: return t * d.value();
        case DistKind::DiscreteFinite: {
            double top = -kInf;
            for (const Atom& a : d.atoms()) top = std::max(top, t * a.value);
            double s = 0.0;
            for (const Atom& a : d.atoms()) s += a.prob * std::exp(t * a.value - top);
            return top + std::log(s);
        }
    }
    return std::nullopt;
}

double tail_prob(const DistributionSpec& d, double u) {
    if (u < 0.0) return 1.0;
    switch (d.kind()) {
        case DistKind::Exponential: return std::exp(-d.rate() * u);
        case DistKind::Gamma: return boost::math::gamma_q(d.shape(), d.rate() * u);
        case DistKind::Uniform: {
            if (u <= d.lo()) return 1.0;
            if (u >= d.hi()) return 0.0;
            return (d.hi() - u) / (d.hi() - d.lo());
        }
        case DistKind::Deterministic: return d.value() > u ? 1.0 : 0.0;
        case DistKind::DiscreteFinite: {
            double s = 0.0;
            for (const Atom& a : d.atoms())
                if (a.value > u) s += a.prob;
            return s;
        }
    }
    return 0.0;
}

double upper_trunc_mean(const DistributionSpec& d, double u) {
    if (u < 0.0) u = 0.0;
    switch (d.kind()) {
        case DistKind::Exponential:
            return (u + 1.0 / d.rate()) * std::exp(-d.rate() * u);
        case DistKind::Gamma:
            // int_u^inf x f(x) dx = (shape/rate) Q(shape+1, rate u)
            return (d.shape() / d.rate()) * boost::math::gamma_q(d.shape() + 1.0, d.rate() * u);
        case DistKind::Uniform: {
            if (u >= d.hi()) return 0.0;
            const double m = std::max(u, d.lo());
            return (d.hi() * d.hi() - m * m) / (2.0 * (d.hi() - d.lo()));
        }
        case DistKind::Deterministic: return d.value() > u ? d.value() : 0.0;
        case DistKind::DiscreteFinite: {
            double s = 0.0;
            for (const Atom& a : d.atoms())
                if (a.value > u) s += a.prob * a.value;
            return s;
        }
    }
    return 0.0;
}

double upper_trunc_mean_incl(const DistributionSpec& d, double u) {
    // atoms within tol of u count as "at u" and are included
    const double tol = 1e-9 * std::max(1.0, std::abs(u));
    switch (d.kind()) {
        case DistKind::Deterministic:
            return d.value() >= u - tol ? d.value() : 0.0;
        case DistKind::DiscreteFinite: {
            double s = 0.0;
            for (const Atom& a : d.atoms())
                if (a.value >= u - tol) s += a.prob * a.value;
            return s;
        }
        default:
            return upper_trunc_mean(d, u);  // continuous: atoms carry no mass
    }
}

double prob_zero(const DistributionSpec& d) {
    switch (d.kind()) {
        case DistKind::Deterministic: return d.value() == 0.0 ? 1.0 : 0.0;
        case DistKind::DiscreteFinite: {
            double s = 0.0;
            for (const Atom& a : d.atoms())
                if (a.value == 0.0) s += a.prob;
            return s;
        }
        default: return 0.0;
    }
}

double quantile(const DistributionSpec& d, double u) {
    switch (d.kind()) {
        case DistKind::Exponential: return -std::log(1.0 - u) / d.rate();
        case DistKind::Gamma: return boost::math::gamma_p_inv(d.shape(), u) / d.rate();
        case DistKind::Uniform: return d.lo() + u * (d.hi() - d.lo());
        case DistKind::Deterministic: return d.value();
        case DistKind::DiscreteFinite: {
            double cum = 0.0;
            for (const Atom& a : d.atoms()) {
                cum += a.prob;
                if (u <= cum) return a.value;
            }
            return d.atoms().back().value;  // u beyond the rounded total
        }
    }
    return 0.0;
}

double sample(const DistributionSpec& d, RngStream& stream) {
    return quantile(d, stream.next_unit());
}

double mgf_domain_sup(const DistributionSpec& d) {
    switch (d.kind()) {
        case DistKind::Exponential:
        case DistKind::Gamma: return d.rate();
        default: return kInf;
    }
}

double min_support(const DistributionSpec& d) {
    switch (d.kind()) {
        case DistKind::Exponential:
        case DistKind::Gamma: return 0.0;
        case DistKind::Uniform: return d.lo();
        case DistKind::Deterministic: return d.value();
        case DistKind::DiscreteFinite: return d.atoms().front().value;
    }
    return 0.0;
}

double max_support(const DistributionSpec& d) {
    switch (d.kind()) {
        case DistKind::Exponential:
        case DistKind::Gamma: return kInf;
        case DistKind::Uniform: return d.hi();
        case DistKind::Deterministic: return d.value();
        case DistKind::DiscreteFinite: return d.atoms().back().value;
    }
    return 0.0;
}

}  // namespace ruin
