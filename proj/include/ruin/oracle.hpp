#pragma once

#include <cstdint>
#include <vector>

#include "ruin/schedule.hpp"

namespace ruin {

// Increment law of one step on the lattice pitch*Z: probs[j] is the mass
// of offset (min_offset + j) * pitch.
struct LatticePmf {
    std::int64_t min_offset = 0;
    std::vector<double> probs;
};

struct LatticeModel {
    double pitch = 0.0;
    std::vector<LatticePmf> prefix;
    std::vector<LatticePmf> cycle;

    const LatticePmf& pmf_at(std::size_t i) const {  // 1-based, same rule as Schedule
        if (i <= prefix.size()) return prefix[i - 1];
        return cycle[(i - prefix.size() - 1) % cycle.size()];
    }
};

// Builds per-step increment pmfs from a schedule whose laws are all
// Deterministic/DiscreteFinite with eta = Z - c*theta atoms on the given
// grid. Throws ModelError(NotLattice) otherwise.
LatticeModel make_lattice(const ModelConfig& m, double pitch);

struct SupProbResult {
    double prob = 0.0;             // P(max_{n<=n_max} S_n > x) up to the dropped mass
    double cutoff_mass = 0.0;      // mass dropped below the cutoff; bounds the error
    double retained = 0.0;         // mass still in play at the horizon
    std::int64_t lower_cutoff = 0; // depth used, in lattice units
};

// Forward DP with an absorbing barrier at the smallest grid point
// strictly above x. lower_cutoff <= 0 requests the automatic depth
// x + 40*sd*sqrt(n_max), deepened until cutoff_mass < 1e-9.
SupProbResult exact_sup_prob(const LatticeModel& lm, double x, std::int64_t n_max,
                             std::int64_t lower_cutoff = 0);

// psi(x) = (lambda/(c mu)) exp(-(mu - lambda/c) x) for Exp(mu) claims and
// a Poisson(lambda) arrival stream.
double closed_form_cramer_lundberg(double lambda, double mu, double c, double x);

}  // namespace ruin
