#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ruin/dist.hpp"

namespace ruin {

struct StepLaw {
    DistributionSpec claim;  // Z_i
    DistributionSpec inter;  // theta_i
};

// Finitary encoding of a not-identically-distributed sequence: a finite
// irregular prefix followed by a cycle that repeats forever. Every
// sup/limsup the condition checks need then reduces to a finite max or a
// cycle average.
struct Schedule {
    std::vector<StepLaw> prefix;
    std::vector<StepLaw> cycle;  // nonempty

    // Law pair of step i (1-based).
    const StepLaw& law_at(std::size_t i) const {
        if (i <= prefix.size()) return prefix[i - 1];
        return cycle[(i - prefix.size() - 1) % cycle.size()];
    }

    // Prefix followed by cycle; sup_i over the whole sequence equals the
    // max over these.
    std::vector<const StepLaw*> all_laws() const;
};

struct ModelConfig {
    Schedule schedule;
    double premium = 0.0;  // c, currency per unit time
    double gamma = 0.0;    // exponent of the claim exponential-moment condition
};

// Structural validity: premium/gamma positive, cycle nonempty,
// interarrival laws nondegenerate at zero. Throws std::invalid_argument.
void validate(const ModelConfig& m);

// E Z_i - c E theta_i for step i (1-based).
double step_mean(const ModelConfig& m, std::size_t i);

// Average step mean over one cycle; the limsup average drift of the whole
// sequence, since the prefix washes out. Minus this value is the c6 of the
// constants pipeline.
double cycle_drift(const ModelConfig& m);

struct ConditionReport {
    bool c1_holds = false;
    double c1_sup_mgf = 0.0;  // attained sup E exp(gamma Z_i); +inf when C1 fails
    bool c2_holds = false;
    std::vector<std::pair<double, double>> c2_decay;  // (u, sup E theta 1{theta>u})
    bool c3_holds = false;
    double drift = 0.0;
    std::vector<std::string> violations;

    bool all_hold() const { return c1_holds && c2_holds && c3_holds; }
};

// C1: every claim MGF converges at gamma (finitely many laws, so the sup
// is a max). C2: automatic for the supported variants — all have finite
// mean and the truncated mean of each vanishes as u grows; the report
// records the attained decay on a diagnostic u-grid. C3: cycle drift
// strictly below -1e-12.
ConditionReport check_conditions(const ModelConfig& m);

}  // namespace ruin
