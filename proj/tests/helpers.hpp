#pragma once

#include <vector>

#include "ruin/schedule.hpp"

namespace testm {

using ruin::DistributionSpec;
using ruin::ModelConfig;
using ruin::StepLaw;

// Exp(1)/Exp(1), c = 2, gamma = 0.5: the classical textbook case with
// adjustment coefficient 1/2 and closed-form ruin probability.
inline ModelConfig homogeneous_exp() {
    ModelConfig m;
    m.premium = 2.0;
    m.gamma = 0.5;
    m.schedule.cycle.push_back(
        {DistributionSpec::exponential(1.0), DistributionSpec::exponential(1.0)});
    return m;
}

// Alternating claims Exp(2)/Exp(4), interarrivals Exp(1)/Deterministic{1},
// c = 2, gamma = 1: a genuinely inhomogeneous 2-cycle with drift -1.625.
inline ModelConfig two_cycle() {
    ModelConfig m;
    m.premium = 2.0;
    m.gamma = 1.0;
    m.schedule.cycle.push_back(
        {DistributionSpec::exponential(2.0), DistributionSpec::exponential(1.0)});
    m.schedule.cycle.push_back(
        {DistributionSpec::exponential(4.0), DistributionSpec::deterministic(1.0)});
    return m;
}

// Z in {0,2} with P(Z=2) = 0.4, theta = 1, c = 1: the +1/-1 gambler's-ruin
// walk with p = 0.4 up.
inline ModelConfig gambler_walk() {
    ModelConfig m;
    m.premium = 1.0;
    m.gamma = 0.5;
    m.schedule.cycle.push_back(
        {DistributionSpec::discrete({{0.0, 0.6}, {2.0, 0.4}}), DistributionSpec::deterministic(1.0)});
    return m;
}

}  // namespace testm
