#include "ruin/schedule.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ruin {

std::vector<const StepLaw*> Schedule::all_laws() const {
    std::vector<const StepLaw*> out;
    out.reserve(prefix.size() + cycle.size());
    for (const StepLaw& s : prefix) out.push_back(&s);
    for (const StepLaw& s : cycle) out.push_back(&s);
    return out;
}

void validate(const ModelConfig& m) {
    if (!(std::isfinite(m.premium) && m.premium > 0.0))
        throw std::invalid_argument("premium must be positive");
    if (!(std::isfinite(m.gamma) && m.gamma > 0.0))
        throw std::invalid_argument("gamma must be positive");
    if (m.schedule.cycle.empty())
        throw std::invalid_argument("schedule cycle must be nonempty");
    for (const StepLaw* law : m.schedule.all_laws()) {
        if (prob_zero(law->inter) >= 1.0)
            throw std::invalid_argument(
                "interarrival law is degenerate at zero (P(theta = 0) = 1)");
    }
}

double step_mean(const ModelConfig& m, std::size_t i) {
    const StepLaw& law = m.schedule.law_at(i);
    return mean(law.claim) - m.premium * mean(law.inter);
}

double cycle_drift(const ModelConfig& m) {
    double s = 0.0;
    for (const StepLaw& law : m.schedule.cycle)
        s += mean(law.claim) - m.premium * mean(law.inter);
    return s / static_cast<double>(m.schedule.cycle.size());
}

ConditionReport check_conditions(const ModelConfig& m) {
    ConditionReport r;

    r.c1_holds = true;
    r.c1_sup_mgf = 0.0;
    std::size_t idx = 0;
    for (const StepLaw* law : m.schedule.all_laws()) {
        ++idx;
        auto v = mgf(law->claim, m.gamma);
        if (!v) {
            r.c1_holds = false;
            r.c1_sup_mgf = std::numeric_limits<double>::infinity();
            std::ostringstream os;
            os << "C1: E exp(gamma Z) diverges for step law #" << idx
               << " at gamma = " << m.gamma;
            r.violations.push_back(os.str());
        } else if (r.c1_holds) {
            r.c1_sup_mgf = std::max(r.c1_sup_mgf, *v);
        }
    }

    // C2 is automatic here: the law set is finite and every supported
    // variant has a finite mean, so sup_i E(theta_i 1{theta_i > u}) is a
    // max over finitely many truncated means, each of which vanishes as
    // u grows. The attained decay is recorded for transparency.
    r.c2_holds = true;
    for (double u : {1.0, 10.0, 100.0}) {
        double worst = 0.0;
        for (const StepLaw* law : m.schedule.all_laws())
            worst = std::max(worst, upper_trunc_mean(law->inter, u));
        r.c2_decay.emplace_back(u, worst);
    }

    r.drift = cycle_drift(m);
    // a drift numerically at zero gives a vacuous bound, so strictness
    // is enforced with a hard margin
    r.c3_holds = r.drift < -1e-12;
    if (!r.c3_holds) {
        std::ostringstream os;
        os << "C3: cycle drift " << r.drift << " is not strictly negative";
        r.violations.push_back(os.str());
    }

    return r;
}

}  // namespace ruin
