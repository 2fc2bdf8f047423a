#include "ruin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ruin/errors.hpp"

namespace ruin {

namespace {

std::vector<Atom> atoms_of(const DistributionSpec& d) {
    switch (d.kind()) {
        case DistKind::Deterministic: return {{d.value(), 1.0}};
        case DistKind::DiscreteFinite: return d.atoms();
        default:
            throw ModelError(ErrorCode::NotLattice,
                             "lattice oracle needs deterministic or discrete laws");
    }
}

LatticePmf step_pmf(const StepLaw& law, double c, double pitch) {
    std::map<std::int64_t, double> mass;
    for (const Atom& z : atoms_of(law.claim)) {
        for (const Atom& th : atoms_of(law.inter)) {
            const double eta = z.value - c * th.value;
            const double q = eta / pitch;
            const double r = std::round(q);
            if (std::abs(eta - r * pitch) > 1e-12 * std::max(1.0, std::abs(eta))) {
                std::ostringstream os;
                os << "increment atom " << eta << " is not a multiple of pitch " << pitch;
                throw ModelError(ErrorCode::NotLattice, os.str());
            }
            mass[static_cast<std::int64_t>(r)] += z.prob * th.prob;
        }
    }
    LatticePmf pmf;
    pmf.min_offset = mass.begin()->first;
    const std::int64_t span = mass.rbegin()->first - pmf.min_offset + 1;
    pmf.probs.assign(static_cast<std::size_t>(span), 0.0);
    for (const auto& [off, p] : mass)
        pmf.probs[static_cast<std::size_t>(off - pmf.min_offset)] = p;
    return pmf;
}

double step_sd(const LatticePmf& pmf, double pitch) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < pmf.probs.size(); ++j) {
        const double v = static_cast<double>(pmf.min_offset + static_cast<std::int64_t>(j)) * pitch;
        m1 += pmf.probs[j] * v;
        m2 += pmf.probs[j] * v * v;
    }
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

SupProbResult run_dp(const LatticeModel& lm, std::int64_t barrier, std::int64_t n_max,
                     std::int64_t depth) {
    // state lives on offsets [-depth, barrier); index j holds offset j - depth
    const std::size_t size = static_cast<std::size_t>(barrier + depth);
    std::vector<double> cur(size, 0.0), nxt(size);
    cur[static_cast<std::size_t>(depth)] = 1.0;  // S_0 = 0

    double absorbed = 0.0;
    double dropped = 0.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const LatticePmf& pmf = lm.pmf_at(static_cast<std::size_t>(n));
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (std::size_t j = 0; j < size; ++j) {
            const double p = cur[j];
            if (p == 0.0) continue;
            for (std::size_t a = 0; a < pmf.probs.size(); ++a) {
                const double w = pmf.probs[a];
                if (w == 0.0) continue;
                const std::int64_t tgt = static_cast<std::int64_t>(j) + pmf.min_offset +
                                         static_cast<std::int64_t>(a);
                if (tgt >= static_cast<std::int64_t>(size))
                    absorbed += p * w;
                else if (tgt < 0)
                    dropped += p * w;
                else
                    nxt[static_cast<std::size_t>(tgt)] += p * w;
            }
        }
        cur.swap(nxt);
    }

    SupProbResult res;
    res.prob = absorbed;
    res.cutoff_mass = dropped;
    res.lower_cutoff = depth;
    for (double p : cur) res.retained += p;
    return res;
}

}  // namespace

LatticeModel make_lattice(const ModelConfig& m, double pitch) {
    validate(m);
    if (!(std::isfinite(pitch) && pitch > 0.0))
        throw std::invalid_argument("make_lattice: pitch must be positive");
    LatticeModel lm;
    lm.pitch = pitch;
    for (const StepLaw& law : m.schedule.prefix)
        lm.prefix.push_back(step_pmf(law, m.premium, pitch));
    for (const StepLaw& law : m.schedule.cycle)
        lm.cycle.push_back(step_pmf(law, m.premium, pitch));
    return lm;
}

SupProbResult exact_sup_prob(const LatticeModel& lm, double x, std::int64_t n_max,
                             std::int64_t lower_cutoff) {
    if (!(x >= 0.0)) throw std::invalid_argument("exact_sup_prob: x must be >= 0");
    if (n_max < 1) throw std::invalid_argument("exact_sup_prob: n_max must be >= 1");

    // absorb at the smallest grid point strictly above x; the snap keeps
    // an x that is meant to sit on the lattice from leaking one cell up
    const std::int64_t barrier =
        static_cast<std::int64_t>(std::floor(x / lm.pitch + 1e-9)) + 1;

    if (lower_cutoff > 0) return run_dp(lm, barrier, n_max, lower_cutoff);

    // automatic depth: x + 40 sd sqrt(n), then deepen until the dropped
    // mass is certifiably negligible
    double sd = 0.0;
    for (const LatticePmf& pmf : lm.prefix) sd = std::max(sd, step_sd(pmf, lm.pitch));
    for (const LatticePmf& pmf : lm.cycle) sd = std::max(sd, step_sd(pmf, lm.pitch));
    std::int64_t depth = static_cast<std::int64_t>(
        std::ceil((x + 40.0 * sd * std::sqrt(static_cast<double>(n_max))) / lm.pitch));
    depth = std::max<std::int64_t>({depth, barrier + 4, 16});

    for (int attempt = 0; attempt < 8; ++attempt) {
        SupProbResult res = run_dp(lm, barrier, n_max, depth);
        if (res.cutoff_mass < 1e-9) return res;
        depth *= 2;
    }
    throw std::runtime_error("exact_sup_prob: could not certify truncation below 1e-9");
}

double closed_form_cramer_lundberg(double lambda, double mu, double c, double x) {
    if (!(lambda > 0.0 && mu > 0.0 && c > 0.0))
        throw std::invalid_argument("closed form: lambda, mu, c must be positive");
    if (!(x >= 0.0)) throw std::invalid_argument("closed form: x must be >= 0");
    if (!(lambda / mu < c))
        throw ModelError(ErrorCode::NetProfitViolated,
                         "net profit condition lambda/mu < c fails");
    return (lambda / (c * mu)) * std::exp(-(mu - lambda / c) * x);
}

}  // namespace ruin
