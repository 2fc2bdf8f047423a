#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "ruin/errors.hpp"
#include "ruin/lundberg.hpp"

using namespace ruin;

namespace {

// joint-atom enumeration of eta = Z - c theta for discrete/deterministic laws
std::vector<Atom> eta_atoms(const StepLaw& law, double c) {
    auto atoms_of = [](const DistributionSpec& d) -> std::vector<Atom> {
        if (d.kind() == DistKind::Deterministic) return {{d.value(), 1.0}};
        return d.atoms();
    };
    std::vector<Atom> out;
    for (const Atom& z : atoms_of(law.claim))
        for (const Atom& th : atoms_of(law.inter))
            out.push_back({z.value - c * th.value, z.prob * th.prob});
    return out;
}

double exact_trunc_neg(const std::vector<Atom>& eta, double u) {
    // E(|eta| 1{eta <= -u})
    double s = 0.0;
    for (const Atom& a : eta)
        if (a.value <= -u) s += a.prob * std::abs(a.value);
    return s;
}

double exact_neg_part(const std::vector<Atom>& eta) {
    double s = 0.0;
    for (const Atom& a : eta)
        if (a.value < 0.0) s += a.prob * std::abs(a.value);
    return s;
}

// a discrete model whose theta atoms collide exactly with u/c thresholds
ModelConfig discrete_collision_model() {
    ModelConfig m;
    m.premium = 1.0;
    m.gamma = 0.5;
    m.schedule.cycle.push_back({DistributionSpec::discrete({{0.0, 0.5}, {1.0, 0.5}}),
                                DistributionSpec::discrete({{1.0, 0.5}, {3.0, 0.5}})});
    m.schedule.cycle.push_back({DistributionSpec::deterministic(0.0),
                                DistributionSpec::discrete({{2.0, 0.75}, {4.0, 0.25}})});
    return m;
}

// direct scan certificate for the M cutoff
void check_m_certificate(const ModelConfig& m, double c6, std::int64_t m_cutoff,
                         std::int64_t scan_to) {
    double s = 0.0;
    for (std::int64_t k = 1; k <= scan_to; ++k) {
        s += step_mean(m, static_cast<std::size_t>(k));
        const bool viol = s / static_cast<double>(k) > -c6 / 2.0;
        if (k > m_cutoff) CHECK(!viol);
        if (k == m_cutoff && m_cutoff > 1) CHECK(viol);  // minimality
    }
}

}  // namespace

TEST_CASE("c5_of_delta") {
    CHECK(c5_of_delta(2.0) == 0.0);  // min of e^v/v^2 is e^2/4 > 1
    CHECK(c5_of_delta(1.0) == doctest::Approx(8.613169456441399).epsilon(1e-9));
    CHECK(c5_of_delta(0.5) == doctest::Approx(26.09348547661191).epsilon(1e-9));

    // independent fixed-point oracle for the delta = 1 root: v = 4 ln v,
    // contraction from above
    double v = 10.0;
    for (int i = 0; i < 200; ++i) v = 4.0 * std::log(v);
    CHECK(c5_of_delta(1.0) == doctest::Approx(v).epsilon(1e-8));

    // either side of the tangency delta = 4/e
    const double tangent = 4.0 / std::exp(1.0);
    CHECK(c5_of_delta(tangent + 1e-6) == 0.0);
    CHECK(c5_of_delta(tangent - 1e-6) == doctest::Approx(std::exp(1.0)).epsilon(1e-2));

    // certificate: the inequality holds at 1000 sampled points above c5
    for (double delta : {0.25, 0.5, 1.0, 2.0}) {
        const double c5 = c5_of_delta(delta);
        for (int i = 0; i < 1000; ++i) {
            const double vv = c5 + 100.0 * i / 999.0;
            CHECK(std::exp(delta * vv / 2.0) >= vv * vv);
        }
    }
}

TEST_CASE("sup_eta_mgf") {
    const auto m = testm::homogeneous_exp();
    // (1/(1-0.5)) * (1/(1+2*0.5)) = 1; this delta is the adjustment coefficient
    CHECK(*sup_eta_mgf(m, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*sup_eta_mgf(m, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(!sup_eta_mgf(m, 1.0));  // claim MGF boundary

    // independent recomputation on the inhomogeneous cycle
    const auto two = testm::two_cycle();
    const double law1 = (2.0 / (2.0 - 1.0)) * (1.0 / (1.0 + 2.0));
    const double law2 = (4.0 / (4.0 - 1.0)) * std::exp(-2.0);
    CHECK(*sup_eta_mgf(two, 1.0) == doctest::Approx(std::max(law1, law2)).epsilon(1e-14));
}

TEST_CASE("neg_part_mean_bound dominates the exact negative-part moment") {
    CHECK(neg_part_mean_bound(testm::homogeneous_exp()) == doctest::Approx(2.0).epsilon(1e-15));

    ModelConfig det;
    det.premium = 1.0;
    det.gamma = 1.0;
    det.schedule.cycle.push_back(
        {DistributionSpec::deterministic(0.5), DistributionSpec::deterministic(1.0)});
    CHECK(neg_part_mean_bound(det) == doctest::Approx(1.0).epsilon(1e-15));

    const auto m = discrete_collision_model();
    const double bound = neg_part_mean_bound(m);
    for (const StepLaw* law : m.schedule.all_laws())
        CHECK(bound >= exact_neg_part(eta_atoms(*law, m.premium)) - 1e-14);
}

TEST_CASE("trunc_surrogate closed form and dominance") {
    const auto m = testm::homogeneous_exp();
    // E Z * e^{-u/(2c)} + c (u/c + 1) e^{-u/c} at u = 4: e^{-1} + 6 e^{-2}
    CHECK(trunc_surrogate(m, 4.0) == doctest::Approx(1.1798911405911185).epsilon(1e-14));
    CHECK(trunc_surrogate(m, 400.0) < 1e-12);  // vanishes for deep truncation

    // dominance over the exact truncated moment, including thresholds that
    // land exactly on theta atoms
    const auto dm = discrete_collision_model();
    for (double u : {0.5, 1.0, 2.0, 4.0}) {
        const double sur = trunc_surrogate(dm, u);
        double exact = 0.0;
        for (const StepLaw* law : dm.schedule.all_laws())
            exact = std::max(exact, exact_trunc_neg(eta_atoms(*law, dm.premium), u));
        CHECK(sur >= exact - 1e-14);
    }
}

TEST_CASE("alpha vanishes at 0, is monotone, and matches its composition") {
    const auto m = testm::homogeneous_exp();
    const double delta = 0.5;
    const AlphaParams p{delta, c5_of_delta(delta), *sup_eta_mgf(m, delta), 1.0};

    CHECK(alpha(m, p, 1e-12) < 1e-3);

    double prev = 0.0;
    for (double y = 1e-6; y <= delta / 2.0; y *= 2.0) {
        const double a = alpha(m, p, y);
        CHECK(a >= prev - 1e-15);
        prev = a;
    }

    // independent composition from the closed forms at y = 0.01
    const double y = 0.01;
    const double u = std::pow(y, -0.25);
    const double ts = 1.0 * std::exp(-u / 4.0) + 2.0 * (u / 2.0 + 1.0) * std::exp(-u / 2.0);
    const double expect = 2.0 * ts + std::sqrt(y) / 2.0 + y / 2.0 * (p.c5 * p.c5 + 1.0) * 1.0;
    CHECK(alpha(m, p, y) == doctest::Approx(expect).epsilon(1e-12));

    CHECK_THROWS_AS(alpha(m, p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(alpha(m, p, delta), std::invalid_argument);
}

TEST_CASE("M cutoff") {
    // homogeneous, step mean -1, c6 = 1: no index ever violates
    const auto m = testm::homogeneous_exp();
    CHECK(certify_m_cutoff(m, 1.0) == 1);
    check_m_certificate(m, 1.0, 1, 2000);

    CHECK(certify_m_cutoff(testm::two_cycle(), 1.625) == 1);
    check_m_certificate(testm::two_cycle(), 1.625, 1, 2000);

    // prefix with a large early claim: S_k = 5 - k, so averages stay above
    // -1/2 through k = 9 and settle at k = 10
    ModelConfig pre;
    pre.premium = 1.0;
    pre.gamma = 1.0;
    pre.schedule.prefix.push_back(
        {DistributionSpec::deterministic(5.0), DistributionSpec::deterministic(1.0)});
    pre.schedule.cycle.push_back(
        {DistributionSpec::deterministic(0.0), DistributionSpec::deterministic(1.0)});
    const double c6 = -cycle_drift(pre);
    CHECK(c6 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(certify_m_cutoff(pre, c6) == 9);
    check_m_certificate(pre, c6, 9, 2000);
}

TEST_CASE("bound_constants pipeline") {
    const auto m = testm::homogeneous_exp();
    const BoundConstants k = bound_constants(m, 0.5);

    CHECK(k.c6 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k.c5 == doctest::Approx(26.09348547661191).epsilon(1e-9));
    CHECK(k.y_hat == doctest::Approx(0.25).epsilon(1e-15));  // min{0.25, 1/4}
    CHECK(k.m_cutoff == 1);
    CHECK(k.big_delta == doctest::Approx(2.0).epsilon(1e-14));  // 1 + sup of 1

    // postcondition recheck
    CHECK(k.y_star > 0.0);
    CHECK(k.y_star <= k.y_hat);
    CHECK(k.y_hat <= k.delta / 2.0);
    const AlphaParams p{k.delta, k.c5, k.sup_eta_mgf, 1.0};
    CHECK(alpha(m, p, k.y_star) <= k.c6 / 4.0);
    CHECK(k.c4 == k.y_star);
    CHECK(k.c3 >= 1.0);
    CHECK(std::log(k.c3) == doctest::Approx(k.log_c3).epsilon(1e-12));

    // the boundary is tight: nudging y* up by a few tolerance units
    // breaks the alpha inequality (y* was chosen maximal)
    CHECK(alpha(m, p, std::min(k.y_hat, k.y_star * (1.0 + 1e-6))) > k.c6 / 4.0);

    // per-factor positivity from the proof's chain
    for (const StepLaw* law : m.schedule.all_laws()) {
        const double mi = mean(law->claim) - m.premium * mean(law->inter);
        CHECK(1.0 + k.y_star * (mi + alpha(m, p, k.y_star)) > 0.5);
    }
}

TEST_CASE("bound_constants on the inhomogeneous cycle") {
    const auto m = testm::two_cycle();
    const BoundConstants k = bound_constants(m, 1.0);
    CHECK(k.c6 == doctest::Approx(1.625).epsilon(1e-14));
    CHECK(k.y_hat == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(k.m_cutoff == 1);
    const AlphaParams p{k.delta, k.c5, k.sup_eta_mgf, 1.0};
    CHECK(alpha(m, p, k.y_star) <= k.c6 / 4.0);
    for (const StepLaw* law : m.schedule.all_laws()) {
        const double mi = mean(law->claim) - m.premium * mean(law->inter);
        CHECK(1.0 + k.y_star * (mi + alpha(m, p, k.y_star)) > 0.5);
    }
}

TEST_CASE("pipeline errors") {
    ModelConfig flat;
    flat.premium = 1.0;
    flat.gamma = 1.0;
    flat.schedule.cycle.push_back(
        {DistributionSpec::deterministic(1.0), DistributionSpec::deterministic(1.0)});
    CHECK_THROWS_AS(bound_constants(flat, 1.0), ModelError);

    CHECK_THROWS_AS(bound_constants(testm::homogeneous_exp(), 1.5), ModelError);  // MGF diverges
}

TEST_CASE("conservativeness: inflating the surrogate only weakens the bound") {
    const auto m = testm::two_cycle();
    double prev_y = 1e9;
    double prev_log_c3 = -1e300;
    for (double scale : {1.0, 2.0, 10.0}) {
        const BoundConstants k = bound_constants(m, 1.0, scale);
        CHECK(k.y_star <= prev_y + 1e-18);
        CHECK(k.log_c3 >= prev_log_c3 - 1e-12);
        prev_y = k.y_star;
        prev_log_c3 = k.log_c3;
    }
}

TEST_CASE("prefactor overflow stays usable in log space") {
    // weak drift pushes M near 2000 while Delta stays moderate, so
    // Delta^M overflows but ln c3 must not
    ModelConfig m;
    m.premium = 1.0;
    m.gamma = 1.0;
    m.schedule.cycle.push_back(
        {DistributionSpec::deterministic(1.998), DistributionSpec::deterministic(1.0)});
    m.schedule.cycle.push_back(
        {DistributionSpec::deterministic(0.0), DistributionSpec::deterministic(1.0)});
    const BoundConstants k = bound_constants(m, 1.0);
    CHECK(std::isinf(k.c3));
    CHECK(std::isfinite(k.log_c3));
    CHECK(k.log_c3 > 700.0);

    CHECK(bound_at(k, 0.0) == 1.0);
    const RuinBound b = ruin_bound(m, {});
    CHECK(std::isfinite(b.c2));
    CHECK(b.c2 > 0.0);
    // log-space evaluation stays exact where exp(log_c3) alone would not
    const double x1 = (k.log_c3 + 10.0) / k.c4;
    const double x2 = (k.log_c3 + 20.0) / k.c4;
    CHECK(bound_at(k, x1) == doctest::Approx(std::exp(-10.0)).epsilon(1e-9));
    CHECK(bound_at(k, x1) > bound_at(k, x2));
}

TEST_CASE("ruin_bound invariants") {
    const auto m = testm::homogeneous_exp();
    const RuinBound b = ruin_bound(m, {});
    CHECK(b.c1 == b.provenance.c4 / 2.0);
    CHECK(b.c2 == doctest::Approx(2.0 * b.provenance.log_c3 / b.provenance.c4).epsilon(1e-12));
    // e^{-c1 c2} = 1/c3, checked in logs
    CHECK(b.c1 * b.c2 == doctest::Approx(b.provenance.log_c3).epsilon(1e-12));
    // default delta is gamma
    CHECK(b.provenance.delta == m.gamma);

    CHECK(!bound_at(b, b.c2 * 0.5));  // not applicable below c2
    CHECK(*bound_at(b, b.c2) == doctest::Approx(std::exp(-b.c1 * b.c2)));
    CHECK(bound_at(b.provenance, 0.0) == 1.0);  // min{1, c3} with c3 >= 1

    CHECK_THROWS_AS(ruin_bound(m, {.delta = 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(ruin_bound(m, {.delta = 0.3, .grid_search = true}), std::invalid_argument);
}

TEST_CASE("delta grid search is deterministic and never worse") {
    const auto m = testm::two_cycle();
    const RuinBound plain = ruin_bound(m, {});
    const RuinBound grid1 = ruin_bound(m, {.grid_search = true});
    const RuinBound grid2 = ruin_bound(m, {.grid_search = true});
    CHECK(grid1.c1 == grid2.c1);
    CHECK(grid1.provenance.delta == grid2.provenance.delta);
    CHECK(grid1.c1 >= plain.c1 - 1e-15);
}

TEST_CASE("adjustment coefficient") {
    // (1-R)(1+2R) = 1 has the positive root R = 1/2
    const auto a = adjustment_coefficient(DistributionSpec::exponential(1.0),
                                          DistributionSpec::exponential(1.0), 2.0);
    CHECK(a.r == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(a.residual < 1e-10);
    CHECK(a.t_max == 1.0);
    CHECK(a.r > 0.0);
    CHECK(a.r < a.t_max);

    // e^{R} e^{-2R} = 1 has no positive root
    CHECK_THROWS_AS(adjustment_coefficient(DistributionSpec::deterministic(1.0),
                                           DistributionSpec::deterministic(2.0), 1.0),
                    ModelError);

    // zero net profit is rejected
    CHECK_THROWS_AS(adjustment_coefficient(DistributionSpec::exponential(1.0),
                                           DistributionSpec::deterministic(1.0), 1.0),
                    ModelError);

    // gamma claims: verified through the residual
    const auto g = adjustment_coefficient(DistributionSpec::gamma(2.0, 3.0),
                                          DistributionSpec::exponential(1.0), 2.0);
    CHECK(g.residual < 1e-10);
    CHECK(g.r > 0.0);
    CHECK(g.r < 3.0);

    // bounded-support pair with a genuine root
    const auto d = adjustment_coefficient(DistributionSpec::discrete({{0.0, 0.6}, {2.0, 0.4}}),
                                          DistributionSpec::deterministic(1.0), 1.0);
    CHECK(d.residual < 1e-10);
    // E e^{R(Z-1)}: 0.6 e^{-R} + 0.4 e^{R} = 1  =>  e^R = 3/2
    CHECK(d.r == doctest::Approx(std::log(1.5)).epsilon(1e-10));
}
