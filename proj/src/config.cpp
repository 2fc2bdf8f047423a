#include "ruin/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ruin/errors.hpp"

namespace ruin {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void expect_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) fail(where + ": expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) fail(where + ": unknown key '" + key + "'");
}

double get_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) fail(where + ": missing key '" + key + "'");
    if (!j.at(key).is_number()) fail(where + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

std::int64_t get_integer(const json& j, const std::string& key, const std::string& where) {
    if (!j.at(key).is_number_integer() && !j.at(key).is_number_unsigned())
        fail(where + "." + key + ": expected an integer");
    return j.at(key).get<std::int64_t>();
}

}  // namespace

DistributionSpec dist_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        fail("distribution: expected an object with a 'type' string");
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "exponential") {
            expect_keys(j, {"type", "rate"}, "exponential");
            return DistributionSpec::exponential(get_number(j, "rate", "exponential"));
        }
        if (type == "gamma") {
            expect_keys(j, {"type", "shape", "rate"}, "gamma");
            return DistributionSpec::gamma(get_number(j, "shape", "gamma"),
                                           get_number(j, "rate", "gamma"));
        }
        if (type == "uniform") {
            expect_keys(j, {"type", "lo", "hi"}, "uniform");
            return DistributionSpec::uniform(get_number(j, "lo", "uniform"),
                                             get_number(j, "hi", "uniform"));
        }
        if (type == "deterministic") {
            expect_keys(j, {"type", "value"}, "deterministic");
            return DistributionSpec::deterministic(get_number(j, "value", "deterministic"));
        }
        if (type == "discrete") {
            expect_keys(j, {"type", "atoms"}, "discrete");
            if (!j.contains("atoms") || !j.at("atoms").is_array())
                fail("discrete: 'atoms' must be an array of [value, prob] pairs");
            std::vector<Atom> atoms;
            for (const auto& a : j.at("atoms")) {
                if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
                    fail("discrete: each atom must be a [value, prob] pair");
                atoms.push_back({a[0].get<double>(), a[1].get<double>()});
            }
            return DistributionSpec::discrete(std::move(atoms));
        }
    } catch (const std::invalid_argument& e) {
        fail(std::string("distribution: ") + e.what());
    }
    fail("unsupported distribution type '" + type +
         "' (supported: exponential, gamma, uniform, deterministic, discrete; "
         "heavy-tailed laws are not supported because the exponential bound does not apply)");
}

json dist_to_json(const DistributionSpec& d) {
    switch (d.kind()) {
        case DistKind::Exponential: return {{"type", "exponential"}, {"rate", d.rate()}};
        case DistKind::Gamma:
            return {{"type", "gamma"}, {"shape", d.shape()}, {"rate", d.rate()}};
        case DistKind::Uniform: return {{"type", "uniform"}, {"lo", d.lo()}, {"hi", d.hi()}};
        case DistKind::Deterministic: return {{"type", "deterministic"}, {"value", d.value()}};
        case DistKind::DiscreteFinite: {
            json atoms = json::array();
            for (const Atom& a : d.atoms()) atoms.push_back({a.value, a.prob});
            return {{"type", "discrete"}, {"atoms", atoms}};
        }
    }
    return {};
}

namespace {

StepLaw step_law_from_json(const json& j, const std::string& where) {
    expect_keys(j, {"claim", "inter"}, where);
    if (!j.contains("claim") || !j.contains("inter"))
        fail(where + ": each step law needs 'claim' and 'inter'");
    return {dist_from_json(j.at("claim")), dist_from_json(j.at("inter"))};
}

json step_law_to_json(const StepLaw& law) {
    return {{"claim", dist_to_json(law.claim)}, {"inter", dist_to_json(law.inter)}};
}

}  // namespace

ModelConfig model_from_json(const json& j) {
    expect_keys(j, {"premium", "gamma", "schedule"}, "model");
    ModelConfig m;
    m.premium = get_number(j, "premium", "model");
    m.gamma = get_number(j, "gamma", "model");
    if (!j.contains("schedule")) fail("model: missing key 'schedule'");
    const json& sch = j.at("schedule");
    expect_keys(sch, {"prefix", "cycle"}, "model.schedule");
    if (sch.contains("prefix")) {
        if (!sch.at("prefix").is_array()) fail("model.schedule.prefix: expected an array");
        for (const auto& s : sch.at("prefix"))
            m.schedule.prefix.push_back(step_law_from_json(s, "model.schedule.prefix"));
    }
    if (!sch.contains("cycle") || !sch.at("cycle").is_array() || sch.at("cycle").empty())
        fail("model.schedule.cycle: expected a nonempty array");
    for (const auto& s : sch.at("cycle"))
        m.schedule.cycle.push_back(step_law_from_json(s, "model.schedule.cycle"));
    try {
        validate(m);
    } catch (const std::invalid_argument& e) {
        fail(std::string("model: ") + e.what());
    }
    return m;
}

json model_to_json(const ModelConfig& m) {
    json prefix = json::array();
    for (const StepLaw& law : m.schedule.prefix) prefix.push_back(step_law_to_json(law));
    json cycle = json::array();
    for (const StepLaw& law : m.schedule.cycle) cycle.push_back(step_law_to_json(law));
    return {{"premium", m.premium},
            {"gamma", m.gamma},
            {"schedule", {{"prefix", prefix}, {"cycle", cycle}}}};
}

ExperimentConfig parse_experiment(const json& j) {
    expect_keys(j,
                {"model", "x_grid", "horizon_n", "trials", "seed", "workers", "delta_override",
                 "delta_grid_search", "surrogate_scale", "lattice_pitch", "oracle_n_max",
                 "oracle_lower_cutoff", "out"},
                "experiment");
    ExperimentConfig cfg;
    if (!j.contains("model")) fail("experiment: missing key 'model'");
    cfg.model = model_from_json(j.at("model"));

    if (j.contains("x_grid")) {
        if (!j.at("x_grid").is_array()) fail("experiment.x_grid: expected an array");
        for (const auto& v : j.at("x_grid")) {
            if (!v.is_number()) fail("experiment.x_grid: entries must be numbers");
            const double x = v.get<double>();
            if (!(std::isfinite(x) && x >= 0.0))
                fail("experiment.x_grid: entries must be finite and >= 0");
            cfg.x_grid.push_back(x);
        }
    }
    if (j.contains("horizon_n")) {
        cfg.horizon_n = get_integer(j, "horizon_n", "experiment");
        if (cfg.horizon_n < 1) fail("experiment.horizon_n: must be >= 1");
    }
    if (j.contains("trials")) {
        cfg.trials = get_integer(j, "trials", "experiment");
        if (cfg.trials < 1) fail("experiment.trials: must be >= 1");
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned())
            fail("experiment.seed: expected an integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("workers")) {
        const std::int64_t w = get_integer(j, "workers", "experiment");
        if (w < 1) fail("experiment.workers: must be >= 1");
        cfg.workers = static_cast<int>(w);
    }
    if (j.contains("delta_override")) {
        const double d = get_number(j, "delta_override", "experiment");
        if (!(d > 0.0 && d <= cfg.model.gamma))
            fail("experiment.delta_override: must lie in (0, gamma]");
        cfg.delta_override = d;
    }
    if (j.contains("delta_grid_search")) {
        if (!j.at("delta_grid_search").is_boolean())
            fail("experiment.delta_grid_search: expected a boolean");
        cfg.delta_grid_search = j.at("delta_grid_search").get<bool>();
    }
    if (j.contains("surrogate_scale")) {
        const double s = get_number(j, "surrogate_scale", "experiment");
        if (!(s >= 1.0)) fail("experiment.surrogate_scale: must be >= 1");
        cfg.surrogate_scale = s;
    }
    if (j.contains("lattice_pitch")) {
        const double h = get_number(j, "lattice_pitch", "experiment");
        if (!(std::isfinite(h) && h > 0.0)) fail("experiment.lattice_pitch: must be positive");
        cfg.lattice_pitch = h;
    }
    if (j.contains("oracle_n_max")) {
        cfg.oracle_n_max = get_integer(j, "oracle_n_max", "experiment");
        if (cfg.oracle_n_max < 1) fail("experiment.oracle_n_max: must be >= 1");
    }
    if (j.contains("oracle_lower_cutoff")) {
        cfg.oracle_lower_cutoff = get_integer(j, "oracle_lower_cutoff", "experiment");
        if (cfg.oracle_lower_cutoff < 0) fail("experiment.oracle_lower_cutoff: must be >= 0");
    }
    if (j.contains("out")) {
        if (!j.at("out").is_string()) fail("experiment.out: expected a string path");
        cfg.out = j.at("out").get<std::string>();
    }
    if (cfg.delta_override && cfg.delta_grid_search)
        fail("experiment: delta_override and delta_grid_search are mutually exclusive");
    return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_experiment(j);
}

json certificate_to_json(const RuinBound& b, const ModelConfig& m) {
    const BoundConstants& k = b.provenance;
    json cert;
    cert["model"] = model_to_json(m);
    cert["delta"] = k.delta;
    cert["sup_eta_mgf"] = k.sup_eta_mgf;
    cert["c5"] = k.c5;
    cert["c6"] = k.c6;
    cert["neg_part_mean_bound"] = k.neg_part_bound;
    cert["y_hat"] = k.y_hat;
    cert["y_star"] = k.y_star;
    cert["alpha_at_y_star"] = k.alpha_at_y_star;
    cert["M"] = k.m_cutoff;
    cert["big_delta"] = k.big_delta;
    cert["c3"] = k.c3;  // serialized as null if it overflowed; ln_c3 is authoritative
    cert["ln_c3"] = k.log_c3;
    cert["c4"] = k.c4;
    cert["c1"] = b.c1;
    cert["c2"] = b.c2;
    cert["c7"] = k.c3;
    cert["c8"] = k.c4;
    cert["surrogate_scale"] = k.surrogate_scale;
    return cert;
}

std::vector<std::string> recheck_certificate(const json& cert) {
    std::vector<std::string> problems;
    auto complain = [&problems](const std::string& msg) { problems.push_back(msg); };
    auto close_rel = [](double a, double b, double tol) {
        return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
    };

    ModelConfig m;
    BoundConstants k;
    double c1 = 0.0, c2 = 0.0;
    try {
        m = model_from_json(cert.at("model"));
        k.delta = cert.at("delta").get<double>();
        k.sup_eta_mgf = cert.at("sup_eta_mgf").get<double>();
        k.c5 = cert.at("c5").get<double>();
        k.c6 = cert.at("c6").get<double>();
        k.neg_part_bound = cert.at("neg_part_mean_bound").get<double>();
        k.y_hat = cert.at("y_hat").get<double>();
        k.y_star = cert.at("y_star").get<double>();
        k.alpha_at_y_star = cert.at("alpha_at_y_star").get<double>();
        k.m_cutoff = cert.at("M").get<std::int64_t>();
        k.big_delta = cert.at("big_delta").get<double>();
        k.log_c3 = cert.at("ln_c3").get<double>();
        k.c4 = cert.at("c4").get<double>();
        k.surrogate_scale = cert.at("surrogate_scale").get<double>();
        c1 = cert.at("c1").get<double>();
        c2 = cert.at("c2").get<double>();
    } catch (const std::exception& e) {
        complain(std::string("certificate is incomplete: ") + e.what());
        return problems;
    }

    auto sup = sup_eta_mgf(m, k.delta);
    if (!sup)
        complain("sup_eta_mgf diverges at the recorded delta");
    else if (!close_rel(*sup, k.sup_eta_mgf, 1e-9))
        complain("sup_eta_mgf does not match the recomputed value");

    if (!close_rel(c5_of_delta(k.delta), k.c5, 1e-8)) complain("c5 does not match c5(delta)");
    if (!close_rel(-cycle_drift(m), k.c6, 1e-9)) complain("c6 does not match -cycle_drift");
    if (!close_rel(neg_part_mean_bound(m), k.neg_part_bound, 1e-9))
        complain("neg_part_mean_bound does not match");
    if (!close_rel(std::min(k.delta / 2.0, 1.0 / (2.0 * k.neg_part_bound)), k.y_hat, 1e-9))
        complain("y_hat does not match min{delta/2, 1/(2 neg_part_bound)}");

    if (!(k.y_star > 0.0 && k.y_star <= k.y_hat)) complain("y_star outside (0, y_hat]");
    const AlphaParams ap{k.delta, k.c5, k.sup_eta_mgf, k.surrogate_scale};
    const double a_recomputed = alpha(m, ap, k.y_star);
    if (!(a_recomputed <= k.c6 / 4.0)) complain("alpha(y_star) exceeds c6/4 on recheck");
    if (!close_rel(a_recomputed, k.alpha_at_y_star, 1e-9))
        complain("alpha_at_y_star does not match the recomputed value");

    // M: direct scan over the certified window plus minimality at M itself
    if (k.m_cutoff < 1) complain("M must be >= 1");
    if (certify_m_cutoff(m, k.c6) != k.m_cutoff) complain("M does not match the recomputed cutoff");
    {
        const std::int64_t L = static_cast<std::int64_t>(m.schedule.cycle.size());
        const std::int64_t p = static_cast<std::int64_t>(m.schedule.prefix.size());
        double big_b = 0.0, s = 0.0;
        for (std::int64_t j = 1; j <= p + 2 * L; ++j) {
            s += step_mean(m, static_cast<std::size_t>(j));
            big_b = std::max(big_b, std::abs(s + static_cast<double>(j) * k.c6));
        }
        std::int64_t scan_to = k.m_cutoff + 10 * L +
                               static_cast<std::int64_t>(std::ceil(2.0 * big_b / k.c6));
        scan_to = std::min<std::int64_t>(scan_to, k.m_cutoff + 10'000'000);
        s = 0.0;
        for (std::int64_t j = 1; j <= scan_to; ++j) {
            s += step_mean(m, static_cast<std::size_t>(j));
            const bool viol = s / static_cast<double>(j) > -k.c6 / 2.0;
            if (j > k.m_cutoff && viol) {
                complain("running average violates -c6/2 beyond M");
                break;
            }
            if (j == k.m_cutoff && k.m_cutoff > 1 && !viol)
                complain("M is not minimal: no violation at k = M");
        }
    }

    if (!close_rel(k.big_delta, 1.0 + k.sup_eta_mgf, 1e-12)) complain("big_delta != 1 + sup");
    if (!close_rel(bound_prefactor_log(k.big_delta, k.m_cutoff, k.y_star, k.c6), k.log_c3, 1e-9))
        complain("ln_c3 does not match the prefactor formula");
    if (!close_rel(c1, k.c4 / 2.0, 1e-12)) complain("c1 != c4/2");
    if (!close_rel(c2, std::max(0.0, 2.0 * k.log_c3 / k.c4), 1e-9))
        complain("c2 != max{0, 2 ln(c3)/c4}");
    if (!close_rel(k.c4, k.y_star, 1e-15)) complain("c4 != y_star");

    return problems;
}

}  // namespace ruin
