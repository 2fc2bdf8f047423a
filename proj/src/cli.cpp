#include "ruin/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ruin/config.hpp"
#include "ruin/errors.hpp"
#include "ruin/oracle.hpp"
#include "ruin/sim.hpp"

namespace ruin::cli {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFail = 1;   // condition or assertion failure
constexpr int kUsage = 2;  // malformed config or flags

struct CommonFlags {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<double> delta;
    bool delta_grid = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--out", f.out, "output path (default: stdout)");
    cmd->add_option("--seed", f.seed, "override the config seed");
    cmd->add_option("--workers", f.workers, "override the config worker count");
    cmd->add_option("--delta", f.delta, "override delta for the constants pipeline");
    cmd->add_flag("--delta-grid", f.delta_grid, "grid-search delta in (0, gamma]");
}

ExperimentConfig load_with_overrides(const CommonFlags& f) {
    ExperimentConfig cfg = load_experiment(f.config_path);
    if (f.seed) cfg.seed = *f.seed;
    if (f.workers) {
        if (*f.workers < 1) throw ConfigError("--workers must be >= 1");
        cfg.workers = *f.workers;
    }
    if (f.delta) {
        if (!(*f.delta > 0.0 && *f.delta <= cfg.model.gamma))
            throw ConfigError("--delta must lie in (0, gamma]");
        cfg.delta_override = *f.delta;
    }
    if (f.delta_grid) cfg.delta_grid_search = true;
    if (f.out) cfg.out = *f.out;
    if (cfg.delta_override && cfg.delta_grid_search)
        throw ConfigError("delta override and delta grid search are mutually exclusive");
    return cfg;
}

void write_out(const ExperimentConfig& cfg, const std::string& text) {
    if (cfg.out) {
        std::ofstream out(*cfg.out);
        if (!out) throw ConfigError("cannot open output path '" + *cfg.out + "'");
        out << text;
    } else {
        std::cout << text;
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

json report_to_json(const ConditionReport& r) {
    json decay = json::array();
    for (const auto& [u, v] : r.c2_decay) decay.push_back({{"u", u}, {"sup_trunc_mean", v}});
    return {{"c1_holds", r.c1_holds}, {"c1_sup_mgf", r.c1_sup_mgf},
            {"c2_holds", r.c2_holds}, {"c2_decay", decay},
            {"c3_holds", r.c3_holds}, {"cycle_drift", r.drift},
            {"all_hold", r.all_hold()}, {"violations", r.violations}};
}

std::string estimates_to_csv(const std::vector<RuinEstimate>& rows) {
    std::ostringstream os;
    os << "x,trials,hits,psi_hat,ci_low,ci_high,horizon_n,seed\n";
    for (const RuinEstimate& e : rows) {
        os << fmt(e.x) << ',' << e.trials << ',' << e.hits << ',' << fmt(e.psi_hat) << ','
           << fmt(e.ci_low) << ',' << fmt(e.ci_high) << ',' << e.horizon_n << ',' << e.seed
           << '\n';
    }
    return os.str();
}

json estimates_to_json(const std::vector<RuinEstimate>& rows) {
    json arr = json::array();
    for (const RuinEstimate& e : rows) {
        arr.push_back({{"x", e.x},
                       {"trials", e.trials},
                       {"hits", e.hits},
                       {"psi_hat", e.psi_hat},
                       {"ci_low", e.ci_low},
                       {"ci_high", e.ci_high},
                       {"horizon_n", e.horizon_n},
                       {"seed", e.seed},
                       {"workers", e.worker_count},
                       {"near_horizon_frac", e.near_horizon_frac}});
    }
    return arr;
}

BoundOptions bound_options(const ExperimentConfig& cfg) {
    BoundOptions opts;
    opts.delta = cfg.delta_override;
    opts.grid_search = cfg.delta_grid_search;
    opts.surrogate_scale = cfg.surrogate_scale;
    return opts;
}

int cmd_check(const ExperimentConfig& cfg) {
    const ConditionReport r = check_conditions(cfg.model);
    write_out(cfg, report_to_json(r).dump(2) + "\n");
    return r.all_hold() ? kOk : kFail;
}

int cmd_bound(const ExperimentConfig& cfg) {
    const ConditionReport r = check_conditions(cfg.model);
    if (!r.all_hold()) {
        for (const std::string& v : r.violations) std::cerr << "condition failed: " << v << "\n";
        return kFail;
    }
    const RuinBound b = ruin_bound(cfg.model, bound_options(cfg));
    const json cert = certificate_to_json(b, cfg.model);
    const auto problems = recheck_certificate(cert);
    for (const std::string& p : problems) std::cerr << "certificate recheck: " << p << "\n";
    if (!problems.empty()) return kFail;
    write_out(cfg, cert.dump(2) + "\n");
    return kOk;
}

int cmd_simulate(const ExperimentConfig& cfg) {
    if (cfg.x_grid.empty()) throw ConfigError("simulate needs a nonempty x_grid");
    const auto rows = estimate_ruin(cfg.model, cfg.x_grid, cfg.horizon_n, cfg.trials, cfg.seed,
                                    cfg.workers);
    for (const RuinEstimate& e : rows) {
        if (e.near_horizon_frac > 1e-3)
            std::cerr << "warning: at x = " << e.x << ", " << e.near_horizon_frac * 100.0
                      << "% of surviving paths ended near the barrier; consider a larger "
                         "horizon_n\n";
    }
    write_out(cfg, estimates_to_csv(rows));
    return kOk;
}

int cmd_verify(const ExperimentConfig& cfg) {
    if (cfg.x_grid.empty()) throw ConfigError("verify needs a nonempty x_grid");
    const ConditionReport r = check_conditions(cfg.model);
    if (!r.all_hold()) {
        for (const std::string& v : r.violations) std::cerr << "condition failed: " << v << "\n";
        return kFail;
    }
    const RuinBound b = ruin_bound(cfg.model, bound_options(cfg));
    const json cert = certificate_to_json(b, cfg.model);
    const auto problems = recheck_certificate(cert);
    for (const std::string& p : problems) std::cerr << "certificate recheck: " << p << "\n";
    if (!problems.empty()) return kFail;

    const auto rows = estimate_ruin(cfg.model, cfg.x_grid, cfg.horizon_n, cfg.trials, cfg.seed,
                                    cfg.workers);

    bool all_pass = true;
    json checks = json::array();
    for (const RuinEstimate& e : rows) {
        const double global_bound = bound_at(b.provenance, e.x);
        const bool global_pass = e.ci_high <= global_bound;
        const auto tail_bound = bound_at(b, e.x);
        const bool tail_pass = !tail_bound || e.ci_high <= *tail_bound;
        all_pass = all_pass && global_pass && tail_pass;
        json row = {{"x", e.x},
                    {"psi_hat", e.psi_hat},
                    {"ci_high", e.ci_high},
                    {"global_bound", global_bound},
                    {"global_margin", global_bound - e.ci_high},
                    {"global_pass", global_pass}};
        if (tail_bound) {
            row["tail_bound"] = *tail_bound;
            row["tail_margin"] = *tail_bound - e.ci_high;
            row["tail_pass"] = tail_pass;
        } else {
            row["tail_bound"] = nullptr;  // x below c2: not applicable
        }
        checks.push_back(row);
    }

    json report = {{"certificate", cert},
                   {"estimates", estimates_to_json(rows)},
                   {"checks", checks},
                   {"all_pass", all_pass}};
    write_out(cfg, report.dump(2) + "\n");
    return all_pass ? kOk : kFail;
}

int cmd_adjustment(const ExperimentConfig& cfg) {
    const Schedule& s = cfg.model.schedule;
    if (!s.prefix.empty() || s.cycle.size() != 1)
        throw ConfigError("adjustment expects a single step law: empty prefix, cycle of one");
    const StepLaw& law = s.cycle.front();
    const AdjustmentCoefficient a =
        adjustment_coefficient(law.claim, law.inter, cfg.model.premium);
    json out = {{"r", a.r}, {"residual", a.residual}};
    if (std::isfinite(a.t_max))
        out["t_max"] = a.t_max;
    else
        out["t_max"] = nullptr;
    write_out(cfg, out.dump(2) + "\n");
    return kOk;
}

int cmd_oracle(const ExperimentConfig& cfg) {
    if (!cfg.lattice_pitch) throw ConfigError("oracle needs 'lattice_pitch' in the config");
    if (cfg.x_grid.empty()) throw ConfigError("oracle needs a nonempty x_grid");
    const LatticeModel lm = make_lattice(cfg.model, *cfg.lattice_pitch);
    std::ostringstream os;
    os << "x,n_max,prob,cutoff_mass,lower_cutoff\n";
    for (double x : cfg.x_grid) {
        const SupProbResult res =
            exact_sup_prob(lm, x, cfg.oracle_n_max, cfg.oracle_lower_cutoff);
        os << fmt(x) << ',' << cfg.oracle_n_max << ',' << fmt(res.prob) << ','
           << fmt(res.cutoff_mass) << ',' << res.lower_cutoff << '\n';
    }
    write_out(cfg, os.str());
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"inhomogeneous renewal risk model: simulation, exact oracles, and "
                 "Lundberg-type bound certificates"};
    app.require_subcommand(1);

    CommonFlags flags;
    CLI::App* check = app.add_subcommand("check", "evaluate conditions (C1)-(C3)");
    CLI::App* bound = app.add_subcommand("bound", "emit the bound certificate");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo ruin estimates (CSV)");
    CLI::App* verify = app.add_subcommand("verify", "bound + simulate + margin report");
    CLI::App* adjustment = app.add_subcommand("adjustment", "adjustment coefficient R");
    CLI::App* oracle = app.add_subcommand("oracle", "exact lattice first-passage (CSV)");
    for (CLI::App* cmd : {check, bound, simulate, verify, adjustment, oracle})
        add_common(cmd, flags);

    std::vector<const char*> argv;
    argv.push_back("ruinbound");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    }

    try {
        const ExperimentConfig cfg = load_with_overrides(flags);
        if (check->parsed()) return cmd_check(cfg);
        if (bound->parsed()) return cmd_bound(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (adjustment->parsed()) return cmd_adjustment(cfg);
        if (oracle->parsed()) return cmd_oracle(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}

}  // namespace ruin::cli
