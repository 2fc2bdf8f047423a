#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ruin/lundberg.hpp"
#include "ruin/schedule.hpp"

namespace ruin {

// One experiment per file. The schema is strict: unknown keys anywhere
// are rejected so a typo cannot silently change an experiment.
struct ExperimentConfig {
    ModelConfig model;
    std::vector<double> x_grid;
    std::int64_t horizon_n = 10000;
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::optional<double> delta_override;
    bool delta_grid_search = false;
    double surrogate_scale = 1.0;            // >= 1; inflates the truncation surrogate
    std::optional<double> lattice_pitch;     // oracle runs only
    std::int64_t oracle_n_max = 5000;
    std::int64_t oracle_lower_cutoff = 0;    // 0 = automatic depth
    std::optional<std::string> out;
};

ExperimentConfig parse_experiment(const nlohmann::json& j);  // throws ConfigError
ExperimentConfig load_experiment(const std::string& path);

nlohmann::json dist_to_json(const DistributionSpec& d);
DistributionSpec dist_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const ModelConfig& m);
ModelConfig model_from_json(const nlohmann::json& j);

// A bound certificate embeds the model and every intermediate constant so
// third parties can recompute each inequality.
nlohmann::json certificate_to_json(const RuinBound& b, const ModelConfig& m);

// Independent re-validation of a serialized certificate: recomputes the
// moment sup, c5, c6, y_hat, alpha(y_star), the M scan, and the prefactor
// from the embedded model and compares. Returns the list of
// discrepancies; empty means consistent. A certificate with any constant
// altered is rejected here before verify trusts it.
std::vector<std::string> recheck_certificate(const nlohmann::json& cert);

}  // namespace ruin
