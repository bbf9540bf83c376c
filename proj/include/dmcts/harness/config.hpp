#pragma once

#include "dmcts/core/scoring.hpp"
#include "dmcts/core/types.hpp"
#include "dmcts/core/utility.hpp"
#include "dmcts/tree/planner.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmcts::harness {

/// Config validation reports every violated field at once.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

struct DmctsParams {
    int replicates = 50;
    double alpha_prior = 1.0;
    int iteration_multiplier = 1;
    bool fresh_tree = false;
    double artificial_probability = 0.0;
    std::vector<double> artificial_low;
    std::vector<double> artificial_high;
};

struct QParams {
    double learning_rate = 0.1;
    double epsilon = 0.1;
    std::optional<double> epsilon_decay;
    std::string signal = "raw";  // "raw" | "step-utility"
};

/// A fully resolved, reproducible experiment description. Every field is
/// echoed into the run metadata so results are self-describing.
struct ExperimentConfig {
    std::string experiment;
    std::string domain;
    nlohmann::json domain_config;  // loaded file merged with domain_overrides
    std::string algorithm;         // "dmcts" | "q-learning" | "scalarised-q"
    Criterion criterion = Criterion::ESR;
    nlohmann::json utility_spec;
    UtilityScoring scoring = UtilityScoring::Cumulative;
    int n_exec = 1;
    int episodes = 1;
    int runs = 10;
    std::uint64_t base_seed = 42;
    std::string output_dir = "out";
    int smoothing_window = 50;
    DmctsParams dmcts;
    QParams qlearning;

    std::vector<std::string> applied_overrides;
    nlohmann::json raw;  // the resolved JSON after overrides

    UtilityFunction make_utility() const;
    ArtificialReturnConfig artificial_config() const;
    /// Per-step learning budget in full policy executions.
    int executions_per_step() const;
};

/// Applies one dotted-path override ("dmcts.replicates=20") onto a JSON tree.
/// Values parse as JSON when possible, otherwise as strings.
void apply_override(nlohmann::json& config, const std::string& spec);

/// Parses and validates an experiment config from resolved JSON. Throws
/// ConfigError listing all violations.
ExperimentConfig parse_experiment_config(nlohmann::json j, const std::string& config_dir);

/// Loads a config file, applies overrides, validates.
ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<std::string>& overrides = {});

}  // namespace dmcts::harness
