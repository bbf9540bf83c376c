#include "dmcts/harness/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace dmcts::harness {

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out = "config invalid:";
    for (const auto& p : parts) out += "\n  - " + p;
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

void apply_override(nlohmann::json& config, const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) {
        throw ConfigError({"override '" + spec + "' is not of the form dotted.key=value"});
    }
    std::string path = spec.substr(0, eq);
    std::string value = spec.substr(eq + 1);

    nlohmann::json* node = &config;
    std::size_t pos = 0;
    while (true) {
        auto dot = path.find('.', pos);
        std::string key = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (key.empty()) {
            throw ConfigError({"override '" + spec + "' has an empty path segment"});
        }
        if (dot == std::string::npos) {
            nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

UtilityFunction ExperimentConfig::make_utility() const {
    const std::string kind = utility_spec.value("kind", "");
    if (kind == "linear") {
        auto w = utility_spec.at("weights").get<std::vector<double>>();
        return UtilityFunction::linear(Eigen::Map<const Eigen::VectorXd>(w.data(),
                                                                         static_cast<Eigen::Index>(w.size())));
    }
    if (kind == "exponential") return UtilityFunction::exponential_risk_averse();
    if (kind == "fishwood") return UtilityFunction::fishwood_min_floor();
    if (kind == "target-vector") {
        auto t = utility_spec.at("target").get<std::vector<double>>();
        return UtilityFunction::target_vector(Eigen::Map<const Eigen::VectorXd>(t.data(),
                                                                                static_cast<Eigen::Index>(t.size())));
    }
    throw ConfigError({"utility.kind '" + kind + "' unknown"});
}

ArtificialReturnConfig ExperimentConfig::artificial_config() const {
    ArtificialReturnConfig cfg;
    cfg.probability = dmcts.artificial_probability;
    if (!dmcts.artificial_low.empty()) {
        cfg.low = Eigen::Map<const Eigen::VectorXd>(dmcts.artificial_low.data(),
                                                    static_cast<Eigen::Index>(dmcts.artificial_low.size()));
        cfg.high = Eigen::Map<const Eigen::VectorXd>(dmcts.artificial_high.data(),
                                                     static_cast<Eigen::Index>(dmcts.artificial_high.size()));
    }
    return cfg;
}

int ExperimentConfig::executions_per_step() const {
    if (algorithm == "dmcts") return n_exec * dmcts.iteration_multiplier;
    return n_exec;
}

ExperimentConfig parse_experiment_config(nlohmann::json j, const std::string& config_dir) {
    std::vector<std::string> bad;
    ExperimentConfig cfg;
    cfg.raw = j;

    cfg.experiment = j.value("experiment", "");
    if (cfg.experiment.empty()) bad.push_back("experiment: missing or empty");

    cfg.domain = j.value("domain", "");
    if (cfg.domain != "risk-mdp" && cfg.domain != "fishwood" && cfg.domain != "redeed" &&
        cfg.domain != "ddst") {
        bad.push_back("domain: '" + cfg.domain + "' is not one of risk-mdp/fishwood/redeed/ddst");
    }

    cfg.algorithm = j.value("algorithm", "");
    if (cfg.algorithm != "dmcts" && cfg.algorithm != "q-learning" &&
        cfg.algorithm != "scalarised-q") {
        bad.push_back("algorithm: '" + cfg.algorithm +
                      "' is not one of dmcts/q-learning/scalarised-q");
    }

    std::string criterion = j.value("criterion", "esr");
    if (criterion == "esr") {
        cfg.criterion = Criterion::ESR;
    } else if (criterion == "ser") {
        cfg.criterion = Criterion::SER;
    } else {
        bad.push_back("criterion: '" + criterion + "' is not esr or ser");
    }

    std::string scoring = j.value("utility_scoring", "cumulative");
    if (scoring == "cumulative") {
        cfg.scoring = UtilityScoring::Cumulative;
    } else if (scoring == "per-step") {
        cfg.scoring = UtilityScoring::PerStep;
    } else {
        bad.push_back("utility_scoring: '" + scoring + "' is not cumulative or per-step");
    }

    if (!j.contains("utility") || !j["utility"].is_object() || !j["utility"].contains("kind")) {
        bad.push_back("utility: missing object with a 'kind'");
    } else {
        cfg.utility_spec = j["utility"];
        std::string kind = cfg.utility_spec.value("kind", "");
        if (kind != "linear" && kind != "exponential" && kind != "fishwood" &&
            kind != "target-vector") {
            bad.push_back("utility.kind: '" + kind + "' unknown");
        }
        if (kind == "linear" && !cfg.utility_spec.contains("weights")) {
            bad.push_back("utility.weights: required for linear utilities");
        }
        if (kind == "target-vector" && !cfg.utility_spec.contains("target")) {
            bad.push_back("utility.target: required for target-vector utilities");
        }
    }

    cfg.n_exec = j.value("n_exec", 0);
    if (cfg.n_exec < 1) bad.push_back("n_exec: must be >= 1");
    cfg.episodes = j.value("episodes", 0);
    if (cfg.episodes < 1) bad.push_back("episodes: must be >= 1");
    cfg.runs = j.value("runs", 10);
    if (cfg.runs < 1) bad.push_back("runs: must be >= 1");
    if (j.contains("base_seed")) cfg.base_seed = j["base_seed"].get<std::uint64_t>();
    cfg.output_dir = j.value("output_dir", "out");
    cfg.smoothing_window = j.value("smoothing_window", 50);
    if (cfg.smoothing_window < 1) bad.push_back("smoothing_window: must be >= 1");

    // Domain config: inline object or a file path, plus optional overrides.
    if (j.contains("domain_config") && j["domain_config"].is_object()) {
        cfg.domain_config = j["domain_config"];
    } else if (j.contains("domain_config")) {
        std::filesystem::path p = j["domain_config"].get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(config_dir) / p;
        std::ifstream in(p);
        if (!in) {
            bad.push_back("domain_config: cannot open " + p.string());
        } else {
            std::ostringstream ss;
            ss << in.rdbuf();
            cfg.domain_config = nlohmann::json::parse(ss.str(), nullptr, false);
            if (cfg.domain_config.is_discarded()) {
                bad.push_back("domain_config: " + p.string() + " is not valid JSON");
            }
        }
    } else {
        bad.push_back("domain_config: missing (inline object or file path)");
    }
    if (j.contains("domain_overrides") && cfg.domain_config.is_object()) {
        for (auto& [key, value] : j["domain_overrides"].items()) {
            cfg.domain_config[key] = value;
        }
    }

    if (j.contains("dmcts")) {
        const auto& d = j["dmcts"];
        cfg.dmcts.replicates = d.value("replicates", 50);
        cfg.dmcts.alpha_prior = d.value("alpha_prior", 1.0);
        cfg.dmcts.iteration_multiplier = d.value("iteration_multiplier", 1);
        cfg.dmcts.fresh_tree = d.value("fresh_tree", false);
        if (d.contains("artificial_returns")) {
            const auto& a = d["artificial_returns"];
            cfg.dmcts.artificial_probability = a.value("probability", 0.0);
            if (a.contains("low")) cfg.dmcts.artificial_low = a["low"].get<std::vector<double>>();
            if (a.contains("high")) cfg.dmcts.artificial_high = a["high"].get<std::vector<double>>();
        }
    }
    if (cfg.dmcts.replicates < 1) bad.push_back("dmcts.replicates: must be >= 1");
    if (!(cfg.dmcts.alpha_prior > 0.0)) bad.push_back("dmcts.alpha_prior: must be positive");
    if (cfg.dmcts.iteration_multiplier < 1) bad.push_back("dmcts.iteration_multiplier: must be >= 1");
    if (cfg.dmcts.artificial_probability < 0.0 || cfg.dmcts.artificial_probability > 1.0) {
        bad.push_back("dmcts.artificial_returns.probability: must be in [0,1]");
    }
    if (cfg.dmcts.artificial_probability > 0.0) {
        if (cfg.dmcts.artificial_low.size() != cfg.dmcts.artificial_high.size() ||
            cfg.dmcts.artificial_low.empty()) {
            bad.push_back("dmcts.artificial_returns: low/high bounds missing or mismatched");
        } else {
            for (std::size_t i = 0; i < cfg.dmcts.artificial_low.size(); ++i) {
                if (cfg.dmcts.artificial_low[i] > cfg.dmcts.artificial_high[i]) {
                    bad.push_back("dmcts.artificial_returns: low > high for objective " +
                                  std::to_string(i));
                }
            }
        }
    }

    if (j.contains("qlearning")) {
        const auto& q = j["qlearning"];
        cfg.qlearning.learning_rate = q.value("learning_rate", 0.1);
        cfg.qlearning.epsilon = q.value("epsilon", 0.1);
        if (q.contains("epsilon_decay") && !q["epsilon_decay"].is_null()) {
            cfg.qlearning.epsilon_decay = q["epsilon_decay"].get<double>();
        }
        cfg.qlearning.signal = q.value("signal", "raw");
    }
    if (!(cfg.qlearning.learning_rate > 0.0) || cfg.qlearning.learning_rate > 1.0) {
        bad.push_back("qlearning.learning_rate: must be in (0,1]");
    }
    if (cfg.qlearning.epsilon < 0.0 || cfg.qlearning.epsilon > 1.0) {
        bad.push_back("qlearning.epsilon: must be in [0,1]");
    }
    if (cfg.qlearning.epsilon_decay.has_value() &&
        (*cfg.qlearning.epsilon_decay <= 0.0 || *cfg.qlearning.epsilon_decay > 1.0)) {
        bad.push_back("qlearning.epsilon_decay: must be in (0,1]");
    }
    if (cfg.qlearning.signal != "raw" && cfg.qlearning.signal != "step-utility") {
        bad.push_back("qlearning.signal: must be raw or step-utility");
    }

    if (cfg.algorithm == "scalarised-q" && cfg.criterion != Criterion::SER) {
        bad.push_back("criterion: scalarised-q runs under ser");
    }

    if (!bad.empty()) throw ConfigError(std::move(bad));
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"config: cannot open " + path});
    std::ostringstream ss;
    ss << in.rdbuf();
    nlohmann::json j = nlohmann::json::parse(ss.str(), nullptr, false);
    if (j.is_discarded()) throw ConfigError({"config: " + path + " is not valid JSON"});

    for (const auto& o : overrides) apply_override(j, o);

    auto cfg = parse_experiment_config(
        j, std::filesystem::path(path).parent_path().string());
    cfg.applied_overrides = overrides;
    return cfg;
}

}  // namespace dmcts::harness
