#include "dmcts/envs/redeed.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dmcts::envs {

namespace {

GeneratorCostCoefficients parse_cost(const nlohmann::json& j) {
    GeneratorCostCoefficients c;
    c.a = j.at("a").get<double>();
    c.b = j.at("b").get<double>();
    c.c = j.at("c").get<double>();
    c.d = j.value("d", 0.0);
    c.e = j.value("e", 0.0);
    return c;
}

GeneratorEmissionCoefficients parse_emissions(const nlohmann::json& j) {
    GeneratorEmissionCoefficients e;
    e.scale = j.value("scale", 1.0);
    e.a = j.at("a").get<double>();
    e.b = j.at("b").get<double>();
    e.gamma = j.at("gamma").get<double>();
    e.eta = j.value("eta", 0.0);
    e.delta = j.value("delta", 0.0);
    return e;
}

}  // namespace

RedeedConfig RedeedConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("redeed config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

RedeedConfig RedeedConfig::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RedeedConfig cfg;
    cfg.horizon = j.value("horizon", 24);
    cfg.demand = j.at("demand").get<std::vector<double>>();
    cfg.slack_unit = j.value("slack_unit", 1);
    cfg.agent_unit = j.value("agent_unit", 3);
    cfg.wind_unit = j.value("wind_unit", 4);
    cfg.action_settings = j.value("action_settings", 11);
    cfg.penalty_constant = j.value("penalty_constant", 1e6);
    for (const auto& u : j.at("units")) {
        GeneratorSpec g;
        g.id = u.at("id").get<int>();
        g.p_min = u.at("p_min").get<double>();
        g.p_max = u.at("p_max").get<double>();
        g.ramp_up = u.value("ramp_up", 1e18);
        g.ramp_down = u.value("ramp_down", 1e18);
        g.cost = parse_cost(u.at("cost"));
        g.emissions = parse_emissions(u.at("emissions"));
        cfg.units.push_back(g);
    }
    cfg.baseline_power = j.at("baseline_power").get<std::vector<std::vector<double>>>();
    if (j.contains("initial_agent_power")) {
        cfg.initial_agent_power = j["initial_agent_power"].get<double>();
    } else {
        cfg.initial_agent_power = cfg.baseline_power.at(
            static_cast<std::size_t>(cfg.unit_index(cfg.agent_unit)))[0];
    }
    if (j.contains("storm")) {
        const auto& s = j["storm"];
        cfg.storm.first_hour = s.value("first_hour", 16);
        cfg.storm.last_hour = s.value("last_hour", 24);
        cfg.storm.p_low = s.value("p_low", 0.15);
        cfg.storm.p_optimal = s.value("p_optimal", 0.70);
        cfg.storm.p_high = s.value("p_high", 0.15);
        cfg.storm.low_factor = s.value("low_factor", 0.75);
        cfg.storm.high_factor = s.value("high_factor", 1.25);
    }
    cfg.validate();
    return cfg;
}

int RedeedConfig::unit_index(int id) const {
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (units[i].id == id) return static_cast<int>(i);
    }
    throw contract_violation("redeed: unknown generator id " + std::to_string(id));
}

void RedeedConfig::validate() const {
    if (horizon < 1) throw contract_violation("redeed config: horizon must be >= 1");
    if (static_cast<int>(demand.size()) != horizon) {
        throw contract_violation("redeed config: demand length != horizon");
    }
    if (units.empty()) throw contract_violation("redeed config: no generators");
    for (const auto& g : units) {
        if (g.p_min > g.p_max) throw contract_violation("redeed config: p_min > p_max for unit " +
                                                        std::to_string(g.id));
        if (g.ramp_up < 0.0 || g.ramp_down < 0.0) {
            throw contract_violation("redeed config: negative ramp limit for unit " + std::to_string(g.id));
        }
    }
    int slack = unit_index(slack_unit);
    int agent = unit_index(agent_unit);
    int wind = unit_index(wind_unit);
    if (slack == agent || slack == wind || agent == wind) {
        throw contract_violation("redeed config: slack/agent/wind must be distinct units");
    }
    if (action_settings < 2) throw contract_violation("redeed config: need >= 2 action settings");
    if (penalty_constant <= 0.0) throw contract_violation("redeed config: penalty constant must be positive");
    if (baseline_power.size() != units.size()) {
        throw contract_violation("redeed config: baseline_power row count != unit count");
    }
    for (std::size_t n = 0; n < units.size(); ++n) {
        if (static_cast<int>(baseline_power[n].size()) != horizon) {
            throw contract_violation("redeed config: baseline_power row length != horizon for unit " +
                                     std::to_string(units[n].id));
        }
    }
    double psum = storm.p_low + storm.p_optimal + storm.p_high;
    if (std::abs(psum - 1.0) > 1e-9) {
        throw contract_violation("redeed config: storm probabilities do not sum to 1");
    }
    if (storm.first_hour < 1 || storm.last_hour > horizon || storm.first_hour > storm.last_hour) {
        throw contract_violation("redeed config: storm window outside the day");
    }
    // Scheduled units must respect their own limits, including the scaled
    // wind band, so the only runtime violations come from the agent and slack.
    for (std::size_t n = 0; n < units.size(); ++n) {
        if (static_cast<int>(n) == slack) continue;
        const auto& g = units[n];
        for (int m = 0; m < horizon; ++m) {
            double p = baseline_power[n][static_cast<std::size_t>(m)];
            double lo = p, hi = p;
            if (static_cast<int>(n) == wind && m + 1 >= storm.first_hour && m + 1 <= storm.last_hour) {
                lo = p * storm.low_factor;
                hi = p * storm.high_factor;
            }
            if (lo < g.p_min - 1e-6 || hi > g.p_max + 1e-6) {
                throw contract_violation("redeed config: baseline power outside limits for unit " +
                                         std::to_string(g.id) + " at hour " + std::to_string(m + 1));
            }
        }
    }
}

double redeed_cost(const GeneratorSpec& g, double power) {
    const auto& c = g.cost;
    double valve = std::abs(c.d * std::sin(c.e * (g.p_min - power)));
    return c.a + c.b * power + c.c * power * power + valve;
}

double redeed_emissions(const GeneratorSpec& g, double power) {
    const auto& e = g.emissions;
    return e.scale * (e.a + e.b * power + e.gamma * power * power + e.eta * std::exp(e.delta * power));
}

RedeedEnv::RedeedEnv(RedeedConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    slack_idx_ = cfg_.unit_index(cfg_.slack_unit);
    agent_idx_ = cfg_.unit_index(cfg_.agent_unit);
    wind_idx_ = cfg_.unit_index(cfg_.wind_unit);
    Rng dummy(0);
    reset(dummy);
}

double RedeedEnv::setting_power(int action) const {
    const auto& g = cfg_.units[static_cast<std::size_t>(agent_idx_)];
    double span = g.p_max - g.p_min;
    return g.p_min + span * static_cast<double>(action) / static_cast<double>(cfg_.action_settings - 1);
}

double RedeedEnv::cost_for_unit(int id, double power) const {
    return redeed_cost(cfg_.units[static_cast<std::size_t>(cfg_.unit_index(id))], power);
}

double RedeedEnv::emissions_for_unit(int id, double power) const {
    int idx = cfg_.unit_index(id);
    if (idx == wind_idx_) return 0.0;
    return redeed_emissions(cfg_.units[static_cast<std::size_t>(idx)], power);
}

void RedeedEnv::reset(Rng&) {
    hour_ = 0;
    prev_powers_.assign(cfg_.units.size(), 0.0);
    for (std::size_t n = 0; n < cfg_.units.size(); ++n) {
        prev_powers_[n] = cfg_.baseline_power[n][0];
    }
    prev_powers_[static_cast<std::size_t>(agent_idx_)] = cfg_.initial_agent_power;

    const auto& g = cfg_.units[static_cast<std::size_t>(agent_idx_)];
    double span = g.p_max - g.p_min;
    double frac = span > 0.0 ? (cfg_.initial_agent_power - g.p_min) / span : 0.0;
    prev_setting_ = static_cast<int>(std::lround(frac * (cfg_.action_settings - 1)));
    prev_setting_ = std::clamp(prev_setting_, 0, cfg_.action_settings - 1);
}

std::uint64_t RedeedEnv::state_key() const {
    return static_cast<std::uint64_t>(hour_) * 64ull + static_cast<std::uint64_t>(prev_setting_);
}

double RedeedEnv::sample_wind_factor(int hour, Rng& rng) const {
    const auto& s = cfg_.storm;
    if (hour + 1 < s.first_hour || hour + 1 > s.last_hour) return 1.0;
    double x = rng.uniform01();
    if (x < s.p_low) return s.low_factor;
    if (x < s.p_low + s.p_optimal) return 1.0;
    return s.high_factor;
}

RedeedHourOutcome RedeedEnv::evaluate_hour(int hour, const std::vector<double>& powers_in,
                                           const std::vector<double>& previous_powers) const {
    RedeedHourOutcome out;
    std::vector<double> powers = powers_in;
    const auto& slack = cfg_.units[static_cast<std::size_t>(slack_idx_)];

    double others = 0.0;
    for (std::size_t n = 0; n < powers.size(); ++n) {
        if (static_cast<int>(n) != slack_idx_) others += powers[n];
    }
    double required = cfg_.demand[static_cast<std::size_t>(hour)] - others;
    double slack_power = std::clamp(required, slack.p_min, slack.p_max);
    powers[static_cast<std::size_t>(slack_idx_)] = slack_power;

    // Penalty per violated constraint: C * |h + 1| with h the magnitude.
    std::vector<double> violations;
    if (std::abs(required - slack_power) > 1e-9) {
        violations.push_back(std::abs(required - slack_power));
        out.infeasible = true;
    }
    for (int idx : {slack_idx_, agent_idx_}) {
        double delta = powers[static_cast<std::size_t>(idx)] - previous_powers[static_cast<std::size_t>(idx)];
        const auto& g = cfg_.units[static_cast<std::size_t>(idx)];
        if (delta > g.ramp_up + 1e-9) violations.push_back(delta - g.ramp_up);
        if (-delta > g.ramp_down + 1e-9) violations.push_back(-delta - g.ramp_down);
    }
    for (double h : violations) {
        out.global_penalty += cfg_.penalty_constant * std::abs(h + 1.0);
    }

    for (std::size_t n = 0; n < powers.size(); ++n) {
        const auto& g = cfg_.units[n];
        out.global_cost += redeed_cost(g, powers[n]);
        if (static_cast<int>(n) != wind_idx_) {
            out.global_emissions += redeed_emissions(g, powers[n]);
        }
    }
    out.final_powers = std::move(powers);
    return out;
}

StepResult RedeedEnv::step(int action, Rng& rng) {
    if (done()) throw contract_violation("redeed: step on finished episode");
    if (action < 0 || action >= cfg_.action_settings) {
        throw contract_violation("redeed: invalid action index " + std::to_string(action));
    }
    std::vector<double> powers(cfg_.units.size());
    for (std::size_t n = 0; n < cfg_.units.size(); ++n) {
        powers[n] = cfg_.baseline_power[n][static_cast<std::size_t>(hour_)];
    }
    powers[static_cast<std::size_t>(agent_idx_)] = setting_power(action);
    powers[static_cast<std::size_t>(wind_idx_)] *= sample_wind_factor(hour_, rng);

    RedeedHourOutcome hour_outcome = evaluate_hour(hour_, powers, prev_powers_);

    StepResult out;
    out.reward = ReturnVector(3);
    out.reward << -hour_outcome.global_cost, -hour_outcome.global_emissions, -hour_outcome.global_penalty;
    prev_powers_ = hour_outcome.final_powers;
    prev_setting_ = action;
    ++hour_;
    out.terminal = done();
    return out;
}

std::unique_ptr<EnvironmentModel> RedeedEnv::clone() const {
    return std::make_unique<RedeedEnv>(*this);
}

}  // namespace dmcts::envs
