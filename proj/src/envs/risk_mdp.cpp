#include "dmcts/envs/risk_mdp.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace dmcts::envs {

RiskMdpConfig RiskMdpConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("risk-mdp config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

RiskMdpConfig RiskMdpConfig::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RiskMdpConfig cfg;
    cfg.stocks.clear();
    for (const auto& s : j.at("stocks")) {
        StockModel m;
        m.p_up = s.at("p_up").get<double>();
        m.gain = s.at("gain").get<double>();
        m.loss = s.at("loss").get<double>();
        cfg.stocks.push_back(m);
    }
    if (j.contains("invest_amounts")) cfg.invest_amounts = j["invest_amounts"].get<std::vector<int>>();
    cfg.horizon = j.value("horizon", 10);
    cfg.initial_state = j.value("initial_state", 0);
    if (j.contains("transitions")) {
        if (j["transitions"].is_string()) {
            std::string rule = j["transitions"].get<std::string>();
            if (rule == "uniform") {
                cfg.rule = RiskTransitionRule::Uniform;
            } else if (rule == "cycle") {
                cfg.rule = RiskTransitionRule::Cycle;
            } else {
                throw contract_violation("risk-mdp config: transitions must be uniform, cycle or a matrix");
            }
        } else {
            cfg.rule = RiskTransitionRule::Matrix;
            cfg.transitions = j["transitions"].get<std::vector<std::vector<double>>>();
        }
    }
    cfg.validate();
    return cfg;
}

void RiskMdpConfig::validate() const {
    if (stocks.empty()) throw contract_violation("risk-mdp config: needs at least one state");
    if (invest_amounts.empty()) throw contract_violation("risk-mdp config: needs at least one action");
    if (invest_amounts[0] != 0) {
        throw contract_violation("risk-mdp config: first action must be the zero investment");
    }
    if (horizon < 1) throw contract_violation("risk-mdp config: horizon must be >= 1");
    if (initial_state < 0 || initial_state >= static_cast<int>(stocks.size())) {
        throw contract_violation("risk-mdp config: initial state out of range");
    }
    for (const auto& s : stocks) {
        if (s.p_up < 0.0 || s.p_up > 1.0) throw contract_violation("risk-mdp config: p_up outside [0,1]");
        if (s.gain < 0.0 || s.loss < 0.0) throw contract_violation("risk-mdp config: negative multiplier");
    }
    if (rule == RiskTransitionRule::Matrix || !transitions.empty()) {
        if (transitions.size() != stocks.size()) {
            throw contract_violation("risk-mdp config: transition row count != state count");
        }
        for (const auto& row : transitions) {
            if (row.size() != stocks.size()) {
                throw contract_violation("risk-mdp config: transition row length != state count");
            }
            double sum = 0.0;
            for (double p : row) {
                if (p < 0.0) throw contract_violation("risk-mdp config: negative transition probability");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                throw contract_violation("risk-mdp config: transition row does not sum to 1");
            }
        }
    }
}

RiskMdpEnv::RiskMdpEnv(RiskMdpConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    state_ = cfg_.initial_state;
}

void RiskMdpEnv::reset(Rng&) {
    state_ = cfg_.initial_state;
    t_ = 0;
}

int RiskMdpEnv::sample_next_state(Rng& rng) const {
    const int n = static_cast<int>(cfg_.stocks.size());
    switch (cfg_.rule) {
        case RiskTransitionRule::Uniform:
            return rng.uniform_int(n);
        case RiskTransitionRule::Cycle:
            return (state_ + 1) % n;
        case RiskTransitionRule::Matrix: {
            double x = rng.uniform01();
            double acc = 0.0;
            for (int s = 0; s < n; ++s) {
                acc += cfg_.transitions[static_cast<std::size_t>(state_)][static_cast<std::size_t>(s)];
                if (x < acc) return s;
            }
            return n - 1;
        }
    }
    return state_;
}

StepResult RiskMdpEnv::step(int action, Rng& rng) {
    if (done()) throw contract_violation("risk-mdp: step on finished episode");
    if (action < 0 || action >= action_count()) {
        throw contract_violation("risk-mdp: invalid action index " + std::to_string(action));
    }
    const StockModel& stock = cfg_.stocks[static_cast<std::size_t>(state_)];
    double invested = static_cast<double>(cfg_.invest_amounts[static_cast<std::size_t>(action)]);
    double multiplier = rng.bernoulli(stock.p_up) ? stock.gain : -stock.loss;
    StepResult out;
    out.reward = ReturnVector::Constant(1, invested * multiplier);
    state_ = sample_next_state(rng);
    ++t_;
    out.terminal = done();
    return out;
}

std::unique_ptr<EnvironmentModel> RiskMdpEnv::clone() const {
    return std::make_unique<RiskMdpEnv>(*this);
}

}  // namespace dmcts::envs
