#include "dmcts/envs/fishwood.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace dmcts::envs {

FishwoodConfig FishwoodConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("fishwood config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

FishwoodConfig FishwoodConfig::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    FishwoodConfig cfg;
    cfg.p_fish = j.value("p_fish", 0.25);
    cfg.p_wood = j.value("p_wood", 0.65);
    cfg.horizon = j.value("horizon", 13);
    if (j.contains("start_state")) {
        const auto& s = j["start_state"];
        cfg.start_state = s.is_string() ? (s.get<std::string>() == "woods" ? 1 : 0) : s.get<int>();
    }
    cfg.validate();
    return cfg;
}

void FishwoodConfig::validate() const {
    if (p_fish < 0.0 || p_fish > 1.0) throw contract_violation("fishwood config: p_fish outside [0,1]");
    if (p_wood < 0.0 || p_wood > 1.0) throw contract_violation("fishwood config: p_wood outside [0,1]");
    if (horizon < 1) throw contract_violation("fishwood config: horizon must be >= 1");
    if (start_state != 0 && start_state != 1) {
        throw contract_violation("fishwood config: start state must be river (0) or woods (1)");
    }
}

FishwoodEnv::FishwoodEnv(FishwoodConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    state_ = cfg_.start_state;
}

void FishwoodEnv::reset(Rng&) {
    state_ = cfg_.start_state;
    t_ = 0;
}

StepResult FishwoodEnv::step(int action, Rng& rng) {
    if (done()) throw contract_violation("fishwood: step on finished episode");
    if (action != kStay && action != kMove) {
        throw contract_violation("fishwood: invalid action index " + std::to_string(action));
    }
    state_ = (action == kMove) ? (1 - state_) : state_;
    StepResult out;
    out.reward = ReturnVector::Zero(2);
    if (state_ == kRiver) {
        if (rng.bernoulli(cfg_.p_fish)) out.reward[0] = 1.0;
    } else {
        if (rng.bernoulli(cfg_.p_wood)) out.reward[1] = 1.0;
    }
    ++t_;
    out.terminal = done();
    return out;
}

std::unique_ptr<EnvironmentModel> FishwoodEnv::clone() const {
    return std::make_unique<FishwoodEnv>(*this);
}

}  // namespace dmcts::envs
