#pragma once

#include "dmcts/core/environment.hpp"

#include <string>
#include <vector>

namespace dmcts::envs {

/// Per-state stock model: the realised price multiplier is +gain with
/// probability p_up and -loss otherwise.
struct StockModel {
    double p_up = 0.5;
    double gain = 1.0;
    double loss = 1.0;
};

enum class RiskTransitionRule {
    Uniform,  // next state uniform over all states
    Cycle,    // deterministic rotation s -> (s + 1) mod n
    Matrix,   // explicit row-stochastic matrix
};

struct RiskMdpConfig {
    std::vector<StockModel> stocks;  // one per state
    std::vector<int> invest_amounts = {0, 1, 2, 3};
    int horizon = 10;
    int initial_state = 0;
    RiskTransitionRule rule = RiskTransitionRule::Cycle;
    std::vector<std::vector<double>> transitions;  // used by Matrix rule

    static RiskMdpConfig from_json_file(const std::string& path);
    static RiskMdpConfig from_json_text(const std::string& text);
    void validate() const;
};

/// Investment MDP: at each timestep the agent invests one of the configured
/// monetary amounts in the current state's stock; the reward is the invested
/// amount times the realised price multiplier. Investing 0 never gains or
/// loses. Scalar domain (one objective).
class RiskMdpEnv final : public EnvironmentModel {
public:
    explicit RiskMdpEnv(RiskMdpConfig cfg);

    int objective_count() const override { return 1; }
    int action_count() const override { return static_cast<int>(cfg_.invest_amounts.size()); }
    int horizon() const override { return cfg_.horizon; }
    void reset(Rng& rng) override;
    StepResult step(int action, Rng& rng) override;
    bool done() const override { return t_ >= cfg_.horizon; }
    int timestep() const override { return t_; }
    std::uint64_t state_key() const override { return static_cast<std::uint64_t>(state_); }
    std::unique_ptr<EnvironmentModel> clone() const override;

    const RiskMdpConfig& config() const { return cfg_; }

private:
    int sample_next_state(Rng& rng) const;

    RiskMdpConfig cfg_;
    int state_ = 0;
    int t_ = 0;
};

}  // namespace dmcts::envs
