#pragma once

#include "dmcts/core/environment.hpp"

#include <string>

namespace dmcts::envs {

struct FishwoodConfig {
    double p_fish = 0.25;
    double p_wood = 0.65;
    int horizon = 13;
    int start_state = 0;  // 0 = river, 1 = woods

    static FishwoodConfig from_json_file(const std::string& path);
    static FishwoodConfig from_json_text(const std::string& text);
    void validate() const;
};

/// Two-location gathering task. Actions are stay (0) and move (1); the action
/// decides where the agent spends the timestep, and the reward draw happens at
/// that location: [1,0] with p_fish at the river, [0,1] with p_wood in the
/// woods, [0,0] otherwise. Fish only come from the river and wood only from
/// the woods, one unit per success.
class FishwoodEnv final : public EnvironmentModel {
public:
    static constexpr int kRiver = 0;
    static constexpr int kWoods = 1;
    static constexpr int kStay = 0;
    static constexpr int kMove = 1;

    explicit FishwoodEnv(FishwoodConfig cfg);

    int objective_count() const override { return 2; }
    int action_count() const override { return 2; }
    int horizon() const override { return cfg_.horizon; }
    void reset(Rng& rng) override;
    StepResult step(int action, Rng& rng) override;
    bool done() const override { return t_ >= cfg_.horizon; }
    int timestep() const override { return t_; }
    std::uint64_t state_key() const override { return static_cast<std::uint64_t>(state_); }
    std::unique_ptr<EnvironmentModel> clone() const override;

    const FishwoodConfig& config() const { return cfg_; }
    int location() const { return state_; }

private:
    FishwoodConfig cfg_;
    int state_ = kRiver;
    int t_ = 0;
};

}  // namespace dmcts::envs
