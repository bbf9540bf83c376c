#pragma once

#include "dmcts/core/environment.hpp"

#include <string>
#include <vector>

namespace dmcts::envs {

struct GeneratorCostCoefficients {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;
};

struct GeneratorEmissionCoefficients {
    double scale = 1.0;  // E in front of the bracket
    double a = 0.0, b = 0.0, gamma = 0.0, eta = 0.0, delta = 0.0;
};

struct GeneratorSpec {
    int id = 0;  // 1-based, matching the config file
    double p_min = 0.0;
    double p_max = 0.0;
    double ramp_up = 0.0;
    double ramp_down = 0.0;
    GeneratorCostCoefficients cost;
    GeneratorEmissionCoefficients emissions;
};

struct StormModel {
    int first_hour = 16;  // 1-based, inclusive
    int last_hour = 24;   // 1-based, inclusive
    double p_low = 0.15;
    double p_optimal = 0.70;
    double p_high = 0.15;
    double low_factor = 0.75;
    double high_factor = 1.25;
};

struct RedeedConfig {
    int horizon = 24;
    std::vector<double> demand;            // one entry per hour
    std::vector<GeneratorSpec> units;      // all generators
    std::vector<std::vector<double>> baseline_power;  // units x hours
    int slack_unit = 1;   // 1-based ids
    int agent_unit = 3;
    int wind_unit = 4;
    int action_settings = 11;
    double penalty_constant = 1e6;
    double initial_agent_power = 0.0;
    StormModel storm;

    static RedeedConfig from_json_file(const std::string& path);
    static RedeedConfig from_json_text(const std::string& text);
    void validate() const;

    int unit_index(int id) const;  // 1-based id -> vector index
};

/// Local fuel cost for one generator at output P, including the valve-point
/// ripple term |d * sin(e * (P_min - P))|.
double redeed_cost(const GeneratorSpec& g, double power);

/// Local emissions scale * (a + b*P + gamma*P^2 + eta*exp(delta*P)).
/// The wind generator emits nothing; callers handle that exclusion.
double redeed_emissions(const GeneratorSpec& g, double power);

struct RedeedHourOutcome {
    double global_cost = 0.0;
    double global_emissions = 0.0;
    double global_penalty = 0.0;
    bool infeasible = false;  // demand unmatchable even at slack limits
    std::vector<double> final_powers;  // per unit, slack solved
};

/// 24-hour dispatch control task. The agent sets one generator's output each
/// hour from a discretised range; the slack generator balances demand; the
/// wind generator follows its schedule, scaled by the storm draw during storm
/// hours. The reward vector is the negated [cost, emissions, penalty]
/// magnitudes for the hour, so maximising linear utility minimises them.
class RedeedEnv final : public EnvironmentModel {
public:
    explicit RedeedEnv(RedeedConfig cfg);

    int objective_count() const override { return 3; }
    int action_count() const override { return cfg_.action_settings; }
    int horizon() const override { return cfg_.horizon; }
    void reset(Rng& rng) override;
    StepResult step(int action, Rng& rng) override;
    bool done() const override { return hour_ >= cfg_.horizon; }
    int timestep() const override { return hour_; }
    std::uint64_t state_key() const override;
    std::unique_ptr<EnvironmentModel> clone() const override;

    const RedeedConfig& config() const { return cfg_; }
    double setting_power(int action) const;

    /// Per-generator lookups by 1-based id; unknown ids are an error.
    double cost_for_unit(int id, double power) const;
    /// Emissions by id; the wind generator returns 0 unconditionally.
    double emissions_for_unit(int id, double power) const;

    /// Dispatch bookkeeping for one hour given every non-slack power; solves
    /// the slack output for demand balance and accumulates penalties for
    /// violated power and ramp constraints. Exposed for tests and oracles.
    RedeedHourOutcome evaluate_hour(int hour, const std::vector<double>& powers_with_slack_unset,
                                    const std::vector<double>& previous_powers) const;

    /// Storm wind factor for an hour: 1 outside the storm window, otherwise
    /// one of {low, 1, high} drawn with the configured probabilities.
    double sample_wind_factor(int hour, Rng& rng) const;

private:
    RedeedConfig cfg_;
    int slack_idx_ = 0;
    int agent_idx_ = 0;
    int wind_idx_ = 0;
    int hour_ = 0;
    int prev_setting_ = 0;
    std::vector<double> prev_powers_;  // actual outputs of the previous hour
};

}  // namespace dmcts::envs
