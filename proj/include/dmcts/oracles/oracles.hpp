#pragma once

#include "dmcts/core/environment.hpp"
#include "dmcts/core/types.hpp"
#include "dmcts/core/utility.hpp"
#include "dmcts/envs/ddst.hpp"
#include "dmcts/envs/fishwood.hpp"
#include "dmcts/envs/risk_mdp.hpp"

#include <memory>
#include <string>
#include <vector>

namespace dmcts::oracles {

/// Exact finite-horizon dynamic program for the gathering task over
/// (location, fish, wood, timestep), evaluating min(fish, floor(wood/2)) on
/// the final totals. Independent of the planner.
class FishwoodDp {
public:
    explicit FishwoodDp(const envs::FishwoodConfig& cfg);

    double value(int location, int fish, int wood, int t) const;
    double action_value(int location, int fish, int wood, int t, int action) const;
    int optimal_action(int location, int fish, int wood, int t) const;
    /// Optimal expected utility from the configured start.
    double optimal_value() const;

private:
    std::size_t index(int location, int fish, int wood, int t) const;

    envs::FishwoodConfig cfg_;
    std::vector<double> v_;
};

/// Exact evaluation of the investment MDP under u(R) = 1 - exp(-R), using the
/// multiplicative decomposition E[exp(-R)] = prod_t E[exp(-r_t)]: a dynamic
/// program over W(s, t) = E[exp(-R_t..)] that is exact because the realised
/// price draw is independent of the sampled next state.
struct RiskOracleReport {
    std::vector<double> constant_policy_utility;  // E[u] per constant action
    double optimal_utility = 0.0;
    std::vector<std::vector<int>> optimal_action;  // [t][state]
    bool invest_zero_uniquely_optimal = false;
};

RiskOracleReport solve_risk_mdp(const envs::RiskMdpConfig& cfg);

/// Breadth-first path analysis of a treasure grid: per-treasure shortest path
/// lengths with and without entering shark cells, and the utility each
/// treasure's safe episode return earns under a target-vector utility.
struct DdstOracleReport {
    double best_value = 0.0;  // treasure maximising the safe-episode utility
    int best_row = -1;
    int best_col = -1;
    int best_safe_length = -1;
    double best_utility = 0.0;        // u([value, 0, -safe_length])
    double target_self_utility = 0.0; // u(r_target)
    int shortest_any_path = -1;       // to the best treasure, sharks allowed
};

DdstOracleReport analyse_ddst(const envs::DdstMap& map, const ReturnVector& target);

/// A tiny enumerable MDP with scalar rewards for oracle-vs-planner checks.
struct SmallOutcome {
    double prob = 0.0;
    double reward = 0.0;
    int next_state = 0;
};

struct SmallMdp {
    int n_states = 0;
    int n_actions = 0;
    int horizon = 0;
    int initial_state = 0;
    // outcomes[state][action] -> outcome list (probabilities sum to 1)
    std::vector<std::vector<std::vector<SmallOutcome>>> outcomes;
};

struct SmallMdpOptions {
    int max_states = 5;
    int max_actions = 3;
    int max_outcomes = 3;
    int max_horizon = 4;
    /// Regenerate until the top two root action values differ by this much,
    /// so near-ties do not make the action comparison meaningless.
    double min_root_gap = 0.1;
    int max_tries = 1000;
};

SmallMdp random_small_mdp(Rng& rng, const SmallMdpOptions& opts, const UtilityFunction& u);

/// Brute-force ESR action values at the initial state: exhaustive enumeration
/// of every outcome sequence, maximising over actions at each interior node.
std::vector<double> esr_action_values(const SmallMdp& mdp, const UtilityFunction& u);

/// EnvironmentModel adapter so planners can run on a SmallMdp.
class SmallMdpEnv final : public EnvironmentModel {
public:
    explicit SmallMdpEnv(SmallMdp mdp);

    int objective_count() const override { return 1; }
    int action_count() const override { return mdp_.n_actions; }
    int horizon() const override { return mdp_.horizon; }
    void reset(Rng& rng) override;
    StepResult step(int action, Rng& rng) override;
    bool done() const override { return t_ >= mdp_.horizon; }
    int timestep() const override { return t_; }
    std::uint64_t state_key() const override { return static_cast<std::uint64_t>(state_); }
    std::unique_ptr<EnvironmentModel> clone() const override;

    const SmallMdp& mdp() const { return mdp_; }

private:
    SmallMdp mdp_;
    int state_ = 0;
    int t_ = 0;
};

}  // namespace dmcts::oracles
