#pragma once

#include "dmcts/bts/bootstrap.hpp"
#include "dmcts/core/environment.hpp"
#include "dmcts/core/types.hpp"
#include "dmcts/core/utility.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace dmcts {

/// Tree outcome key: the (next state, reward) pair observed when a chance
/// node samples the environment. Keying on the pair keeps children distinct
/// under stochastic transitions as well as stochastic rewards.
struct OutcomeKey {
    std::uint64_t state = 0;
    std::vector<std::int64_t> reward;  // quantised to 9 decimals

    bool operator==(const OutcomeKey&) const = default;
};

struct OutcomeKeyHash {
    std::size_t operator()(const OutcomeKey& k) const {
        std::uint64_t h = splitmix64(k.state);
        for (std::int64_t v : k.reward) {
            h = splitmix64(h ^ static_cast<std::uint64_t>(v));
        }
        return static_cast<std::size_t>(h);
    }
};

/// Uniform re-sampling of the rollout return, used as an extra exploration
/// device: with probability `probability` the rollout portion of a learning
/// iteration's return is replaced by a vector drawn uniformly from the
/// per-objective bounds.
struct ArtificialReturnConfig {
    double probability = 0.0;
    ReturnVector low;
    ReturnVector high;

    bool enabled() const { return probability > 0.0; }
    void validate(int objectives) const;
};

ReturnVector inject_artificial_return(const ReturnVector& rollout_return,
                                      const ArtificialReturnConfig& cfg, Rng& rng);

struct PlannerConfig {
    Criterion criterion = Criterion::ESR;
    int replicates = 50;
    double alpha_prior = 1.0;
    /// Learning iterations per execution step; one iteration ends in a full
    /// rollout, so this equals the per-step budget of policy executions.
    int iterations_per_step = 1;
    /// When set, the search tree is discarded before every execution step
    /// instead of being reused across steps and episodes.
    bool fresh_tree = false;
    ArtificialReturnConfig artificial;
};

class ChanceNode;

/// A decision node represents an observed (state, incoming reward) outcome.
/// Its children are chance nodes, one per action, created lazily.
class DecisionNode {
public:
    DecisionNode(std::uint64_t state_key, ReturnVector incoming_reward, bool terminal,
                 int action_count);

    std::uint64_t state_key() const { return state_key_; }
    const ReturnVector& incoming_reward() const { return incoming_reward_; }
    bool terminal() const { return terminal_; }
    long visits() const { return visits_; }
    void add_visit() { ++visits_; }

    int action_count() const { return static_cast<int>(children_.size()); }
    ChanceNode* child(int action) const { return children_[static_cast<std::size_t>(action)].get(); }
    bool expanded(int action) const { return child(action) != nullptr; }
    std::vector<int> unexpanded_actions() const;

    ChanceNode& expand(int action, const PlannerConfig& cfg, int objectives);

private:
    std::uint64_t state_key_;
    ReturnVector incoming_reward_;
    bool terminal_;
    long visits_ = 0;
    std::vector<std::unique_ptr<ChanceNode>> children_;
};

/// A chance node represents a (state, action) pair. The environment is
/// sampled here; a child decision node exists per distinct observed
/// (next state, reward) outcome and is only created when an unseen outcome
/// appears.
class ChanceNode {
public:
    ChanceNode(std::uint64_t state_key, int action, const PlannerConfig& cfg, int objectives);

    std::uint64_t state_key() const { return state_key_; }
    int action() const { return action_; }
    long visits() const { return visits_; }
    void add_visit() { ++visits_; }

    BootstrapDistribution& stats() { return stats_; }
    const BootstrapDistribution& stats() const { return stats_; }

    /// Child for an observed outcome, created on first sight.
    /// Returns (node, created-now).
    std::pair<DecisionNode*, bool> child_for(const OutcomeKey& key, const ReturnVector& reward,
                                             bool terminal, int action_count);
    DecisionNode* find_child(const OutcomeKey& key) const;

    const std::unordered_map<OutcomeKey, std::unique_ptr<DecisionNode>, OutcomeKeyHash>&
    children() const {
        return children_;
    }

private:
    std::uint64_t state_key_;
    int action_;
    long visits_ = 0;
    BootstrapDistribution stats_;
    std::unordered_map<OutcomeKey, std::unique_ptr<DecisionNode>, OutcomeKeyHash> children_;
};

struct TreeStats {
    long decision_nodes = 0;
    long chance_nodes = 0;
    std::vector<long> depth_histogram;  // decision nodes per tree depth
    std::vector<double> root_child_pooled;  // utility-projected pooled mean per expanded root action
    std::string to_json() const;
};

/// The planner. One instance is single-writer and owns its search tree; the
/// tree persists across execution steps (via root advancement) and across
/// episodes, accumulating statistics for the whole run.
class DmctsPlanner {
public:
    DmctsPlanner(PlannerConfig cfg, UtilityFunction utility, int objective_count);

    /// Positions the planning root at the episode's initial state. Roots are
    /// kept per initial state so statistics persist across episodes.
    void begin_episode(const EnvironmentModel& env);

    /// Runs the configured number of learning iterations from the current
    /// root, each on a fresh clone of `env`, then returns the execution-phase
    /// action: the argmax of the pooled (all-replicate) child means.
    /// `accrued` must be the live episode's return collected so far.
    int plan_step(const EnvironmentModel& env, const ReturnVector& accrued, Rng& rng);

    /// Moves the root to the child matching the real transition, creating it
    /// if the live environment produced an outcome unseen during planning.
    void advance_root(int taken_action, const EnvironmentModel& env_after,
                      const ReturnVector& observed_reward);

    /// One full selection / expansion / simulation / backpropagation pass.
    /// `env` must be positioned at the root's state. Exposed for tests.
    void learning_iteration(DecisionNode& root, EnvironmentModel& env, const ReturnVector& accrued,
                            Rng& rng);

    DecisionNode* root() { return root_; }
    long policy_executions() const { return policy_executions_; }
    const PlannerConfig& config() const { return cfg_; }
    const UtilityFunction& utility() const { return utility_; }

    TreeStats tree_stats() const;

    /// Test hook: observes every return vector the utility function is applied
    /// to during backpropagation (ESR mode).
    void set_backprop_observer(std::function<void(const ReturnVector&)> fn) {
        backprop_observer_ = std::move(fn);
    }

private:
    DecisionNode& root_for(const EnvironmentModel& env);
    int select_or_expand(DecisionNode& node, Rng& rng);
    ReturnVector rollout(EnvironmentModel& env, Rng& rng);

    PlannerConfig cfg_;
    UtilityFunction utility_;
    int objectives_;
    std::unordered_map<std::uint64_t, std::unique_ptr<DecisionNode>> top_roots_;
    DecisionNode* root_ = nullptr;
    DecisionNode* episode_root_ = nullptr;
    long policy_executions_ = 0;
    std::function<void(const ReturnVector&)> backprop_observer_;
};

}  // namespace dmcts
