#pragma once

#include "dmcts/core/environment.hpp"
#include "dmcts/core/types.hpp"
#include "dmcts/core/utility.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace dmcts::baselines {

struct QKey {
    std::uint64_t state = 0;
    int t = 0;
    bool operator==(const QKey&) const = default;
};

struct QKeyHash {
    std::size_t operator()(const QKey& k) const {
        return static_cast<std::size_t>(
            splitmix64(k.state ^ (static_cast<std::uint64_t>(k.t) << 32u)));
    }
};

/// Tabular scalar action values keyed on (state, timestep). Unvisited entries
/// read as 0; gamma is fixed at 1.
class QTable {
public:
    explicit QTable(int action_count) : actions_(action_count) {}

    int action_count() const { return actions_; }
    double value(std::uint64_t s, int t, int a) const;
    double max_value(std::uint64_t s, int t) const;
    /// Argmax over actions, lowest index on ties.
    int greedy_action(std::uint64_t s, int t) const;

    /// Q(s,a) += alpha * (r + max_a' Q(s',a') * (1 - done) - Q(s,a)).
    void update(std::uint64_t s, int t, int a, double r, std::uint64_t s2, int t2, bool done,
                double alpha);

    std::size_t size() const { return table_.size(); }

private:
    int actions_;
    std::unordered_map<QKey, std::vector<double>, QKeyHash> table_;
};

/// Tabular vector action values for scalarised multi-objective Q-learning.
/// Selection applies the utility function to the Q-vector; updates are
/// componentwise against a supplied bootstrap action so experience can be
/// replayed per objective.
class VectorQTable {
public:
    VectorQTable(int action_count, int objectives) : actions_(action_count), objectives_(objectives) {}

    int action_count() const { return actions_; }
    ReturnVector value(std::uint64_t s, int t, int a) const;
    int greedy_action(std::uint64_t s, int t, const UtilityFunction& u) const;

    void update(std::uint64_t s, int t, int a, const ReturnVector& r, std::uint64_t s2, int t2,
                int bootstrap_action, bool done, double alpha);

private:
    int actions_;
    int objectives_;
    std::unordered_map<QKey, std::vector<ReturnVector>, QKeyHash> table_;
};

/// What the scalar learner is fed per step: the raw reward (scalar domains)
/// or the utility of the immediate reward (vector domains; for linear
/// utilities this is exactly the linear scalarisation).
enum class ScalarSignal { RawReward, StepUtility };

struct QLearningConfig {
    double learning_rate = 0.1;
    double epsilon = 0.1;
    std::optional<double> epsilon_decay;  // when set, epsilon = decay^episode
    int n_exec = 1;
    ScalarSignal signal = ScalarSignal::RawReward;
};

/// Scalar tabular Q-learning run under the shared budget rule: every real
/// timestep grants n_exec full simulated training episodes from the current
/// state, plus the real transition itself.
class QLearningAgent {
public:
    QLearningAgent(QLearningConfig cfg, std::optional<UtilityFunction> utility, int action_count);

    void begin_episode(int episode_index);
    /// Runs the simulated training budget, then picks the real action
    /// epsilon-greedily from the table.
    int select_action(const EnvironmentModel& env, Rng& rng);
    void observe_transition(const EnvironmentModel& env_after, int action,
                            const ReturnVector& reward, bool terminal);

    long simulated_executions() const { return sim_executions_; }
    double epsilon() const { return epsilon_; }
    const QTable& table() const { return table_; }

private:
    double scalar_signal(const ReturnVector& r) const;
    int epsilon_greedy(std::uint64_t s, int t, Rng& rng) const;

    QLearningConfig cfg_;
    std::optional<UtilityFunction> utility_;
    QTable table_;
    double epsilon_;
    std::uint64_t prev_state_ = 0;
    int prev_t_ = 0;
    long sim_executions_ = 0;
};

/// Scalarised multi-objective Q-learning: vector table, utility applied at
/// selection time, same simulated-episode budget.
class ScalarisedQAgent {
public:
    ScalarisedQAgent(QLearningConfig cfg, UtilityFunction utility, int action_count, int objectives);

    void begin_episode(int episode_index);
    int select_action(const EnvironmentModel& env, Rng& rng);
    void observe_transition(const EnvironmentModel& env_after, int action,
                            const ReturnVector& reward, bool terminal);

    long simulated_executions() const { return sim_executions_; }
    double epsilon() const { return epsilon_; }
    const VectorQTable& table() const { return table_; }

private:
    int epsilon_greedy(std::uint64_t s, int t, Rng& rng) const;

    QLearningConfig cfg_;
    UtilityFunction utility_;
    VectorQTable table_;
    double epsilon_;
    std::uint64_t prev_state_ = 0;
    int prev_t_ = 0;
    long sim_executions_ = 0;
};

}  // namespace dmcts::baselines
