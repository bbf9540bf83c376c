#include "dmcts/baselines/q_learning.hpp"

#include <cmath>

namespace dmcts::baselines {

double QTable::value(std::uint64_t s, int t, int a) const {
    auto it = table_.find(QKey{s, t});
    if (it == table_.end()) return 0.0;
    return it->second[static_cast<std::size_t>(a)];
}

double QTable::max_value(std::uint64_t s, int t) const {
    auto it = table_.find(QKey{s, t});
    if (it == table_.end()) return 0.0;
    double best = it->second[0];
    for (double v : it->second) best = std::max(best, v);
    return best;
}

int QTable::greedy_action(std::uint64_t s, int t) const {
    auto it = table_.find(QKey{s, t});
    if (it == table_.end()) return 0;
    int best = 0;
    for (int a = 1; a < actions_; ++a) {
        if (it->second[static_cast<std::size_t>(a)] > it->second[static_cast<std::size_t>(best)]) {
            best = a;
        }
    }
    return best;
}

void QTable::update(std::uint64_t s, int t, int a, double r, std::uint64_t s2, int t2, bool done,
                    double alpha) {
    double target = r + (done ? 0.0 : max_value(s2, t2));
    auto& row = table_[QKey{s, t}];
    if (row.empty()) row.assign(static_cast<std::size_t>(actions_), 0.0);
    double& q = row[static_cast<std::size_t>(a)];
    q += alpha * (target - q);
}

ReturnVector VectorQTable::value(std::uint64_t s, int t, int a) const {
    auto it = table_.find(QKey{s, t});
    if (it == table_.end()) return zero_return(objectives_);
    return it->second[static_cast<std::size_t>(a)];
}

int VectorQTable::greedy_action(std::uint64_t s, int t, const UtilityFunction& u) const {
    auto it = table_.find(QKey{s, t});
    if (it == table_.end()) return 0;
    int best = 0;
    double best_score = u(it->second[0]);
    for (int a = 1; a < actions_; ++a) {
        double score = u(it->second[static_cast<std::size_t>(a)]);
        if (score > best_score) {
            best_score = score;
            best = a;
        }
    }
    return best;
}

void VectorQTable::update(std::uint64_t s, int t, int a, const ReturnVector& r, std::uint64_t s2,
                          int t2, int bootstrap_action, bool done, double alpha) {
    ReturnVector target = r;
    if (!done) target += value(s2, t2, bootstrap_action);
    auto& row = table_[QKey{s, t}];
    if (row.empty()) row.assign(static_cast<std::size_t>(actions_), zero_return(objectives_));
    ReturnVector& q = row[static_cast<std::size_t>(a)];
    q += alpha * (target - q);
}

QLearningAgent::QLearningAgent(QLearningConfig cfg, std::optional<UtilityFunction> utility,
                               int action_count)
    : cfg_(cfg), utility_(std::move(utility)), table_(action_count), epsilon_(cfg.epsilon) {
    if (cfg_.signal == ScalarSignal::StepUtility && !utility_.has_value()) {
        throw contract_violation("q-learning: step-utility signal needs a utility function");
    }
}

void QLearningAgent::begin_episode(int episode_index) {
    if (cfg_.epsilon_decay.has_value()) {
        epsilon_ = std::pow(*cfg_.epsilon_decay, static_cast<double>(episode_index));
    }
}

double QLearningAgent::scalar_signal(const ReturnVector& r) const {
    if (cfg_.signal == ScalarSignal::RawReward) {
        if (r.size() != 1) {
            throw dimension_mismatch("q-learning raw signal needs a scalar reward, got " +
                                     std::to_string(r.size()) + " objectives");
        }
        return r[0];
    }
    return (*utility_)(r);
}

int QLearningAgent::epsilon_greedy(std::uint64_t s, int t, Rng& rng) const {
    if (rng.bernoulli(epsilon_)) return rng.uniform_int(table_.action_count());
    return table_.greedy_action(s, t);
}

int QLearningAgent::select_action(const EnvironmentModel& env, Rng& rng) {
    for (int e = 0; e < cfg_.n_exec; ++e) {
        auto sim = env.clone();
        while (!sim->done()) {
            std::uint64_t s = sim->state_key();
            int t = sim->timestep();
            int a = epsilon_greedy(s, t, rng);
            StepResult sr = sim->step(a, rng);
            table_.update(s, t, a, scalar_signal(sr.reward), sim->state_key(), sim->timestep(),
                          sr.terminal, cfg_.learning_rate);
        }
        ++sim_executions_;
    }
    prev_state_ = env.state_key();
    prev_t_ = env.timestep();
    return epsilon_greedy(prev_state_, prev_t_, rng);
}

void QLearningAgent::observe_transition(const EnvironmentModel& env_after, int action,
                                        const ReturnVector& reward, bool terminal) {
    table_.update(prev_state_, prev_t_, action, scalar_signal(reward), env_after.state_key(),
                  env_after.timestep(), terminal, cfg_.learning_rate);
}

ScalarisedQAgent::ScalarisedQAgent(QLearningConfig cfg, UtilityFunction utility, int action_count,
                                   int objectives)
    : cfg_(cfg),
      utility_(std::move(utility)),
      table_(action_count, objectives),
      epsilon_(cfg.epsilon) {}

void ScalarisedQAgent::begin_episode(int episode_index) {
    if (cfg_.epsilon_decay.has_value()) {
        epsilon_ = std::pow(*cfg_.epsilon_decay, static_cast<double>(episode_index));
    }
}

int ScalarisedQAgent::epsilon_greedy(std::uint64_t s, int t, Rng& rng) const {
    if (rng.bernoulli(epsilon_)) return rng.uniform_int(table_.action_count());
    return table_.greedy_action(s, t, utility_);
}

int ScalarisedQAgent::select_action(const EnvironmentModel& env, Rng& rng) {
    for (int e = 0; e < cfg_.n_exec; ++e) {
        auto sim = env.clone();
        while (!sim->done()) {
            std::uint64_t s = sim->state_key();
            int t = sim->timestep();
            int a = epsilon_greedy(s, t, rng);
            StepResult sr = sim->step(a, rng);
            int bootstrap = table_.greedy_action(sim->state_key(), sim->timestep(), utility_);
            table_.update(s, t, a, sr.reward, sim->state_key(), sim->timestep(), bootstrap,
                          sr.terminal, cfg_.learning_rate);
        }
        ++sim_executions_;
    }
    prev_state_ = env.state_key();
    prev_t_ = env.timestep();
    return epsilon_greedy(prev_state_, prev_t_, rng);
}

void ScalarisedQAgent::observe_transition(const EnvironmentModel& env_after, int action,
                                          const ReturnVector& reward, bool terminal) {
    int bootstrap = table_.greedy_action(env_after.state_key(), env_after.timestep(), utility_);
    table_.update(prev_state_, prev_t_, action, reward, env_after.state_key(), env_after.timestep(),
                  bootstrap, terminal, cfg_.learning_rate);
}

}  // namespace dmcts::baselines
