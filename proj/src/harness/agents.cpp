#include "dmcts/harness/agents.hpp"

namespace dmcts::harness {

namespace {

class DmctsAgent final : public Agent {
public:
    DmctsAgent(const ExperimentConfig& cfg, const EnvironmentModel& env) {
        PlannerConfig pc;
        pc.criterion = cfg.criterion;
        pc.replicates = cfg.dmcts.replicates;
        pc.alpha_prior = cfg.dmcts.alpha_prior;
        pc.iterations_per_step = cfg.executions_per_step();
        pc.fresh_tree = cfg.dmcts.fresh_tree;
        pc.artificial = cfg.artificial_config();
        planner_ = std::make_unique<DmctsPlanner>(pc, cfg.make_utility(), env.objective_count());
    }

    void begin_episode(const EnvironmentModel& env, int) override { planner_->begin_episode(env); }

    int select_action(const EnvironmentModel& env, const ReturnVector& accrued, Rng& rng) override {
        return planner_->plan_step(env, accrued, rng);
    }

    void observe_transition(const EnvironmentModel& env_after, int action,
                            const ReturnVector& reward, bool, Rng&) override {
        planner_->advance_root(action, env_after, reward);
    }

    long simulated_executions() const override { return planner_->policy_executions(); }
    const DmctsPlanner* planner() const override { return planner_.get(); }

private:
    std::unique_ptr<DmctsPlanner> planner_;
};

class ScalarQAgent final : public Agent {
public:
    ScalarQAgent(const ExperimentConfig& cfg, const EnvironmentModel& env) {
        baselines::QLearningConfig qc;
        qc.learning_rate = cfg.qlearning.learning_rate;
        qc.epsilon = cfg.qlearning.epsilon;
        qc.epsilon_decay = cfg.qlearning.epsilon_decay;
        qc.n_exec = cfg.executions_per_step();
        qc.signal = (cfg.qlearning.signal == "raw") ? baselines::ScalarSignal::RawReward
                                                    : baselines::ScalarSignal::StepUtility;
        std::optional<UtilityFunction> u;
        if (qc.signal == baselines::ScalarSignal::StepUtility) u = cfg.make_utility();
        agent_ = std::make_unique<baselines::QLearningAgent>(qc, std::move(u), env.action_count());
    }

    void begin_episode(const EnvironmentModel&, int episode) override {
        agent_->begin_episode(episode);
    }

    int select_action(const EnvironmentModel& env, const ReturnVector&, Rng& rng) override {
        return agent_->select_action(env, rng);
    }

    void observe_transition(const EnvironmentModel& env_after, int action,
                            const ReturnVector& reward, bool terminal, Rng&) override {
        agent_->observe_transition(env_after, action, reward, terminal);
    }

    long simulated_executions() const override { return agent_->simulated_executions(); }

private:
    std::unique_ptr<baselines::QLearningAgent> agent_;
};

class ScalarisedAgent final : public Agent {
public:
    ScalarisedAgent(const ExperimentConfig& cfg, const EnvironmentModel& env) {
        baselines::QLearningConfig qc;
        qc.learning_rate = cfg.qlearning.learning_rate;
        qc.epsilon = cfg.qlearning.epsilon;
        qc.epsilon_decay = cfg.qlearning.epsilon_decay;
        qc.n_exec = cfg.executions_per_step();
        agent_ = std::make_unique<baselines::ScalarisedQAgent>(qc, cfg.make_utility(),
                                                               env.action_count(),
                                                               env.objective_count());
    }

    void begin_episode(const EnvironmentModel&, int episode) override {
        agent_->begin_episode(episode);
    }

    int select_action(const EnvironmentModel& env, const ReturnVector&, Rng& rng) override {
        return agent_->select_action(env, rng);
    }

    void observe_transition(const EnvironmentModel& env_after, int action,
                            const ReturnVector& reward, bool terminal, Rng&) override {
        agent_->observe_transition(env_after, action, reward, terminal);
    }

    long simulated_executions() const override { return agent_->simulated_executions(); }

private:
    std::unique_ptr<baselines::ScalarisedQAgent> agent_;
};

}  // namespace

std::unique_ptr<Agent> make_agent(const ExperimentConfig& cfg, const EnvironmentModel& env) {
    if (cfg.algorithm == "dmcts") return std::make_unique<DmctsAgent>(cfg, env);
    if (cfg.algorithm == "q-learning") return std::make_unique<ScalarQAgent>(cfg, env);
    if (cfg.algorithm == "scalarised-q") return std::make_unique<ScalarisedAgent>(cfg, env);
    throw ConfigError({"algorithm: '" + cfg.algorithm + "' unknown"});
}

}  // namespace dmcts::harness
