#pragma once

#include "dmcts/baselines/q_learning.hpp"
#include "dmcts/core/environment.hpp"
#include "dmcts/harness/config.hpp"
#include "dmcts/tree/planner.hpp"

#include <memory>

namespace dmcts::harness {

/// What the experiment loop needs from any algorithm: an action per real
/// timestep (spending the simulated-learning budget inside the call) and the
/// observed real transition afterwards.
class Agent {
public:
    virtual ~Agent() = default;

    virtual void begin_episode(const EnvironmentModel& env, int episode_index) = 0;
    virtual int select_action(const EnvironmentModel& env, const ReturnVector& accrued,
                              Rng& rng) = 0;
    virtual void observe_transition(const EnvironmentModel& env_after, int action,
                                    const ReturnVector& reward, bool terminal, Rng& rng) = 0;
    /// Total simulated policy executions consumed so far (fairness counter).
    virtual long simulated_executions() const = 0;

    /// Non-null for the planning agent; used by the tree-statistics dump.
    virtual const DmctsPlanner* planner() const { return nullptr; }
};

std::unique_ptr<Agent> make_agent(const ExperimentConfig& cfg, const EnvironmentModel& env);

}  // namespace dmcts::harness
