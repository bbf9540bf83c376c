#pragma once

#include "dmcts/core/random.hpp"
#include "dmcts/core/types.hpp"

#include <cstdint>
#include <memory>

namespace dmcts {

struct StepResult {
    ReturnVector reward;
    bool terminal = false;
};

/// Contract every simulated domain implements.
///
/// Environments are single-owner and cheap to clone; clones share immutable
/// configuration and carry independent mutable state. Sampling a transition is
/// the only source of stochasticity and is driven entirely by the injected
/// random stream, so the planner can run simulations from any reached state
/// without disturbing the real episode.
class EnvironmentModel {
public:
    virtual ~EnvironmentModel() = default;

    virtual int objective_count() const = 0;
    virtual int action_count() const = 0;
    /// Finite episode length bound, in timesteps. Every episode terminates
    /// within this many steps.
    virtual int horizon() const = 0;

    /// Samples the initial state from the initial-state distribution.
    virtual void reset(Rng& rng) = 0;
    virtual StepResult step(int action, Rng& rng) = 0;
    virtual bool done() const = 0;
    virtual int timestep() const = 0;

    /// Hashable identifier of the current observable state (timestep excluded;
    /// tabular learners key on (state_key, timestep)).
    virtual std::uint64_t state_key() const = 0;

    virtual std::unique_ptr<EnvironmentModel> clone() const = 0;
};

}  // namespace dmcts
