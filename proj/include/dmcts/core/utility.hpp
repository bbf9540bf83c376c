#pragma once

#include "dmcts/core/types.hpp"

namespace dmcts {

enum class UtilityKind {
    Linear,                // u(r) = w . r
    ExponentialRiskAverse, // u(r) = 1 - exp(-r), scalar domains
    FishwoodMinFloor,      // u([fish, wood]) = min(fish, floor(wood / 2))
    TargetVector,          // largest c >= 0 with r - c * e >= 0 elementwise
};

/// A declared user preference mapping a return vector to a scalar utility.
/// Evaluation is pure and deterministic; instances are immutable after
/// construction and safe to share between threads.
class UtilityFunction {
public:
    static UtilityFunction linear(ReturnVector weights);
    static UtilityFunction exponential_risk_averse();
    static UtilityFunction fishwood_min_floor();
    static UtilityFunction target_vector(ReturnVector target);

    double operator()(const ReturnVector& r) const;

    UtilityKind kind() const { return kind_; }

    /// Objective count the function expects, or -1 if any length is accepted.
    int expected_objectives() const;

    const ReturnVector& weights() const { return params_; }
    const ReturnVector& target() const { return params_; }
    /// Unit direction e = target / |target| (TargetVector kind only).
    const ReturnVector& direction() const { return direction_; }
    double target_norm() const { return target_norm_; }

private:
    UtilityFunction(UtilityKind kind, ReturnVector params);

    UtilityKind kind_;
    ReturnVector params_;
    ReturnVector direction_;
    double target_norm_ = 0.0;
};

/// The largest c >= 0 such that r - c * e stays componentwise nonnegative,
/// where e is the unit direction of r_target. Components with a zero target
/// direction must themselves be nonnegative, otherwise the utility is 0.
/// The feasible set is taken closed so the supremum is attained.
double target_vector_utility(const ReturnVector& r, const ReturnVector& r_target);

}  // namespace dmcts
