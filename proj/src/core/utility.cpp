#include "dmcts/core/utility.hpp"

#include <cmath>
#include <limits>

namespace dmcts {

UtilityFunction::UtilityFunction(UtilityKind kind, ReturnVector params)
    : kind_(kind), params_(std::move(params)) {
    if (kind_ == UtilityKind::TargetVector) {
        target_norm_ = params_.norm();
        if (!(target_norm_ > 0.0)) {
            throw contract_violation("target_vector utility: target vector must be nonzero");
        }
        bool has_positive = (params_.array() > 0.0).any();
        if (!has_positive) {
            throw contract_violation(
                "target_vector utility: target needs at least one positive component, "
                "otherwise the maximal feasible c is unbounded");
        }
        direction_ = params_ / target_norm_;
    }
}

UtilityFunction UtilityFunction::linear(ReturnVector weights) {
    if (weights.size() < 1) {
        throw contract_violation("linear utility: needs one weight per objective");
    }
    return UtilityFunction(UtilityKind::Linear, std::move(weights));
}

UtilityFunction UtilityFunction::exponential_risk_averse() {
    return UtilityFunction(UtilityKind::ExponentialRiskAverse, ReturnVector::Zero(1));
}

UtilityFunction UtilityFunction::fishwood_min_floor() {
    return UtilityFunction(UtilityKind::FishwoodMinFloor, ReturnVector::Zero(2));
}

UtilityFunction UtilityFunction::target_vector(ReturnVector target) {
    return UtilityFunction(UtilityKind::TargetVector, std::move(target));
}

int UtilityFunction::expected_objectives() const {
    switch (kind_) {
        case UtilityKind::Linear:
        case UtilityKind::TargetVector:
            return static_cast<int>(params_.size());
        case UtilityKind::ExponentialRiskAverse:
            return 1;
        case UtilityKind::FishwoodMinFloor:
            return 2;
    }
    return -1;
}

double UtilityFunction::operator()(const ReturnVector& r) const {
    int expected = expected_objectives();
    if (expected >= 0 && r.size() != expected) {
        throw dimension_mismatch("utility evaluation: objective counts differ (" +
                                 std::to_string(r.size()) + " vs " + std::to_string(expected) + ")");
    }
    switch (kind_) {
        case UtilityKind::Linear:
            return params_.dot(r);
        case UtilityKind::ExponentialRiskAverse:
            return 1.0 - std::exp(-r[0]);
        case UtilityKind::FishwoodMinFloor:
            return std::min(r[0], std::floor(r[1] / 2.0));
        case UtilityKind::TargetVector:
            return target_vector_utility(r, params_);
    }
    return 0.0;
}

double target_vector_utility(const ReturnVector& r, const ReturnVector& r_target) {
    check_same_length(r, r_target, "target_vector_utility");
    double norm = r_target.norm();
    if (!(norm > 0.0)) {
        throw contract_violation("target_vector_utility: target vector must be nonzero");
    }

    // r - c*e >= 0: components with e > 0 give upper bounds c <= r/e, components
    // with e < 0 give lower bounds c >= r/e, components with e == 0 degenerate
    // to the membership test r >= 0.
    double upper = std::numeric_limits<double>::infinity();
    double lower = 0.0;
    for (Eigen::Index o = 0; o < r.size(); ++o) {
        double e = r_target[o] / norm;
        if (r_target[o] == 0.0) {
            if (r[o] < 0.0) return 0.0;
        } else if (e > 0.0) {
            upper = std::min(upper, r[o] / e);
        } else {
            lower = std::max(lower, r[o] / e);
        }
    }
    // Boundary-exact returns (r = c * target) land on upper == lower up to
    // division rounding; a small tolerance keeps the closed feasible set
    // closed in floating point.
    double tol = 1e-9 * std::max(1.0, std::max(std::abs(upper), std::abs(lower)));
    if (upper < lower - tol) return 0.0;
    return std::max(upper, 0.0);
}

}  // namespace dmcts
