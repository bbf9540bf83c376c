#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmcts {

/// An n-dimensional episode return or immediate reward, one entry per
/// objective. Scalar (risk-aware) problems use n = 1.
using ReturnVector = Eigen::VectorXd;

/// Optimality criterion: ESR applies the utility function to every full
/// episode return before averaging; SER applies it to the expected return.
enum class Criterion { ESR, SER };

class dimension_mismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class contract_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void check_same_length(const ReturnVector& a, const ReturnVector& b, const char* where) {
    if (a.size() != b.size()) {
        throw dimension_mismatch(std::string(where) + ": objective counts differ (" +
                                 std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
}

inline ReturnVector zero_return(int objectives) {
    return ReturnVector::Zero(objectives);
}

/// Elementwise accumulation of a step reward into an accrued return.
inline ReturnVector accumulate_returns(const ReturnVector& accrued, const ReturnVector& step_reward) {
    check_same_length(accrued, step_reward, "accumulate_returns");
    return accrued + step_reward;
}

/// Rewards are quantised to 9 decimal places when used as tree outcome keys
/// so floating-point noise cannot split chance-node children.
inline std::vector<std::int64_t> quantise_reward(const ReturnVector& r) {
    std::vector<std::int64_t> q(static_cast<std::size_t>(r.size()));
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        q[static_cast<std::size_t>(i)] = std::llround(r[i] * 1e9);
    }
    return q;
}

}  // namespace dmcts
