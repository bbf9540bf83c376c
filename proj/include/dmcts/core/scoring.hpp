#pragma once

#include "dmcts/core/types.hpp"
#include "dmcts/core/utility.hpp"

#include <vector>

namespace dmcts {

/// How an executed episode is scored into a learning-curve point.
/// Cumulative applies the utility once to the summed episode return;
/// PerStep applies it to each immediate reward and sums the utilities.
/// The two agree for linear utilities and for any all-zero episode.
enum class UtilityScoring { Cumulative, PerStep };

inline double score_episode(const UtilityFunction& u,
                            const std::vector<ReturnVector>& step_rewards,
                            int objective_count,
                            UtilityScoring mode) {
    if (mode == UtilityScoring::PerStep) {
        double total = 0.0;
        for (const auto& r : step_rewards) total += u(r);
        return total;
    }
    ReturnVector sum = zero_return(objective_count);
    for (const auto& r : step_rewards) sum = accumulate_returns(sum, r);
    return u(sum);
}

}  // namespace dmcts
