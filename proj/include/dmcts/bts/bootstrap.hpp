#pragma once

#include "dmcts/core/random.hpp"
#include "dmcts/core/types.hpp"
#include "dmcts/core/utility.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dmcts {

using FlipLog = std::vector<std::uint8_t>;

/// A bootstrap approximation of the posterior over expected utility (ESR) or
/// expected return vectors (SER). Each of the J replicates keeps running
/// statistics (alpha_j, beta_j); the replicate mean alpha_j / beta_j estimates
/// the expected payoff. Replicates are re-weighted online: every observation
/// is absorbed by replicate j only when an independent Bernoulli(1/2) coin
/// lands heads, which is what makes the replicate set behave like a posterior
/// sample. Single-writer: only the owning tree node mutates a distribution.
class BootstrapDistribution {
public:
    BootstrapDistribution(int replicate_count, Criterion mode, int objective_count,
                          double alpha_prior);

    Criterion mode() const { return mode_; }
    int replicate_count() const { return static_cast<int>(beta_.size()); }
    int objective_count() const { return static_cast<int>(alpha_.cols()); }
    double alpha_prior() const { return prior_; }
    long update_count() const { return updates_; }

    /// ESR observation: the utility of a full episode return. One coin flip
    /// per replicate; heads absorbs the observation. Flips are appended to
    /// `log` when given, so a recorded trace can be replayed exactly.
    void update(double observation, Rng& rng, FlipLog* log = nullptr);

    /// SER observation: the full episode return vector.
    void update(const ReturnVector& observation, Rng& rng, FlipLog* log = nullptr);

    /// Deterministic core of update(): applies one flip per replicate.
    void apply_flips(double observation, std::span<const std::uint8_t> flips);
    void apply_flips(const ReturnVector& observation, std::span<const std::uint8_t> flips);

    /// alpha_j / beta_j for replicate j (0-based), scalar form (ESR).
    double replicate_mean(int j) const;
    /// Elementwise alpha_j / beta_j (SER).
    ReturnVector replicate_mean_vector(int j) const;

    /// (sum_j alpha_j) / (sum_j beta_j): the all-data mean that ignores the
    /// replicate structure. Used for execution-phase action choice.
    double pooled_mean() const;
    ReturnVector pooled_mean_vector() const;

    double beta(int j) const;
    double alpha_scalar(int j) const;

    /// Checkpoint snapshot; field names are fixed by the harness schema.
    std::string to_json() const;
    static BootstrapDistribution from_json(const std::string& text);

private:
    void check_replicate(int j) const;

    Criterion mode_;
    double prior_;
    Eigen::MatrixXd alpha_;  // J x n (n = 1 in ESR mode)
    Eigen::VectorXd beta_;   // J
    long updates_ = 0;
};

/// Thompson step over sibling distributions: draws one replicate per child
/// independently and returns the index with the best sampled mean. In SER
/// mode the utility is applied to the sampled mean vector first; in ESR mode
/// utilities were applied before the observations went in, so u is null.
/// Ties break to the lowest index.
int thompson_select(std::span<const BootstrapDistribution* const> children,
                    const UtilityFunction* u, Rng& rng);

/// Execution-phase step: scores each child by its pooled mean (u-projected in
/// SER mode) and returns the argmax, lowest index on ties.
int greedy_select(std::span<const BootstrapDistribution* const> children,
                  const UtilityFunction* u);

}  // namespace dmcts
