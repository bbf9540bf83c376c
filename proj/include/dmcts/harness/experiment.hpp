#pragma once

#include "dmcts/harness/config.hpp"

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dmcts::harness {

struct RunOptions {
    /// Output root precedence: this field, then $DMCTS_OUT, then the config.
    std::optional<std::string> output_root;
    int parallelism = 0;  // 0 = one worker per hardware thread, capped by runs
    bool tree_stats = false;
    std::atomic<bool>* stop = nullptr;  // cooperative cancel (clean drain)
    bool quiet = true;
};

struct ExperimentResult {
    std::filesystem::path experiment_dir;
    std::vector<std::filesystem::path> run_files;
    std::vector<std::vector<double>> curves;  // per run, per episode realised utility
    bool interrupted = false;
};

/// Executes runs x episodes of the configured experiment. Each run gets its
/// own derived random stream and its own environment and agent; runs execute
/// on a bounded worker pool and never share mutable state. Raw per-run CSVs,
/// the aggregate CSV, a metadata record and a gnuplot script are written
/// atomically under <output root>/<experiment>/.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// One seeded run: the per-episode realised utilities (the configured scoring
/// of each executed episode's returns).
std::vector<double> run_single(const ExperimentConfig& cfg, int run_index,
                               const RunOptions& opts = {});

struct AggregateCurve {
    std::vector<double> mean;
    std::vector<double> stderr_;
    std::vector<double> smoothed;    // trailing-window mean of `mean`
    std::vector<double> normalised;  // min-max scaled mean, 0 when flat
};

/// Recomputes the aggregate from raw per-run files (ragged inputs -> error).
AggregateCurve aggregate_runs(const std::vector<std::filesystem::path>& run_files, int window);

std::vector<double> read_curve_csv(const std::filesystem::path& file);

/// Rebuilds aggregate.csv and plot.gp inside an experiment directory from
/// whatever run-*.csv files are present.
void rebuild_aggregate(const std::filesystem::path& experiment_dir, int window);

std::filesystem::path resolve_output_root(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace dmcts::harness
