#include "dmcts/harness/experiment.hpp"

#include "dmcts/core/scoring.hpp"
#include "dmcts/envs/factory.hpp"
#include "dmcts/harness/agents.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace dmcts::harness {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file_atomically(const fs::path& target, const std::string& content) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

std::string curve_to_csv(const std::vector<double>& curve) {
    std::string out = "episode,utility\n";
    for (std::size_t e = 0; e < curve.size(); ++e) {
        out += std::to_string(e) + "," + format_double(curve[e]) + "\n";
    }
    return out;
}

const char* kPlotScript =
    "# gnuplot script; run from this directory, e.g.  gnuplot -p plot.gp\n"
    "set datafile separator \",\"\n"
    "set xlabel \"episode\"\n"
    "set ylabel \"realised utility\"\n"
    "set key bottom right\n"
    "plot \"aggregate.csv\" every ::1 using 1:($2-$3):($2+$3) with filledcurves \\\n"
    "       fs transparent solid 0.25 lc rgb \"#4477aa\" title \"mean +/- stderr\", \\\n"
    "     \"aggregate.csv\" every ::1 using 1:4 with lines lw 2 lc rgb \"#cc3311\" \\\n"
    "       title \"smoothed mean\"\n";

struct RunOutput {
    std::vector<double> curve;
    std::string tree_stats;  // JSON lines, one per episode, when enabled
};

RunOutput execute_run(const ExperimentConfig& cfg, int run_index, bool tree_stats,
                      std::atomic<bool>* stop) {
    Rng rng = seed_schedule(cfg.base_seed, static_cast<std::uint64_t>(run_index));
    auto env = envs::make_environment(cfg.domain, cfg.domain_config);
    auto agent = make_agent(cfg, *env);
    UtilityFunction utility = cfg.make_utility();
    const int n = env->objective_count();
    const long budget = cfg.executions_per_step();

    RunOutput out;
    out.curve.reserve(static_cast<std::size_t>(cfg.episodes));

    std::vector<ReturnVector> step_rewards;
    for (int e = 0; e < cfg.episodes; ++e) {
        if (stop && stop->load()) break;
        env->reset(rng);
        agent->begin_episode(*env, e);
        ReturnVector accrued = zero_return(n);
        step_rewards.clear();

        while (!env->done()) {
            long before = agent->simulated_executions();
            int action = agent->select_action(*env, accrued, rng);
            long consumed = agent->simulated_executions() - before;
            if (consumed != budget) {
                throw contract_violation("fairness: consumed " + std::to_string(consumed) +
                                         " policy executions in one step, budget is " +
                                         std::to_string(budget));
            }
            StepResult sr = env->step(action, rng);
            agent->observe_transition(*env, action, sr.reward, sr.terminal, rng);
            step_rewards.push_back(sr.reward);
            accrued += sr.reward;
        }
        out.curve.push_back(score_episode(utility, step_rewards, n, cfg.scoring));

        if (tree_stats && agent->planner()) {
            out.tree_stats += agent->planner()->tree_stats().to_json();
            out.tree_stats += "\n";
        }
    }
    return out;
}

std::vector<std::vector<double>> parse_all(const std::vector<fs::path>& run_files) {
    if (run_files.empty()) throw std::runtime_error("aggregate: no run files");
    std::vector<std::vector<double>> curves;
    curves.reserve(run_files.size());
    std::size_t len = 0;
    for (const auto& f : run_files) {
        curves.push_back(read_curve_csv(f));
        if (curves.size() == 1) {
            len = curves.back().size();
        } else if (curves.back().size() != len) {
            throw std::runtime_error("aggregate: ragged run files (" + f.string() + " has " +
                                     std::to_string(curves.back().size()) + " episodes, expected " +
                                     std::to_string(len) + ")");
        }
    }
    return curves;
}

}  // namespace

std::vector<double> read_curve_csv(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::vector<double> curve;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        curve.push_back(std::stod(line.substr(comma + 1)));
    }
    return curve;
}

AggregateCurve aggregate_runs(const std::vector<fs::path>& run_files, int window) {
    auto curves = parse_all(run_files);
    const std::size_t episodes = curves[0].size();
    const double k = static_cast<double>(curves.size());

    AggregateCurve agg;
    agg.mean.resize(episodes);
    agg.stderr_.resize(episodes);
    for (std::size_t e = 0; e < episodes; ++e) {
        double m = 0.0;
        for (const auto& c : curves) m += c[e];
        m /= k;
        double var = 0.0;
        if (curves.size() > 1) {
            for (const auto& c : curves) var += (c[e] - m) * (c[e] - m);
            var /= (k - 1.0);
        }
        agg.mean[e] = m;
        agg.stderr_[e] = std::sqrt(var / k);
    }

    agg.smoothed.resize(episodes);
    double acc = 0.0;
    for (std::size_t e = 0; e < episodes; ++e) {
        acc += agg.mean[e];
        if (e >= static_cast<std::size_t>(window)) acc -= agg.mean[e - static_cast<std::size_t>(window)];
        std::size_t span = std::min<std::size_t>(e + 1, static_cast<std::size_t>(window));
        agg.smoothed[e] = acc / static_cast<double>(span);
    }

    double lo = agg.mean[0], hi = agg.mean[0];
    for (double m : agg.mean) {
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    agg.normalised.resize(episodes);
    for (std::size_t e = 0; e < episodes; ++e) {
        agg.normalised[e] = (hi > lo) ? (agg.mean[e] - lo) / (hi - lo) : 0.0;
    }
    return agg;
}

namespace {

void write_aggregate_files(const fs::path& dir, const std::vector<fs::path>& run_files, int window) {
    AggregateCurve agg = aggregate_runs(run_files, window);
    std::string csv = "episode,mean,stderr,mean_smooth,mean_norm\n";
    for (std::size_t e = 0; e < agg.mean.size(); ++e) {
        csv += std::to_string(e) + "," + format_double(agg.mean[e]) + "," +
               format_double(agg.stderr_[e]) + "," + format_double(agg.smoothed[e]) + "," +
               format_double(agg.normalised[e]) + "\n";
    }
    write_file_atomically(dir / "aggregate.csv", csv);
    write_file_atomically(dir / "plot.gp", kPlotScript);
}

}  // namespace

void rebuild_aggregate(const fs::path& experiment_dir, int window) {
    std::vector<fs::path> run_files;
    for (int k = 0;; ++k) {
        fs::path f = experiment_dir / ("run-" + std::to_string(k) + ".csv");
        if (!fs::exists(f)) break;
        run_files.push_back(f);
    }
    if (run_files.empty()) {
        throw std::runtime_error("no run-*.csv files under " + experiment_dir.string());
    }
    write_aggregate_files(experiment_dir, run_files, window);
}

fs::path resolve_output_root(const ExperimentConfig& cfg, const RunOptions& opts) {
    if (opts.output_root.has_value()) return *opts.output_root;
    if (const char* env_root = std::getenv("DMCTS_OUT")) return env_root;
    return cfg.output_dir;
}

std::vector<double> run_single(const ExperimentConfig& cfg, int run_index, const RunOptions& opts) {
    return execute_run(cfg, run_index, opts.tree_stats, opts.stop).curve;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    ExperimentResult result;
    fs::path root = resolve_output_root(cfg, opts);
    result.experiment_dir = root / cfg.experiment;
    fs::create_directories(result.experiment_dir);

    result.curves.resize(static_cast<std::size_t>(cfg.runs));
    result.run_files.resize(static_cast<std::size_t>(cfg.runs));
    std::vector<char> completed(static_cast<std::size_t>(cfg.runs), 0);

    int workers = opts.parallelism > 0 ? opts.parallelism
                                       : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, cfg.runs));

    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        while (true) {
            int k = next.fetch_add(1);
            if (k >= cfg.runs) return;
            if (opts.stop && opts.stop->load()) return;
            try {
                RunOutput out = execute_run(cfg, k, opts.tree_stats, opts.stop);
                if (opts.stop && opts.stop->load() &&
                    out.curve.size() != static_cast<std::size_t>(cfg.episodes)) {
                    return;  // drained mid-run; completed runs stay intact
                }
                fs::path file = result.experiment_dir / ("run-" + std::to_string(k) + ".csv");
                write_file_atomically(file, curve_to_csv(out.curve));
                if (opts.tree_stats && !out.tree_stats.empty()) {
                    write_file_atomically(
                        result.experiment_dir / ("run-" + std::to_string(k) + "-tree.jsonl"),
                        out.tree_stats);
                }
                result.curves[static_cast<std::size_t>(k)] = std::move(out.curve);
                result.run_files[static_cast<std::size_t>(k)] = file;
                completed[static_cast<std::size_t>(k)] = 1;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                if (opts.stop) opts.stop->store(true);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    result.interrupted = opts.stop && opts.stop->load();
    bool all_done = true;
    for (char c : completed) all_done = all_done && c;
    if (!all_done) {
        result.interrupted = true;
        return result;  // partial: keep completed run files, no aggregate
    }

    write_aggregate_files(result.experiment_dir, result.run_files, cfg.smoothing_window);

    nlohmann::json meta;
    // Fully inline config: reloading this object reproduces the experiment.
    nlohmann::json config_echo = cfg.raw;
    config_echo["domain_config"] = cfg.domain_config;
    config_echo.erase("domain_overrides");
    meta["config"] = config_echo;
    meta["applied_overrides"] = cfg.applied_overrides;
    meta["base_seed"] = cfg.base_seed;
    nlohmann::json seeds = nlohmann::json::array();
    for (int k = 0; k < cfg.runs; ++k) {
        seeds.push_back(derive_seed(cfg.base_seed, static_cast<std::uint64_t>(k)));
    }
    meta["run_seeds"] = seeds;
    meta["executions_per_step"] = cfg.executions_per_step();
    meta["fairness_checked"] = true;
    meta["baseline_signal"] = cfg.qlearning.signal;
    meta["utility_scoring"] =
        (cfg.scoring == UtilityScoring::Cumulative) ? "cumulative" : "per-step";
    meta["smoothing_window"] = cfg.smoothing_window;
    meta["runs"] = cfg.runs;
    meta["episodes"] = cfg.episodes;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : result.run_files) files.push_back(f.filename().string());
    meta["run_files"] = files;
    meta["written_at"] = static_cast<long>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch()).count());
    write_file_atomically(result.experiment_dir / "metadata.json", meta.dump(2) + "\n");

    return result;
}

}  // namespace dmcts::harness
