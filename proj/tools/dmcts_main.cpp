#include "dmcts/envs/ddst.hpp"
#include "dmcts/envs/fishwood.hpp"
#include "dmcts/envs/risk_mdp.hpp"
#include "dmcts/harness/experiment.hpp"
#include "dmcts/oracles/oracles.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::atomic<bool> g_stop{false};

void handle_sigint(int) { g_stop.store(true); }

void write_json_report(const std::string& path, const nlohmann::json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_dir, int parallelism, bool tree_stats, bool fresh_tree,
            bool verbose) {
    std::vector<std::string> all_overrides = overrides;
    if (fresh_tree) all_overrides.push_back("dmcts.fresh_tree=true");

    dmcts::harness::ExperimentConfig cfg;
    try {
        cfg = dmcts::harness::load_experiment_config(config_path, all_overrides);
    } catch (const dmcts::harness::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }

    dmcts::harness::RunOptions opts;
    if (!out_dir.empty()) opts.output_root = out_dir;
    opts.parallelism = parallelism;
    opts.tree_stats = tree_stats;
    opts.stop = &g_stop;
    opts.quiet = !verbose;

    std::signal(SIGINT, handle_sigint);
    try {
        auto result = dmcts::harness::run_experiment(cfg, opts);
        if (result.interrupted) {
            std::cerr << "interrupted: completed runs kept under " << result.experiment_dir << "\n";
            return kExitRuntime;
        }
        std::cout << "wrote " << result.run_files.size() << " runs under "
                  << result.experiment_dir.string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_validate(const std::string& config_path, const std::vector<std::string>& overrides) {
    try {
        auto cfg = dmcts::harness::load_experiment_config(config_path, overrides);
        // Also exercise derived objects so schema errors surface here.
        cfg.make_utility();
        std::cout << "config ok: " << cfg.experiment << " (" << cfg.algorithm << " on "
                  << cfg.domain << ", " << cfg.runs << " runs x " << cfg.episodes
                  << " episodes)\n";
        return kExitOk;
    } catch (const dmcts::harness::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config invalid:\n  - " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_plot(const std::string& experiment_dir, int window) {
    try {
        dmcts::harness::rebuild_aggregate(experiment_dir, window);
        std::cout << "rebuilt aggregate.csv and plot.gp under " << experiment_dir << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "plot failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_oracle(const std::string& domain, const std::string& config_path,
               const std::vector<double>& target, const std::string& out_path, int instances,
               std::uint64_t seed) {
    try {
        nlohmann::json report;
        if (domain == "fishwood") {
            auto cfg = dmcts::envs::FishwoodConfig::from_json_file(config_path);
            dmcts::oracles::FishwoodDp dp(cfg);
            report["domain"] = "fishwood";
            report["optimal_value"] = dp.optimal_value();
            report["optimal_first_action"] =
                dp.optimal_action(cfg.start_state, 0, 0, 0) == 0 ? "stay" : "move";
            std::printf("fishwood V*(start) = %.6f\n", dp.optimal_value());
        } else if (domain == "risk-mdp") {
            auto cfg = dmcts::envs::RiskMdpConfig::from_json_file(config_path);
            auto r = dmcts::oracles::solve_risk_mdp(cfg);
            report["domain"] = "risk-mdp";
            report["constant_policy_utility"] = r.constant_policy_utility;
            report["optimal_utility"] = r.optimal_utility;
            report["invest_zero_uniquely_optimal"] = r.invest_zero_uniquely_optimal;
            std::printf("risk-mdp optimal E[u] = %.6f (invest-0 uniquely optimal: %s)\n",
                        r.optimal_utility, r.invest_zero_uniquely_optimal ? "yes" : "no");
            for (std::size_t a = 0; a < r.constant_policy_utility.size(); ++a) {
                std::printf("  constant invest-%zu: E[u] = %.6f\n", a,
                            r.constant_policy_utility[a]);
            }
        } else if (domain == "ddst") {
            auto map = dmcts::envs::DdstMap::from_json_file(config_path);
            dmcts::ReturnVector t(3);
            t << target[0], target[1], target[2];
            auto r = dmcts::oracles::analyse_ddst(map, t);
            report["domain"] = "ddst";
            report["best_treasure"] = r.best_value;
            report["best_cell"] = {r.best_row, r.best_col};
            report["safe_path_length"] = r.best_safe_length;
            report["best_utility"] = r.best_utility;
            report["target_self_utility"] = r.target_self_utility;
            std::printf("ddst best treasure %.0f at (%d,%d), safe path length %d\n", r.best_value,
                        r.best_row, r.best_col, r.best_safe_length);
            std::printf("u([v,0,-len]) = %.6f, u(target) = %.6f\n", r.best_utility,
                        r.target_self_utility);
        } else if (domain == "small-esr") {
            dmcts::Rng rng(seed);
            auto u = dmcts::UtilityFunction::exponential_risk_averse();
            dmcts::oracles::SmallMdpOptions opts;
            nlohmann::json list = nlohmann::json::array();
            for (int i = 0; i < instances; ++i) {
                auto mdp = dmcts::oracles::random_small_mdp(rng, opts, u);
                auto q = dmcts::oracles::esr_action_values(mdp, u);
                int best = 0;
                for (std::size_t a = 1; a < q.size(); ++a) {
                    if (q[a] > q[static_cast<std::size_t>(best)]) best = static_cast<int>(a);
                }
                nlohmann::json inst;
                inst["states"] = mdp.n_states;
                inst["actions"] = mdp.n_actions;
                inst["horizon"] = mdp.horizon;
                inst["action_values"] = q;
                inst["optimal_action"] = best;
                list.push_back(inst);
                std::printf("instance %d: optimal action %d (value %.4f)\n", i, best,
                            q[static_cast<std::size_t>(best)]);
            }
            report["domain"] = "small-esr";
            report["instances"] = list;
        } else {
            std::cerr << "oracle: unsupported domain '" << domain
                      << "' (use fishwood, risk-mdp, ddst or small-esr)\n";
            return kExitConfig;
        }
        write_json_report(out_path, report);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "oracle failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributional Monte Carlo Tree Search experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    int parallelism = 0;
    bool tree_stats = false;
    bool fresh_tree = false;
    bool verbose = false;

    auto* run = app.add_subcommand("run", "Run an experiment config and write learning curves");
    run->add_option("--config", config_path, "Experiment config JSON")->required();
    run->add_option("--override", overrides,
                    "Config override as dotted.key=value; repeatable, applied in order");
    run->add_option("--out", out_dir, "Output root (beats $DMCTS_OUT and the config)");
    run->add_option("--parallelism", parallelism, "Worker pool size (0 = hardware threads)");
    run->add_flag("--tree-stats", tree_stats, "Dump per-episode tree statistics JSON lines");
    run->add_flag("--fresh-tree", fresh_tree, "Rebuild the search tree every execution step");
    run->add_flag("--verbose", verbose, "Report progress");

    auto* validate = app.add_subcommand("validate", "Check a config and report every violation");
    validate->add_option("--config", config_path, "Experiment config JSON")->required();
    validate->add_option("--override", overrides, "Config override as dotted.key=value");

    std::string oracle_domain;
    std::string oracle_out;
    std::vector<double> oracle_target{54.0, 0.0, -14.0};
    int oracle_instances = 20;
    std::uint64_t oracle_seed = 7;
    auto* oracle = app.add_subcommand("oracle", "Exact solvers used as test ground truth");
    oracle->add_option("domain", oracle_domain, "fishwood | risk-mdp | ddst | small-esr")
        ->required();
    oracle->add_option("--config", config_path, "Domain config JSON (not used by small-esr)");
    oracle->add_option("--target", oracle_target, "Target vector for the ddst utility")
        ->expected(3);
    oracle->add_option("--out", oracle_out, "Write the report as JSON to this path");
    oracle->add_option("--instances", oracle_instances, "small-esr: number of random instances");
    oracle->add_option("--seed", oracle_seed, "small-esr: instance generator seed");

    std::string experiment_dir;
    int window = 50;
    auto* plot = app.add_subcommand("plot", "Rebuild aggregate.csv and plot.gp from run files");
    plot->add_option("--experiment-dir", experiment_dir, "Directory holding run-*.csv")
        ->required();
    plot->add_option("--window", window, "Smoothing window in episodes");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return cmd_run(config_path, overrides, out_dir, parallelism, tree_stats, fresh_tree,
                       verbose);
    }
    if (validate->parsed()) return cmd_validate(config_path, overrides);
    if (oracle->parsed()) {
        return cmd_oracle(oracle_domain, config_path, oracle_target, oracle_out, oracle_instances,
                          oracle_seed);
    }
    if (plot->parsed()) return cmd_plot(experiment_dir, window);
    return kExitConfig;
}
