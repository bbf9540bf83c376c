#include "dmcts/oracles/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace dmcts::oracles {

FishwoodDp::FishwoodDp(const envs::FishwoodConfig& cfg) : cfg_(cfg) {
    const int H = cfg_.horizon;
    const int counts = H + 1;
    v_.assign(static_cast<std::size_t>(2 * counts * counts * (H + 1)), 0.0);

    for (int t = H; t >= 0; --t) {
        for (int loc = 0; loc < 2; ++loc) {
            for (int fish = 0; fish <= H; ++fish) {
                for (int wood = 0; wood <= H; ++wood) {
                    double val;
                    if (t == H) {
                        val = std::min(static_cast<double>(fish), std::floor(wood / 2.0));
                    } else {
                        val = std::max(action_value(loc, fish, wood, t, 0),
                                       action_value(loc, fish, wood, t, 1));
                    }
                    v_[index(loc, fish, wood, t)] = val;
                }
            }
        }
    }
}

std::size_t FishwoodDp::index(int location, int fish, int wood, int t) const {
    const int counts = cfg_.horizon + 1;
    return static_cast<std::size_t>(((location * counts + fish) * counts + wood) * (cfg_.horizon + 1) + t);
}

double FishwoodDp::value(int location, int fish, int wood, int t) const {
    fish = std::min(fish, cfg_.horizon);
    wood = std::min(wood, cfg_.horizon);
    return v_[index(location, fish, wood, t)];
}

double FishwoodDp::action_value(int location, int fish, int wood, int t, int action) const {
    // The action decides where the timestep is spent; the draw happens there.
    int target = (action == envs::FishwoodEnv::kMove) ? 1 - location : location;
    double p = (target == envs::FishwoodEnv::kRiver) ? cfg_.p_fish : cfg_.p_wood;
    int fish2 = fish + ((target == envs::FishwoodEnv::kRiver) ? 1 : 0);
    int wood2 = wood + ((target == envs::FishwoodEnv::kWoods) ? 1 : 0);
    return p * value(target, fish2, wood2, t + 1) + (1.0 - p) * value(target, fish, wood, t + 1);
}

int FishwoodDp::optimal_action(int location, int fish, int wood, int t) const {
    double stay = action_value(location, fish, wood, t, 0);
    double move = action_value(location, fish, wood, t, 1);
    return move > stay ? 1 : 0;
}

double FishwoodDp::optimal_value() const {
    return value(cfg_.start_state, 0, 0, 0);
}

RiskOracleReport solve_risk_mdp(const envs::RiskMdpConfig& cfg) {
    const int S = static_cast<int>(cfg.stocks.size());
    const int A = static_cast<int>(cfg.invest_amounts.size());
    const int H = cfg.horizon;

    auto transition = [&](int s, int s2) {
        switch (cfg.rule) {
            case envs::RiskTransitionRule::Uniform:
                return 1.0 / static_cast<double>(S);
            case envs::RiskTransitionRule::Cycle:
                return (s2 == (s + 1) % S) ? 1.0 : 0.0;
            case envs::RiskTransitionRule::Matrix:
                return cfg.transitions[static_cast<std::size_t>(s)][static_cast<std::size_t>(s2)];
        }
        return 0.0;
    };
    // E[exp(-a * multiplier)] for investing `a` in state s.
    auto exp_factor = [&](int s, int a) {
        const auto& st = cfg.stocks[static_cast<std::size_t>(s)];
        double invest = static_cast<double>(cfg.invest_amounts[static_cast<std::size_t>(a)]);
        return st.p_up * std::exp(-invest * st.gain) + (1.0 - st.p_up) * std::exp(invest * st.loss);
    };

    RiskOracleReport report;

    // Constant policies: W_a(s, t) = E[exp(-R_t..) | s, always invest a].
    for (int a = 0; a < A; ++a) {
        std::vector<double> w(static_cast<std::size_t>(S), 1.0);
        for (int t = H - 1; t >= 0; --t) {
            std::vector<double> w2(static_cast<std::size_t>(S));
            for (int s = 0; s < S; ++s) {
                double cont = 0.0;
                for (int s2 = 0; s2 < S; ++s2) cont += transition(s, s2) * w[static_cast<std::size_t>(s2)];
                w2[static_cast<std::size_t>(s)] = exp_factor(s, a) * cont;
            }
            w = std::move(w2);
        }
        report.constant_policy_utility.push_back(1.0 - w[static_cast<std::size_t>(cfg.initial_state)]);
    }

    // Optimal policy: W*(s, t) = min_a E[exp(-r)] * E_s'[W*(s', t+1)], exact
    // because the price draw is independent of the next state.
    std::vector<double> w(static_cast<std::size_t>(S), 1.0);
    report.optimal_action.assign(static_cast<std::size_t>(H), std::vector<int>(static_cast<std::size_t>(S), 0));
    bool unique_zero = true;
    for (int t = H - 1; t >= 0; --t) {
        std::vector<double> w2(static_cast<std::size_t>(S));
        for (int s = 0; s < S; ++s) {
            double cont = 0.0;
            for (int s2 = 0; s2 < S; ++s2) cont += transition(s, s2) * w[static_cast<std::size_t>(s2)];
            double best = std::numeric_limits<double>::infinity();
            int best_a = 0;
            for (int a = 0; a < A; ++a) {
                double val = exp_factor(s, a) * cont;
                if (val < best) {
                    best = val;
                    best_a = a;
                }
            }
            for (int a = 0; a < A; ++a) {
                if (a != best_a && exp_factor(s, a) * cont <= best + 1e-15) unique_zero = false;
            }
            w2[static_cast<std::size_t>(s)] = best;
            report.optimal_action[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] = best_a;
        }
        w = std::move(w2);
    }
    report.optimal_utility = 1.0 - w[static_cast<std::size_t>(cfg.initial_state)];

    for (const auto& row : report.optimal_action) {
        for (int a : row) {
            if (cfg.invest_amounts[static_cast<std::size_t>(a)] != 0) unique_zero = false;
        }
    }
    report.invest_zero_uniquely_optimal = unique_zero;
    return report;
}

namespace {

std::vector<int> bfs_distances(const envs::DdstMap& map, bool allow_sharks) {
    std::vector<int> dist(map.cells.size(), -1);
    std::deque<int> queue;
    int start = map.start_row * map.cols + map.start_col;
    dist[static_cast<std::size_t>(start)] = 0;
    queue.push_back(start);
    static constexpr int dr[4] = {-1, 1, 0, 0};
    static constexpr int dc[4] = {0, 0, -1, 1};
    while (!queue.empty()) {
        int cell = queue.front();
        queue.pop_front();
        int r = cell / map.cols;
        int c = cell % map.cols;
        if (map.cell(r, c) == envs::DdstCell::Treasure) continue;  // terminal
        for (int k = 0; k < 4; ++k) {
            int nr = r + dr[k];
            int nc = c + dc[k];
            if (!map.passable(nr, nc)) continue;
            envs::DdstCell cellk = map.cell(nr, nc);
            if (!allow_sharks &&
                (cellk == envs::DdstCell::Shark || cellk == envs::DdstCell::TerminalShark)) {
                continue;
            }
            int idx = nr * map.cols + nc;
            if (dist[static_cast<std::size_t>(idx)] >= 0) continue;
            dist[static_cast<std::size_t>(idx)] = dist[static_cast<std::size_t>(cell)] + 1;
            queue.push_back(idx);
        }
    }
    return dist;
}

}  // namespace

DdstOracleReport analyse_ddst(const envs::DdstMap& map, const ReturnVector& target) {
    DdstOracleReport report;
    report.target_self_utility = target_vector_utility(target, target);

    auto safe = bfs_distances(map, false);
    auto any = bfs_distances(map, true);

    double best_u = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < map.rows; ++r) {
        for (int c = 0; c < map.cols; ++c) {
            if (map.cell(r, c) != envs::DdstCell::Treasure) continue;
            int d = safe[static_cast<std::size_t>(r * map.cols + c)];
            if (d < 0 || d > map.horizon) continue;
            ReturnVector ret(3);
            ret << map.treasure(r, c), 0.0, -static_cast<double>(d);
            double u = target_vector_utility(ret, target);
            if (u > best_u) {
                best_u = u;
                report.best_value = map.treasure(r, c);
                report.best_row = r;
                report.best_col = c;
                report.best_safe_length = d;
                report.best_utility = u;
            }
        }
    }
    if (report.best_row >= 0) {
        report.shortest_any_path =
            any[static_cast<std::size_t>(report.best_row * map.cols + report.best_col)];
    }
    return report;
}

namespace {

double enumerate_value(const SmallMdp& mdp, const UtilityFunction& u, int state, int t,
                       double accrued);

double enumerate_action_value(const SmallMdp& mdp, const UtilityFunction& u, int state, int t,
                              double accrued, int action) {
    double total = 0.0;
    for (const auto& o :
         mdp.outcomes[static_cast<std::size_t>(state)][static_cast<std::size_t>(action)]) {
        total += o.prob * enumerate_value(mdp, u, o.next_state, t + 1, accrued + o.reward);
    }
    return total;
}

double enumerate_value(const SmallMdp& mdp, const UtilityFunction& u, int state, int t,
                       double accrued) {
    if (t >= mdp.horizon) {
        return u(ReturnVector::Constant(1, accrued));
    }
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < mdp.n_actions; ++a) {
        best = std::max(best, enumerate_action_value(mdp, u, state, t, accrued, a));
    }
    return best;
}

}  // namespace

std::vector<double> esr_action_values(const SmallMdp& mdp, const UtilityFunction& u) {
    std::vector<double> q(static_cast<std::size_t>(mdp.n_actions));
    for (int a = 0; a < mdp.n_actions; ++a) {
        q[static_cast<std::size_t>(a)] =
            enumerate_action_value(mdp, u, mdp.initial_state, 0, 0.0, a);
    }
    return q;
}

SmallMdp random_small_mdp(Rng& rng, const SmallMdpOptions& opts, const UtilityFunction& u) {
    // Rewards stay on a small nonnegative grid so utilities are bounded and
    // pooled-mean comparisons are meaningful at the stated tolerance.
    static constexpr double kRewards[] = {0.0, 0.25, 0.5, 0.75, 1.0};

    for (int attempt = 0; attempt < opts.max_tries; ++attempt) {
        SmallMdp mdp;
        mdp.n_states = 2 + rng.uniform_int(opts.max_states - 1);
        mdp.n_actions = 2 + rng.uniform_int(opts.max_actions - 1);
        mdp.horizon = 2 + rng.uniform_int(opts.max_horizon - 1);
        mdp.outcomes.assign(static_cast<std::size_t>(mdp.n_states), {});
        for (int s = 0; s < mdp.n_states; ++s) {
            auto& per_action = mdp.outcomes[static_cast<std::size_t>(s)];
            per_action.assign(static_cast<std::size_t>(mdp.n_actions), {});
            for (int a = 0; a < mdp.n_actions; ++a) {
                int k = 1 + rng.uniform_int(opts.max_outcomes);
                double total = 0.0;
                std::vector<double> weights(static_cast<std::size_t>(k));
                for (auto& w : weights) {
                    w = 0.05 + rng.uniform01();
                    total += w;
                }
                for (int i = 0; i < k; ++i) {
                    SmallOutcome o;
                    o.prob = weights[static_cast<std::size_t>(i)] / total;
                    o.reward = kRewards[rng.uniform_int(5)];
                    o.next_state = rng.uniform_int(mdp.n_states);
                    per_action[static_cast<std::size_t>(a)].push_back(o);
                }
            }
        }

        auto q = esr_action_values(mdp, u);
        std::vector<double> sorted = q;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        if (sorted[0] - sorted[1] >= opts.min_root_gap) {
            return mdp;
        }
    }
    throw contract_violation("random_small_mdp: could not find an instance with the requested gap");
}

SmallMdpEnv::SmallMdpEnv(SmallMdp mdp) : mdp_(std::move(mdp)) {
    state_ = mdp_.initial_state;
}

void SmallMdpEnv::reset(Rng&) {
    state_ = mdp_.initial_state;
    t_ = 0;
}

StepResult SmallMdpEnv::step(int action, Rng& rng) {
    if (done()) throw contract_violation("small-mdp: step on finished episode");
    if (action < 0 || action >= mdp_.n_actions) {
        throw contract_violation("small-mdp: invalid action index " + std::to_string(action));
    }
    const auto& outcomes =
        mdp_.outcomes[static_cast<std::size_t>(state_)][static_cast<std::size_t>(action)];
    double x = rng.uniform01();
    double acc = 0.0;
    const SmallOutcome* chosen = &outcomes.back();
    for (const auto& o : outcomes) {
        acc += o.prob;
        if (x < acc) {
            chosen = &o;
            break;
        }
    }
    StepResult out;
    out.reward = ReturnVector::Constant(1, chosen->reward);
    state_ = chosen->next_state;
    ++t_;
    out.terminal = done();
    return out;
}

std::unique_ptr<EnvironmentModel> SmallMdpEnv::clone() const {
    return std::make_unique<SmallMdpEnv>(*this);
}

}  // namespace dmcts::oracles
