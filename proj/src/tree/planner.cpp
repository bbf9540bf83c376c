#include "dmcts/tree/planner.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace dmcts {

void ArtificialReturnConfig::validate(int objectives) const {
    if (probability < 0.0 || probability > 1.0) {
        throw contract_violation("artificial returns: probability outside [0,1]");
    }
    if (!enabled()) return;
    if (low.size() != objectives || high.size() != objectives) {
        throw dimension_mismatch("artificial returns: bounds objective counts differ (" +
                                 std::to_string(low.size()) + "/" + std::to_string(high.size()) +
                                 " vs " + std::to_string(objectives) + ")");
    }
    for (Eigen::Index o = 0; o < low.size(); ++o) {
        if (low[o] > high[o]) {
            throw contract_violation("artificial returns: malformed bounds (min > max) for objective " +
                                     std::to_string(o));
        }
    }
}

ReturnVector inject_artificial_return(const ReturnVector& rollout_return,
                                      const ArtificialReturnConfig& cfg, Rng& rng) {
    if (!cfg.enabled()) return rollout_return;
    if (!rng.bernoulli(cfg.probability)) return rollout_return;
    ReturnVector v(rollout_return.size());
    for (Eigen::Index o = 0; o < v.size(); ++o) {
        v[o] = rng.uniform(cfg.low[o], cfg.high[o]);
    }
    return v;
}

DecisionNode::DecisionNode(std::uint64_t state_key, ReturnVector incoming_reward, bool terminal,
                           int action_count)
    : state_key_(state_key),
      incoming_reward_(std::move(incoming_reward)),
      terminal_(terminal),
      children_(static_cast<std::size_t>(action_count)) {}

std::vector<int> DecisionNode::unexpanded_actions() const {
    std::vector<int> out;
    for (int a = 0; a < action_count(); ++a) {
        if (!expanded(a)) out.push_back(a);
    }
    return out;
}

ChanceNode& DecisionNode::expand(int action, const PlannerConfig& cfg, int objectives) {
    auto& slot = children_[static_cast<std::size_t>(action)];
    if (!slot) {
        slot = std::make_unique<ChanceNode>(state_key_, action, cfg, objectives);
    }
    return *slot;
}

ChanceNode::ChanceNode(std::uint64_t state_key, int action, const PlannerConfig& cfg, int objectives)
    : state_key_(state_key),
      action_(action),
      stats_(cfg.replicates, cfg.criterion, objectives, cfg.alpha_prior) {}

std::pair<DecisionNode*, bool> ChanceNode::child_for(const OutcomeKey& key,
                                                     const ReturnVector& reward, bool terminal,
                                                     int action_count) {
    auto it = children_.find(key);
    if (it != children_.end()) {
        return {it->second.get(), false};
    }
    auto node = std::make_unique<DecisionNode>(key.state, reward, terminal, action_count);
    DecisionNode* raw = node.get();
    children_.emplace(key, std::move(node));
    return {raw, true};
}

DecisionNode* ChanceNode::find_child(const OutcomeKey& key) const {
    auto it = children_.find(key);
    return it == children_.end() ? nullptr : it->second.get();
}

DmctsPlanner::DmctsPlanner(PlannerConfig cfg, UtilityFunction utility, int objective_count)
    : cfg_(std::move(cfg)), utility_(std::move(utility)), objectives_(objective_count) {
    if (cfg_.iterations_per_step < 1) {
        throw contract_violation("planner: iterations per step must be >= 1");
    }
    if (objectives_ < 1) throw contract_violation("planner: objective count must be >= 1");
    cfg_.artificial.validate(objectives_);
    // Construction failures surface here rather than at first expansion.
    BootstrapDistribution probe(cfg_.replicates, cfg_.criterion, objectives_, cfg_.alpha_prior);
}

DecisionNode& DmctsPlanner::root_for(const EnvironmentModel& env) {
    auto& slot = top_roots_[env.state_key()];
    if (!slot) {
        slot = std::make_unique<DecisionNode>(env.state_key(), zero_return(objectives_), env.done(),
                                              env.action_count());
    }
    return *slot;
}

void DmctsPlanner::begin_episode(const EnvironmentModel& env) {
    if (cfg_.fresh_tree) {
        top_roots_.clear();
    }
    root_ = &root_for(env);
    episode_root_ = root_;
}

int DmctsPlanner::select_or_expand(DecisionNode& node, Rng& rng) {
    auto untried = node.unexpanded_actions();
    if (!untried.empty()) {
        int a = untried[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(untried.size())))];
        node.expand(a, cfg_, objectives_);
        return a;
    }
    std::vector<const BootstrapDistribution*> dists;
    dists.reserve(static_cast<std::size_t>(node.action_count()));
    for (int a = 0; a < node.action_count(); ++a) {
        dists.push_back(&node.child(a)->stats());
    }
    const UtilityFunction* u = (cfg_.criterion == Criterion::SER) ? &utility_ : nullptr;
    return thompson_select(dists, u, rng);
}

ReturnVector DmctsPlanner::rollout(EnvironmentModel& env, Rng& rng) {
    ReturnVector sum = zero_return(objectives_);
    int guard = env.horizon() + 1;
    while (!env.done() && guard-- > 0) {
        int a = rng.uniform_int(env.action_count());
        sum += env.step(a, rng).reward;
    }
    return sum;
}

void DmctsPlanner::learning_iteration(DecisionNode& root, EnvironmentModel& env,
                                      const ReturnVector& accrued, Rng& rng) {
    check_same_length(accrued, zero_return(objectives_), "learning_iteration accrued");

    DecisionNode* node = &root;
    std::vector<ChanceNode*> chance_path;
    std::vector<DecisionNode*> decision_path{node};
    ReturnVector in_tree = zero_return(objectives_);

    bool created = false;
    while (!node->terminal()) {
        int action = select_or_expand(*node, rng);
        ChanceNode* c = node->child(action);
        chance_path.push_back(c);

        StepResult sr = env.step(action, rng);
        in_tree += sr.reward;
        OutcomeKey key{env.state_key(), quantise_reward(sr.reward)};
        auto [child, was_created] = c->child_for(key, sr.reward, sr.terminal, env.action_count());
        decision_path.push_back(child);
        node = child;
        if (was_created) {
            created = true;
            break;
        }
    }
    (void)created;

    // Only an actual rollout can be replaced by an artificial return;
    // terminal in-tree iterations backpropagate their exact episode return.
    ReturnVector future = zero_return(objectives_);
    if (!node->terminal()) {
        future = inject_artificial_return(rollout(env, rng), cfg_.artificial, rng);
    }

    // Every node on the path shares the same full-episode return: its own
    // accrued prefix plus its own complete future sum to the same total.
    ReturnVector total = accrued + in_tree + future;

    if (cfg_.criterion == Criterion::ESR) {
        if (backprop_observer_) backprop_observer_(total);
        double u_total = utility_(total);
        for (ChanceNode* c : chance_path) {
            c->stats().update(u_total, rng);
            c->add_visit();
        }
    } else {
        for (ChanceNode* c : chance_path) {
            c->stats().update(total, rng);
            c->add_visit();
        }
    }
    for (DecisionNode* d : decision_path) d->add_visit();
}

int DmctsPlanner::plan_step(const EnvironmentModel& env, const ReturnVector& accrued, Rng& rng) {
    if (env.done()) {
        throw contract_violation("plan_step: called on a terminal state");
    }
    if (cfg_.fresh_tree) {
        top_roots_.clear();
        root_ = nullptr;
    }
    if (!root_) root_ = &root_for(env);
    if (root_->state_key() != env.state_key()) {
        throw contract_violation("plan_step: root does not match the live environment state");
    }

    for (int it = 0; it < cfg_.iterations_per_step; ++it) {
        auto clone = env.clone();
        learning_iteration(*root_, *clone, accrued, rng);
        ++policy_executions_;
    }

    std::vector<const BootstrapDistribution*> dists;
    std::vector<int> actions;
    for (int a = 0; a < root_->action_count(); ++a) {
        if (root_->expanded(a)) {
            dists.push_back(&root_->child(a)->stats());
            actions.push_back(a);
        }
    }
    if (dists.empty()) return 0;
    const UtilityFunction* u = (cfg_.criterion == Criterion::SER) ? &utility_ : nullptr;
    return actions[static_cast<std::size_t>(greedy_select(dists, u))];
}

void DmctsPlanner::advance_root(int taken_action, const EnvironmentModel& env_after,
                                const ReturnVector& observed_reward) {
    if (!root_) throw contract_violation("advance_root: no active root");
    ChanceNode& c = root_->expand(taken_action, cfg_, objectives_);
    OutcomeKey key{env_after.state_key(), quantise_reward(observed_reward)};
    auto [child, created] = c.child_for(key, observed_reward, env_after.done(), env_after.action_count());
    (void)created;
    root_ = child;
}

namespace {

void walk(const DecisionNode& d, int depth, TreeStats& s) {
    ++s.decision_nodes;
    if (static_cast<int>(s.depth_histogram.size()) <= depth) {
        s.depth_histogram.resize(static_cast<std::size_t>(depth) + 1, 0);
    }
    ++s.depth_histogram[static_cast<std::size_t>(depth)];
    for (int a = 0; a < d.action_count(); ++a) {
        const ChanceNode* c = d.child(a);
        if (!c) continue;
        ++s.chance_nodes;
        for (const auto& [key, child] : c->children()) {
            walk(*child, depth + 1, s);
        }
    }
}

}  // namespace

TreeStats DmctsPlanner::tree_stats() const {
    TreeStats s;
    for (const auto& [key, root] : top_roots_) {
        walk(*root, 0, s);
    }
    const DecisionNode* top = episode_root_ ? episode_root_ : root_;
    if (top) {
        for (int a = 0; a < top->action_count(); ++a) {
            if (!top->expanded(a)) continue;
            const auto& st = top->child(a)->stats();
            double score = (cfg_.criterion == Criterion::ESR) ? st.pooled_mean()
                                                              : utility_(st.pooled_mean_vector());
            s.root_child_pooled.push_back(score);
        }
    }
    return s;
}

std::string TreeStats::to_json() const {
    nlohmann::json j;
    j["decision_nodes"] = decision_nodes;
    j["chance_nodes"] = chance_nodes;
    j["depth_histogram"] = depth_histogram;
    j["root_child_pooled"] = root_child_pooled;
    return j.dump();
}

}  // namespace dmcts
