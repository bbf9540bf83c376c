#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dmcts/envs/factory.hpp"
#include "dmcts/harness/experiment.hpp"

#include <cstdio>

using namespace dmcts;

TEST_CASE("ddst probe") {
    auto cfg = harness::load_experiment_config(std::string(DMCTS_CONFIG_DIR) + "/ddst-dmcts.json");
    auto env = envs::make_environment(cfg.domain, cfg.domain_config);
    PlannerConfig pc;
    pc.criterion = cfg.criterion;
    pc.replicates = cfg.dmcts.replicates;
    pc.alpha_prior = cfg.dmcts.alpha_prior;
    pc.iterations_per_step = cfg.executions_per_step();
    pc.artificial = cfg.artificial_config();
    DmctsPlanner planner(pc, cfg.make_utility(), env->objective_count());
    UtilityFunction u = cfg.make_utility();
    Rng rng(123);

    const int episodes = 4000;
    for (int e = 0; e < episodes; ++e) {
        env->reset(rng);
        planner.begin_episode(*env);
        ReturnVector accrued = zero_return(3);
        while (!env->done()) {
            int a = planner.plan_step(*env, accrued, rng);
            StepResult sr = env->step(a, rng);
            planner.advance_root(a, *env, sr.reward);
            accrued += sr.reward;
        }
    }

    // walk the corridor: D,R,D,R,D,R,D,R,D,R,D,D,D,D
    int corridor[] = {1, 3, 1, 3, 1, 3, 1, 3, 1, 3, 1, 1, 1, 1};
    const char* names[] = {"U", "D", "L", "R"};
    env->reset(rng);
    planner.begin_episode(*env);
    DecisionNode* node = planner.root();
    for (int depth = 0; depth < 14 && node; ++depth) {
        std::printf("depth %2d state=%llu visits=%ld | ", depth,
                    (unsigned long long)node->state_key(), node->visits());
        for (int a = 0; a < 4; ++a) {
            if (!node->expanded(a)) {
                std::printf("%s:unexp ", names[a]);
                continue;
            }
            auto& st = node->child(a)->stats();
            std::printf("%s:u=%.1f,v=%ld ", names[a], u(st.pooled_mean_vector()),
                        node->child(a)->visits());
        }
        std::printf("\n");
        int a = corridor[depth];
        if (!node->expanded(a)) { std::printf("  corridor arm unexpanded, stop\n"); break; }
        ChanceNode* c = node->child(a);
        if (c->children().empty()) { std::printf("  no outcomes, stop\n"); break; }
        node = c->children().begin()->second.get();
    }
}
