#include "macroforge/learn/evaluate.hpp"

#include "macroforge/errors.hpp"
#include "step_exec.hpp"

namespace macroforge::learn {

PolicyFn greedy_policy_fn(const QTable& table) {
    return [&table](int state, Rng&) { return table.greedy(state); };
}

PolicyFn argmax_policy_fn(const ActorCriticTables& tables) {
    return [&tables](int state, Rng&) { return tables.argmax(state); };
}

PolicyFn stochastic_policy_fn(const core::TabularPolicy& policy) {
    return [&policy](int state, Rng& rng) {
        const double u = rng.next_double();
        double acc = 0.0;
        for (int a = 0; a < policy.action_count(); ++a) {
            acc += policy.prob(state, a);
            if (u < acc) return a;
        }
        return policy.action_count() - 1;
    };
}

EvalStats evaluate_policy(const core::EnvFactory& factory,
                          const core::ActionSet& action_set, const PolicyFn& policy,
                          int episodes, std::uint64_t seed) {
    if (episodes < 1) throw InvalidArgumentError("evaluation needs at least one episode");
    auto env = factory();
    if (env->primitive_count() != action_set.primitive_count())
        throw InvalidArgumentError("action set size does not match the environment");

    Rng policy_rng(Rng::derive(seed, 0xEA));
    double total_return = 0.0;
    double total_steps = 0.0;
    int successes = 0;
    for (int ep = 0; ep < episodes; ++ep) {
        int state = env->reset(Rng::derive(seed, static_cast<std::uint64_t>(ep)));
        double episode_return = 0.0;
        std::int64_t steps = 0;
        while (!env->done()) {
            const int index = policy(state, policy_rng);
            const auto exec = detail::execute_index(*env, action_set, index, nullptr, 0.0);
            episode_return += exec.extrinsic;
            steps += exec.steps;
            state = exec.next_state;
        }
        total_return += episode_return;
        if (env->terminated()) {
            ++successes;
            total_steps += static_cast<double>(steps);
        } else {
            const int limit = env->step_limit();
            total_steps += static_cast<double>(limit > 0 ? limit : steps);
        }
    }
    EvalStats stats;
    stats.mean_return = total_return / episodes;
    stats.mean_steps_to_goal = total_steps / episodes;
    stats.success_rate = static_cast<double>(successes) / episodes;
    return stats;
}

} // namespace macroforge::learn
