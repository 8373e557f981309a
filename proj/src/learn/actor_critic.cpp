#include "macroforge/learn/actor_critic.hpp"

#include <algorithm>
#include <cmath>

#include "macroforge/errors.hpp"
#include "macroforge/learn/curiosity.hpp"
#include "macroforge/rng.hpp"
#include "step_exec.hpp"

namespace macroforge::learn {

namespace {
constexpr std::uint64_t kSampleStream = 0xAC;
constexpr double kPreferenceBound = 60.0;
} // namespace

std::vector<double> ActorCriticTables::policy_row(int s, double temperature) const {
    std::vector<double> row(static_cast<std::size_t>(n_actions));
    double max_pref = pref(s, 0);
    for (int a = 1; a < n_actions; ++a) max_pref = std::max(max_pref, pref(s, a));
    double sum = 0.0;
    for (int a = 0; a < n_actions; ++a) {
        row[static_cast<std::size_t>(a)] = std::exp((pref(s, a) - max_pref) / temperature);
        sum += row[static_cast<std::size_t>(a)];
    }
    for (double& p : row) p /= sum;
    return row;
}

int ActorCriticTables::argmax(int s) const {
    int best = 0;
    double best_pref = pref(s, 0);
    for (int a = 1; a < n_actions; ++a)
        if (pref(s, a) > best_pref) { best_pref = pref(s, a); best = a; }
    return best;
}

void apply_ac_update(ActorCriticTables& tables, const DecisionRecord& rec,
                     const TrainConfig& cfg) {
    const double continuation =
        rec.bootstrap ? cfg.discount * tables.state_values[static_cast<std::size_t>(rec.next_state)]
                      : 0.0;
    const double delta =
        rec.reward + continuation - tables.state_values[static_cast<std::size_t>(rec.state)];
    tables.state_values[static_cast<std::size_t>(rec.state)] += cfg.critic_alpha * delta;

    const std::vector<double> pi = tables.policy_row(rec.state, cfg.temperature);
    for (int a = 0; a < tables.n_actions; ++a) {
        double& p = tables.pref(rec.state, a);
        if (a == rec.action_index)
            p += cfg.actor_alpha * delta * (1.0 - pi[static_cast<std::size_t>(a)]);
        else
            p -= cfg.actor_alpha * delta * pi[static_cast<std::size_t>(a)];
        p = std::clamp(p, -kPreferenceBound, kPreferenceBound);
    }
}

ACTrainResult train_actor_critic(const core::EnvFactory& factory,
                                 const core::ActionSet& action_set,
                                 const TrainConfig& cfg, const DecisionSink& sink) {
    cfg.validate();
    auto env = factory();
    if (env->primitive_count() != action_set.primitive_count())
        throw InvalidArgumentError("action set size does not match the environment");

    ActorCriticTables tables(env->state_count(), action_set.size());
    VisitCounts counts(env->state_count());
    Rng sampler(Rng::derive(cfg.seed, kSampleStream));
    LearningCurve curve;
    curve.seed = cfg.seed;
    curve.method = to_string(LearnerKind::actor_critic);
    curve.action_set = action_set.has_macro() ? "macro" : "vanilla";

    std::int64_t steps = 0;
    std::int64_t episode = 0;
    while (steps < cfg.budget_steps) {
        int state = env->reset(episode_seed(cfg.seed, episode));
        double episode_return = 0.0;
        while (!env->done()) {
            const std::vector<double> pi = tables.policy_row(state, cfg.temperature);
            const double u = sampler.next_double();
            int index = action_set.size() - 1;
            double acc = 0.0;
            for (int a = 0; a < action_set.size(); ++a) {
                acc += pi[static_cast<std::size_t>(a)];
                if (u < acc) { index = a; break; }
            }
            const auto exec =
                detail::execute_index(*env, action_set, index, &counts, cfg.curiosity_scale);
            steps += exec.steps;
            episode_return += exec.extrinsic;
            const DecisionRecord rec{state, index, exec.extrinsic + exec.bonus,
                                     exec.next_state, !exec.natural_terminal, exec.steps,
                                     exec.episode_over};
            apply_ac_update(tables, rec, cfg);
            if (sink) sink(rec);
            state = exec.next_state;
        }
        curve.points.push_back(CurvePoint{steps, episode_return});
        ++episode;
    }
    return ACTrainResult{std::move(tables), std::move(curve), steps};
}

} // namespace macroforge::learn
