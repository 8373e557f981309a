#include "macroforge/learn/q_learning.hpp"

#include <algorithm>

#include "macroforge/errors.hpp"
#include "macroforge/learn/curiosity.hpp"
#include "macroforge/rng.hpp"
#include "step_exec.hpp"

namespace macroforge::learn {

namespace {
constexpr std::uint64_t kExploreStream = 0x51;
} // namespace

int QTable::greedy(int s) const {
    int best = 0;
    double best_value = at(s, 0);
    for (int a = 1; a < n_actions; ++a)
        if (at(s, a) > best_value) { best_value = at(s, a); best = a; }
    return best;
}

double QTable::max_value(int s) const {
    double best = at(s, 0);
    for (int a = 1; a < n_actions; ++a) best = std::max(best, at(s, a));
    return best;
}

void apply_q_update(QTable& table, const DecisionRecord& rec, const TrainConfig& cfg) {
    const double continuation =
        rec.bootstrap ? cfg.discount * table.max_value(rec.next_state) : 0.0;
    double& q = table.at(rec.state, rec.action_index);
    q += cfg.alpha * (rec.reward + continuation - q);
}

QTrainResult train_q_learning(const core::EnvFactory& factory,
                              const core::ActionSet& action_set, const TrainConfig& cfg,
                              const DecisionSink& sink) {
    cfg.validate();
    auto env = factory();
    if (env->primitive_count() != action_set.primitive_count())
        throw InvalidArgumentError("action set size does not match the environment");

    QTable table(env->state_count(), action_set.size());
    VisitCounts counts(env->state_count());
    Rng explore(Rng::derive(cfg.seed, kExploreStream));
    LearningCurve curve;
    curve.seed = cfg.seed;
    curve.method = to_string(LearnerKind::q_learning);
    curve.action_set = action_set.has_macro() ? "macro" : "vanilla";

    std::int64_t steps = 0;
    std::int64_t episode = 0;
    while (steps < cfg.budget_steps) {
        int state = env->reset(episode_seed(cfg.seed, episode));
        double episode_return = 0.0;
        while (!env->done()) {
            int index;
            if (explore.next_double() < cfg.epsilon_at(steps))
                index = explore.next_below(action_set.size());
            else
                index = table.greedy(state);
            const auto exec =
                detail::execute_index(*env, action_set, index, &counts, cfg.curiosity_scale);
            steps += exec.steps;
            episode_return += exec.extrinsic;
            const DecisionRecord rec{state, index, exec.extrinsic + exec.bonus,
                                     exec.next_state, !exec.natural_terminal, exec.steps,
                                     exec.episode_over};
            apply_q_update(table, rec, cfg);
            if (sink) sink(rec);
            state = exec.next_state;
        }
        curve.points.push_back(CurvePoint{steps, episode_return});
        ++episode;
    }
    return QTrainResult{std::move(table), std::move(curve), steps};
}

} // namespace macroforge::learn
