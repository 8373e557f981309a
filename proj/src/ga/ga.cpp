#include "macroforge/ga/ga.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "macroforge/errors.hpp"
#include "macroforge/learn/actor_critic.hpp"
#include "macroforge/learn/q_learning.hpp"

namespace macroforge::ga {

namespace {
constexpr std::uint64_t kMutationStream = 0x6A;
} // namespace

void GAConfig::validate() const {
    if (k < 1) throw ConfigError("ga: k must be positive");
    if (q < 1) throw ConfigError("ga: q must be positive");
    if (q_plus < 0 || q_star < 0 || q_plus + q_star < 1)
        throw ConfigError("ga: need at least one mutation per generation");
    if (q_plus > q || q_star > q)
        throw ConfigError("ga: q_plus and q_star cannot exceed q "
                          "(mutation samples without replacement)");
    if (fitness_budget_steps < 1) throw ConfigError("ga: fitness budget must be positive");
    if (jobs < 1) throw ConfigError("ga: jobs must be positive");
}

std::string generation_log_to_csv(const GenerationLog& log,
                                  const std::vector<std::string>& action_names) {
    std::ostringstream out;
    out << "generation,avg_fitness,improvement_pct,best_macro\n";
    for (const GenerationRow& row : log.rows) {
        out << row.generation << ',';
        out.precision(6);
        out << std::fixed << row.avg_fitness << ',';
        if (row.improvement_pct) {
            out.precision(2);
            out << *row.improvement_pct;
        }
        out << ",\"" << row.best_macro.to_string(action_names) << "\"\n";
        out.unsetf(std::ios::fixed);
    }
    return out.str();
}

std::vector<core::MacroAction> init_population(int primitive_count, int g, Rng& rng) {
    if (g < 1 || primitive_count < 1)
        throw InvalidArgumentError("init_population needs g >= 1 and a non-empty action space");
    std::vector<core::MacroAction> macros;
    macros.reserve(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) {
        std::vector<int> actions{rng.next_below(primitive_count),
                                 rng.next_below(primitive_count)};
        macros.emplace_back(std::move(actions));
    }
    return macros;
}

double fitness_from_returns(const std::vector<learn::CurvePoint>& points, double floor) {
    if (points.empty()) return floor;
    const std::size_t window = std::min<std::size_t>(points.size(), 100);
    double sum = 0.0;
    for (std::size_t i = points.size() - window; i < points.size(); ++i)
        sum += points[i].episode_return;
    return sum / static_cast<double>(window);
}

double fitness(const core::EnvFactory& factory, learn::LearnerKind learner,
               const core::MacroAction& macro, const learn::TrainConfig& train_cfg,
               double fitness_floor) {
    const auto probe = factory();
    const core::ActionSet set = core::ActionSet::with_macro(probe->primitive_count(), macro);
    if (learner == learn::LearnerKind::q_learning) {
        const auto result = learn::train_q_learning(factory, set, train_cfg);
        return fitness_from_returns(result.curve.points, fitness_floor);
    }
    const auto result = learn::train_actor_critic(factory, set, train_cfg);
    return fitness_from_returns(result.curve.points, fitness_floor);
}

std::vector<FitnessRecord> select_top(const std::vector<FitnessRecord>& retained,
                                      const std::vector<FitnessRecord>& candidates,
                                      int q) {
    std::vector<FitnessRecord> pool = retained;
    pool.insert(pool.end(), candidates.begin(), candidates.end());
    std::sort(pool.begin(), pool.end(), [](const FitnessRecord& a, const FitnessRecord& b) {
        if (a.fitness != b.fitness) return a.fitness > b.fitness;
        return a.insertion_index < b.insertion_index;
    });
    if (static_cast<int>(pool.size()) > q) pool.resize(static_cast<std::size_t>(q));
    return pool;
}

core::MacroAction append_op(int primitive_count, const core::MacroAction& macro, Rng& rng) {
    std::vector<int> actions = macro.actions();
    actions.push_back(rng.next_below(primitive_count));
    return core::MacroAction(std::move(actions));
}

core::MacroAction alter_op(int primitive_count, const core::MacroAction& macro, Rng& rng) {
    std::vector<int> actions = macro.actions();
    actions[0] = rng.next_below(primitive_count);
    return core::MacroAction(std::move(actions));
}

namespace {

/// Indices of n distinct records drawn uniformly from [0, pool_size).
std::vector<int> sample_without_replacement(int pool_size, int n, Rng& rng) {
    std::vector<int> indices(static_cast<std::size_t>(pool_size));
    for (int i = 0; i < pool_size; ++i) indices[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < n; ++i) {
        const int j = i + rng.next_below(pool_size - i);
        std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
    }
    indices.resize(static_cast<std::size_t>(n));
    return indices;
}

} // namespace

GAResult generate_macro(const GAConfig& cfg, const core::EnvFactory& factory,
                        learn::LearnerKind learner, const learn::TrainConfig& base_train) {
    cfg.validate();
    const auto probe = factory();
    const int primitive_count = probe->primitive_count();

    Rng rng(Rng::derive(cfg.master_seed, kMutationStream));
    const int g = cfg.generation_size();
    std::vector<core::MacroAction> generation = init_population(primitive_count, g, rng);

    GAResult result;
    Population pop;
    std::int64_t insertion = 0;
    int generation_no = 0;

    learn::TrainConfig fit_cfg = base_train;
    fit_cfg.budget_steps = cfg.fitness_budget_steps;

    while (pop.evaluations_used < cfg.k) {
        const int n_eval = std::min(static_cast<int>(generation.size()),
                                    cfg.k - pop.evaluations_used);

        // Fitness phase. Evaluation j is tied to its seed substream, so the
        // outcome is identical regardless of the worker count.
        std::vector<double> scores(static_cast<std::size_t>(n_eval), 0.0);
        const auto evaluate = [&](int j) {
            learn::TrainConfig run_cfg = fit_cfg;
            run_cfg.seed = Rng::derive(cfg.master_seed, static_cast<std::uint64_t>(insertion + j));
            scores[static_cast<std::size_t>(j)] =
                fitness(factory, learner, generation[static_cast<std::size_t>(j)], run_cfg,
                        cfg.fitness_floor);
        };
        if (cfg.jobs <= 1) {
            for (int j = 0; j < n_eval; ++j) evaluate(j);
        } else {
            for (int start = 0; start < n_eval; start += cfg.jobs) {
                std::vector<std::future<void>> batch;
                for (int j = start; j < std::min(n_eval, start + cfg.jobs); ++j)
                    batch.push_back(std::async(std::launch::async, evaluate, j));
                for (auto& f : batch) f.get();
            }
        }

        pop.candidates.clear();
        for (int j = 0; j < n_eval; ++j) {
            FitnessRecord rec{generation[static_cast<std::size_t>(j)],
                              scores[static_cast<std::size_t>(j)], generation_no,
                              insertion + j};
            pop.candidates.push_back(rec);
            result.evaluated.push_back(rec);
        }
        insertion += n_eval;
        pop.evaluations_used += n_eval;

        // Selection phase.
        pop.retained = select_top(pop.retained, pop.candidates, cfg.q);

        GenerationRow row;
        row.generation = generation_no;
        double sum = 0.0;
        for (const FitnessRecord& r : pop.retained) sum += r.fitness;
        row.avg_fitness = sum / static_cast<double>(pop.retained.size());
        if (!result.log.rows.empty()) {
            const double prev = result.log.rows.back().avg_fitness;
            if (prev != 0.0)
                row.improvement_pct = (row.avg_fitness - prev) / std::abs(prev) * 100.0;
        }
        row.best_macro = pop.retained.front().macro;
        row.best_fitness = pop.retained.front().fitness;
        result.log.rows.push_back(row);

        if (pop.evaluations_used >= cfg.k) break;

        // Mutation phase: q_plus appends then q_star alterations, parents
        // sampled uniformly without replacement from the retained set.
        const int pool = static_cast<int>(pop.retained.size());
        generation.clear();
        for (int idx : sample_without_replacement(pool, std::min(cfg.q_plus, pool), rng))
            generation.push_back(
                append_op(primitive_count, pop.retained[static_cast<std::size_t>(idx)].macro, rng));
        for (int idx : sample_without_replacement(pool, std::min(cfg.q_star, pool), rng))
            generation.push_back(
                alter_op(primitive_count, pop.retained[static_cast<std::size_t>(idx)].macro, rng));
        ++generation_no;
    }

    result.best = pop.retained.front().macro;
    result.best_fitness = pop.retained.front().fitness;
    result.evaluations_used = pop.evaluations_used;
    return result;
}

} // namespace macroforge::ga
