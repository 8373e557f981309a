#include "macroforge/learn/train_config.hpp"

#include <algorithm>

#include "macroforge/errors.hpp"
#include "macroforge/rng.hpp"

namespace macroforge::learn {

const char* to_string(LearnerKind kind) {
    return kind == LearnerKind::q_learning ? "q_learning" : "actor_critic";
}

LearnerKind learner_from_string(const std::string& name) {
    if (name == "q_learning") return LearnerKind::q_learning;
    if (name == "actor_critic") return LearnerKind::actor_critic;
    throw ConfigError("unknown learner '" + name + "'");
}

void TrainConfig::validate() const {
    if (budget_steps <= 0) throw ConfigError("budget_steps must be positive");
    if (alpha <= 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in (0, 1]");
    if (actor_alpha <= 0.0 || critic_alpha <= 0.0)
        throw ConfigError("actor/critic learning rates must be positive");
    if (discount < 0.0 || discount > 1.0) throw ConfigError("discount must lie in [0, 1]");
    if (eps_start < 0.0 || eps_start > 1.0 || eps_end < 0.0 || eps_end > 1.0)
        throw ConfigError("epsilon must lie in [0, 1]");
    if (temperature <= 0.0) throw ConfigError("temperature must be positive");
    if (curiosity_scale < 0.0) throw ConfigError("curiosity scale must be non-negative");
}

std::uint64_t episode_seed(std::uint64_t run_seed, std::int64_t episode) {
    return Rng::derive(run_seed, 0x1000 + static_cast<std::uint64_t>(episode));
}

double TrainConfig::epsilon_at(std::int64_t steps) const {
    const double frac =
        std::min(1.0, static_cast<double>(steps) / static_cast<double>(budget_steps));
    return eps_start + (eps_end - eps_start) * frac;
}

} // namespace macroforge::learn
