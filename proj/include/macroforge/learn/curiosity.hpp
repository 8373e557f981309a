#pragma once

#include <cstdint>
#include <vector>

namespace macroforge::learn {

/// Per-state visit counts backing the count-based exploration bonus.
struct VisitCounts {
    explicit VisitCounts(int n_states)
        : counts(static_cast<std::size_t>(n_states), 0) {}
    std::vector<std::int64_t> counts;
};

/// Returns beta / sqrt(N(next_state) + 1) evaluated before the visit is
/// recorded, then increments the count. The bonus feeds the learner's reward
/// only; logged episode returns stay extrinsic.
double curiosity_bonus(VisitCounts& counts, int next_state, double beta);

} // namespace macroforge::learn
