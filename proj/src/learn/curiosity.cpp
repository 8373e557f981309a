#include "macroforge/learn/curiosity.hpp"

#include <cmath>

namespace macroforge::learn {

double curiosity_bonus(VisitCounts& counts, int next_state, double beta) {
    auto& n = counts.counts[static_cast<std::size_t>(next_state)];
    const double bonus = beta / std::sqrt(static_cast<double>(n) + 1.0);
    ++n;
    return bonus;
}

} // namespace macroforge::learn
