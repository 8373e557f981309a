#pragma once

#include "macroforge/core/explicit_mdp.hpp"

namespace macroforge::core {

inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kDefaultMaxSweeps = 1'000'000;
inline constexpr long long kDefaultPolicyCap = 1'000'000;

/// Iterative fixed point of the per-policy backup, max-norm stopping.
/// Throws DivergenceError past max_sweeps.
ValueTable policy_evaluation(const ExplicitMDP& mdp, const TabularPolicy& policy,
                             double discount, double tol = kDefaultTol,
                             int max_sweeps = kDefaultMaxSweeps);

/// Iterative fixed point of the max backup (optimal values over the
/// action-set indices, discounting once per index regardless of macro length).
ValueTable value_iteration(const ExplicitMDP& mdp, double discount,
                           double tol = kDefaultTol, int max_sweeps = kDefaultMaxSweeps);

/// Greedy action per state from a value table; ties break toward the lowest
/// action-set index.
std::vector<int> greedy_policy(const ExplicitMDP& mdp, const ValueTable& values);

/// Brute-force optimal values: element-wise max of policy_evaluation over
/// every stationary deterministic policy. Test oracle; throws TooLargeError
/// when action_count^state_count exceeds the cap.
ValueTable enumerate_policies(const ExplicitMDP& mdp, double discount,
                              long long cap = kDefaultPolicyCap,
                              double tol = kDefaultTol);

} // namespace macroforge::core
