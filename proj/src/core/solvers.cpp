#include "macroforge/core/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "macroforge/errors.hpp"

namespace macroforge::core {

namespace {

double backup_action(const ExplicitMDP& mdp, const std::vector<double>& v, int s, int a,
                     double discount) {
    double total = 0.0;
    for (const Transition& t : mdp.row(s, a))
        total += t.prob * (t.reward + discount * v[static_cast<std::size_t>(t.next)]);
    return total;
}

} // namespace

ValueTable policy_evaluation(const ExplicitMDP& mdp, const TabularPolicy& policy,
                             double discount, double tol, int max_sweeps) {
    if (tol <= 0.0) throw InvalidArgumentError("tolerance must be positive");
    if (discount < 0.0 || discount > 1.0)
        throw InvalidArgumentError("discount must lie in [0, 1]");
    const int n = mdp.state_count();
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double delta = 0.0;
        for (int s = 0; s < n; ++s) {
            if (mdp.is_terminal(s)) { next[static_cast<std::size_t>(s)] = 0.0; continue; }
            double total = 0.0;
            for (int a = 0; a < mdp.action_count(); ++a) {
                const double p = policy.prob(s, a);
                if (p > 0.0) total += p * backup_action(mdp, v, s, a, discount);
            }
            next[static_cast<std::size_t>(s)] = total;
            delta = std::max(delta, std::abs(total - v[static_cast<std::size_t>(s)]));
        }
        v.swap(next);
        if (delta <= tol) return ValueTable{std::move(v), discount};
    }
    throw DivergenceError("policy evaluation did not converge in " +
                          std::to_string(max_sweeps) + " sweeps");
}

ValueTable value_iteration(const ExplicitMDP& mdp, double discount, double tol,
                           int max_sweeps) {
    if (tol <= 0.0) throw InvalidArgumentError("tolerance must be positive");
    if (discount < 0.0 || discount > 1.0)
        throw InvalidArgumentError("discount must lie in [0, 1]");
    const int n = mdp.state_count();
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double delta = 0.0;
        for (int s = 0; s < n; ++s) {
            if (mdp.is_terminal(s)) { next[static_cast<std::size_t>(s)] = 0.0; continue; }
            double best = backup_action(mdp, v, s, 0, discount);
            for (int a = 1; a < mdp.action_count(); ++a)
                best = std::max(best, backup_action(mdp, v, s, a, discount));
            next[static_cast<std::size_t>(s)] = best;
            delta = std::max(delta, std::abs(best - v[static_cast<std::size_t>(s)]));
        }
        v.swap(next);
        if (delta <= tol) return ValueTable{std::move(v), discount};
    }
    throw DivergenceError("value iteration did not converge in " +
                          std::to_string(max_sweeps) + " sweeps");
}

std::vector<int> greedy_policy(const ExplicitMDP& mdp, const ValueTable& values) {
    const int n = mdp.state_count();
    std::vector<int> choice(static_cast<std::size_t>(n), 0);
    for (int s = 0; s < n; ++s) {
        if (mdp.is_terminal(s)) continue;
        double best = backup_action(mdp, values.values, s, 0, values.discount);
        for (int a = 1; a < mdp.action_count(); ++a) {
            const double q = backup_action(mdp, values.values, s, a, values.discount);
            if (q > best) { best = q; choice[static_cast<std::size_t>(s)] = a; }
        }
    }
    return choice;
}

ValueTable enumerate_policies(const ExplicitMDP& mdp, double discount, long long cap,
                              double tol) {
    const int n = mdp.state_count();
    const int na = mdp.action_count();
    long long count = 1;
    for (int s = 0; s < n; ++s) {
        count *= na;
        if (count > cap)
            throw TooLargeError("policy enumeration would exceed cap of " +
                                std::to_string(cap));
    }

    std::vector<double> best(static_cast<std::size_t>(n),
                             -std::numeric_limits<double>::infinity());
    std::vector<int> choice(static_cast<std::size_t>(n), 0);
    for (long long idx = 0; idx < count; ++idx) {
        long long rest = idx;
        for (int s = 0; s < n; ++s) {
            choice[static_cast<std::size_t>(s)] = static_cast<int>(rest % na);
            rest /= na;
        }
        const TabularPolicy policy = TabularPolicy::deterministic(n, na, choice);
        const ValueTable v = policy_evaluation(mdp, policy, discount, tol);
        for (int s = 0; s < n; ++s)
            best[static_cast<std::size_t>(s)] =
                std::max(best[static_cast<std::size_t>(s)], v.values[static_cast<std::size_t>(s)]);
    }
    return ValueTable{std::move(best), discount};
}

} // namespace macroforge::core
