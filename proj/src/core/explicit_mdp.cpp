#include "macroforge/core/explicit_mdp.hpp"

#include <cmath>
#include <cstdlib>

#include "macroforge/errors.hpp"

namespace macroforge::core {

ExplicitMDP::ExplicitMDP(int n_states, int n_actions)
    : n_states_(n_states), n_actions_(n_actions),
      rows_(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions)),
      terminal_(static_cast<std::size_t>(n_states), false) {
    if (n_states < 1 || n_actions < 1)
        throw InvalidArgumentError("ExplicitMDP needs at least one state and one action");
}

void ExplicitMDP::add_transition(int state, int action, int next, double prob,
                                 double reward) {
    if (state < 0 || state >= n_states_ || next < 0 || next >= n_states_ ||
        action < 0 || action >= n_actions_)
        throw InvalidArgumentError("transition indices out of range");
    rows_[static_cast<std::size_t>(state) * n_actions_ + action].push_back(
        Transition{next, prob, reward});
}

void ExplicitMDP::set_terminal(int state) {
    terminal_[static_cast<std::size_t>(state)] = true;
}

const std::vector<Transition>& ExplicitMDP::row(int state, int action) const {
    return rows_[static_cast<std::size_t>(state) * n_actions_ + action];
}

void ExplicitMDP::finalize() {
    for (int s = 0; s < n_states_; ++s) {
        for (int a = 0; a < n_actions_; ++a) {
            auto& row = rows_[static_cast<std::size_t>(s) * n_actions_ + a];
            if (terminal_[static_cast<std::size_t>(s)]) {
                row.clear();
                row.push_back(Transition{s, 1.0, 0.0});
                continue;
            }
            if (row.empty())
                throw InvalidArgumentError("state " + std::to_string(s) + " action " +
                                           std::to_string(a) + " has no transitions");
            double sum = 0.0;
            for (const Transition& t : row) {
                if (!std::isfinite(t.reward) || !std::isfinite(t.prob) || t.prob < 0.0)
                    throw InvalidArgumentError("non-finite or negative transition entry");
                sum += t.prob;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw InvalidArgumentError("transition probabilities for state " +
                                           std::to_string(s) + " action " +
                                           std::to_string(a) + " sum to " +
                                           std::to_string(sum));
        }
    }
}

TabularPolicy::TabularPolicy(int n_states, int n_actions)
    : n_states_(n_states), n_actions_(n_actions),
      probs_(static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions),
             0.0) {}

TabularPolicy TabularPolicy::deterministic(int n_states, int n_actions,
                                           const std::vector<int>& choice) {
    TabularPolicy p(n_states, n_actions);
    for (int s = 0; s < n_states; ++s)
        p.probs_[static_cast<std::size_t>(s) * n_actions + choice[static_cast<std::size_t>(s)]] = 1.0;
    return p;
}

TabularPolicy TabularPolicy::uniform(int n_states, int n_actions) {
    TabularPolicy p(n_states, n_actions);
    const double w = 1.0 / n_actions;
    for (double& v : p.probs_) v = w;
    return p;
}

double TabularPolicy::prob(int state, int action) const {
    return probs_[static_cast<std::size_t>(state) * n_actions_ + action];
}

void TabularPolicy::set_row(int state, const std::vector<double>& probs) {
    if (static_cast<int>(probs.size()) != n_actions_)
        throw InvalidArgumentError("policy row width mismatch");
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw InvalidArgumentError("negative policy probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw InvalidArgumentError("policy row does not sum to 1");
    for (int a = 0; a < n_actions_; ++a)
        probs_[static_cast<std::size_t>(state) * n_actions_ + a] = probs[static_cast<std::size_t>(a)];
}

ExplicitMDP with_macro_row(const ExplicitMDP& primitive_mdp, const MacroAction& macro) {
    const int n = primitive_mdp.state_count();
    const int na = primitive_mdp.action_count();
    for (PrimitiveAction a : macro.actions())
        if (a >= na)
            throw InvalidArgumentError("macro references primitive outside the MDP");

    ExplicitMDP out(n, na + 1);
    for (int s = 0; s < n; ++s) {
        if (primitive_mdp.is_terminal(s)) {
            out.set_terminal(s);
            continue;
        }
        for (int a = 0; a < na; ++a)
            for (const Transition& t : primitive_mdp.row(s, a))
                out.add_transition(s, a, t.next, t.prob, t.reward);

        // Composed macro row: push a (probability, accumulated reward) mass
        // vector through the primitive rows. Terminal states absorb.
        std::vector<double> prob(static_cast<std::size_t>(n), 0.0);
        std::vector<double> rew(static_cast<std::size_t>(n), 0.0); // prob-weighted reward mass
        prob[static_cast<std::size_t>(s)] = 1.0;
        for (PrimitiveAction a : macro.actions()) {
            std::vector<double> nprob(static_cast<std::size_t>(n), 0.0);
            std::vector<double> nrew(static_cast<std::size_t>(n), 0.0);
            for (int from = 0; from < n; ++from) {
                const auto f = static_cast<std::size_t>(from);
                if (prob[f] == 0.0) continue;
                if (primitive_mdp.is_terminal(from)) {
                    nprob[f] += prob[f];
                    nrew[f] += rew[f];
                    continue;
                }
                for (const Transition& t : primitive_mdp.row(from, a)) {
                    const auto to = static_cast<std::size_t>(t.next);
                    nprob[to] += prob[f] * t.prob;
                    nrew[to] += rew[f] * t.prob + prob[f] * t.prob * t.reward;
                }
            }
            prob.swap(nprob);
            rew.swap(nrew);
        }
        for (int to = 0; to < n; ++to) {
            const auto t = static_cast<std::size_t>(to);
            if (prob[t] > 0.0)
                out.add_transition(s, na, to, prob[t], rew[t] / prob[t]);
        }
    }
    out.finalize();
    return out;
}

ExplicitMDP build_explicit_mdp(const TabularModel& model, const ActionSet& action_set,
                               int max_states) {
    if (model.state_count() > max_states)
        throw TooLargeError("environment has " + std::to_string(model.state_count()) +
                            " states, cap is " + std::to_string(max_states));
    if (action_set.primitive_count() != model.primitive_count())
        throw InvalidArgumentError("action set does not match the environment's primitives");

    const int n = model.state_count();
    const int na = model.primitive_count();
    ExplicitMDP prim(n, na);
    for (int s = 0; s < n; ++s) {
        if (model.is_terminal(s)) {
            prim.set_terminal(s);
            continue;
        }
        for (int a = 0; a < na; ++a) {
            const auto [next, reward] = model.transition(s, a);
            prim.add_transition(s, a, next, 1.0, reward);
        }
    }
    prim.finalize();
    if (!action_set.has_macro()) return prim;
    return with_macro_row(prim, action_set.macro());
}

ExplicitMdpEnv::ExplicitMdpEnv(ExplicitMDP mdp, int start_state, int max_steps)
    : mdp_(std::move(mdp)), start_state_(start_state), max_steps_(max_steps) {
    if (start_state_ < 0 || start_state_ >= mdp_.state_count())
        throw InvalidArgumentError("start state out of range");
    state_ = start_state_;
    terminated_ = mdp_.is_terminal(state_);
}

std::vector<std::string> ExplicitMdpEnv::action_names() const {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(mdp_.action_count()));
    for (int a = 0; a < mdp_.action_count(); ++a)
        names.push_back("A" + std::to_string(a));
    return names;
}

int ExplicitMdpEnv::reset(std::uint64_t seed) {
    rng_ = Rng(seed);
    state_ = start_state_;
    steps_ = 0;
    terminated_ = mdp_.is_terminal(state_);
    truncated_ = false;
    return state_;
}

StepResult ExplicitMdpEnv::step(int action) {
    if (done()) throw IllegalCallError("step called on a finished episode");
    if (action < 0 || action >= mdp_.action_count())
        throw InvalidArgumentError("action index out of range");

    const auto& row = mdp_.row(state_, action);
    const double u = rng_.next_double();
    double acc = 0.0;
    const Transition* chosen = &row.back();
    for (const Transition& t : row) {
        acc += t.prob;
        if (u < acc) { chosen = &t; break; }
    }
    state_ = chosen->next;
    ++steps_;
    terminated_ = mdp_.is_terminal(state_);
    truncated_ = !terminated_ && max_steps_ > 0 && steps_ >= max_steps_;
    return StepResult{state_, chosen->reward, terminated_, truncated_};
}

} // namespace macroforge::core
