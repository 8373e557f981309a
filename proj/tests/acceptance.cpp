// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line with the measured quantities and wall time.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "macroforge/core/macro_exec.hpp"

#include "macroforge/cli/commands.hpp"
#include "macroforge/core/solvers.hpp"
#include "macroforge/env/maze.hpp"
#include "macroforge/env/risk_corridor.hpp"
#include "macroforge/exp/experiment.hpp"
#include "macroforge/ga/ga.hpp"
#include "macroforge/learn/actor_critic.hpp"
#include "macroforge/learn/evaluate.hpp"
#include "macroforge/learn/q_learning.hpp"

using namespace macroforge;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMasterSeed = 7;
constexpr std::int64_t kUtilizationBudget = 320'000;
const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};

std::string maps_dir() {
    if (const char* dir = std::getenv("MACROFORGE_MAPS_DIR"); dir && *dir) return dir;
    return "maps";
}

exp::EnvCatalog catalog() {
    return exp::EnvCatalog(maps_dir(), env::RewardParams{}, env::RiskCorridorSpec{});
}

int jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4 : static_cast<int>(std::min(hw, 16u));
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool ok, double seconds, const std::string& detail) {
    std::printf("criterion %2d: %s (%.1fs) %s\n", criterion, ok ? "PASS" : "FAIL", seconds,
                detail.c_str());
    std::fflush(stdout);
}

core::ExplicitMDP random_mdp(Rng& rng, int n_states, int n_actions, bool with_terminal) {
    core::ExplicitMDP mdp(n_states, n_actions);
    const int terminal = with_terminal ? rng.next_below(n_states) : -1;
    if (terminal >= 0) mdp.set_terminal(terminal);
    for (int s = 0; s < n_states; ++s) {
        if (s == terminal) continue;
        for (int a = 0; a < n_actions; ++a) {
            const int branches = 1 + rng.next_below(3);
            std::vector<double> weights;
            double total = 0.0;
            for (int b = 0; b < branches; ++b) {
                weights.push_back(0.1 + rng.next_double());
                total += weights.back();
            }
            for (int b = 0; b < branches; ++b)
                mdp.add_transition(s, a, rng.next_below(n_states),
                                   weights[static_cast<std::size_t>(b)] / total,
                                   rng.next_double() * 2.0 - 1.0);
        }
    }
    mdp.finalize();
    return mdp;
}

core::MacroAction random_macro(Rng& rng, int n_actions, int max_len) {
    const int len = 1 + rng.next_below(max_len);
    std::vector<int> actions;
    for (int i = 0; i < len; ++i) actions.push_back(rng.next_below(n_actions));
    return core::MacroAction(std::move(actions));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("criterion 1: macro-reward oracle over 1000 shared-stream cases") {
    Timer timer;
    Rng rng(0xC1);
    auto maze = std::make_shared<const env::MazeSpec>(
        env::load_map_file(maps_dir() + "/dense_sparse.map"));
    int checked = 0;
    bool ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        std::unique_ptr<core::Env> a;
        std::unique_ptr<core::Env> b;
        int n_actions = 0;
        if (trial % 3 == 0) {
            a = std::make_unique<env::MazeEnv>(maze, env::MazeTask::dense);
            b = std::make_unique<env::MazeEnv>(maze, env::MazeTask::dense);
            n_actions = env::kMazeActionCount;
        } else {
            const int n_states = 2 + rng.next_below(19);
            n_actions = 1 + rng.next_below(4);
            const core::ExplicitMDP mdp = random_mdp(rng, n_states, n_actions, true);
            int start = rng.next_below(n_states);
            while (mdp.is_terminal(start)) start = rng.next_below(n_states);
            a = std::make_unique<core::ExplicitMdpEnv>(mdp, start);
            b = std::make_unique<core::ExplicitMdpEnv>(mdp, start);
        }
        const core::MacroAction macro = random_macro(rng, n_actions, 5);
        const std::uint64_t seed = rng.next_u64();
        a->reset(seed);
        b->reset(seed);
        const core::MacroOutcome out = core::execute_macro(*a, macro);
        double reward = 0.0;
        int steps = 0;
        for (int action : macro.actions()) {
            const core::StepResult r = b->step(action);
            reward += r.reward;
            ++steps;
            if (r.terminated || r.truncated_by_limit) break;
        }
        ++checked;
        const bool equal = out.cumulative_reward == reward && out.steps_used == steps &&
                           out.next_state == b->current_state() &&
                           out.terminated == b->done();
        if (!equal) ok = false;
        CHECK(equal);
    }
    const double sec = timer.seconds();
    std::ostringstream detail;
    detail << checked << " cases, exact reward/endpoint/steps equality";
    report(1, ok && sec < 5.0, sec, detail.str());
    CHECK(sec < 5.0);
}

TEST_CASE("criterion 2: exact solvers agree and macro values dominate") {
    Timer timer;
    Rng rng(0xC2);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const core::ExplicitMDP prim = random_mdp(rng, 4, 3, trial % 3 != 0);
        const core::ExplicitMDP aug = core::with_macro_row(prim, random_macro(rng, 3, 3));
        const core::ValueTable vi = core::value_iteration(aug, 0.9, 1e-12);
        const core::ValueTable brute = core::enumerate_policies(aug, 0.9);
        const core::ValueTable vi_prim = core::value_iteration(prim, 0.9, 1e-12);
        for (int s = 0; s < 4; ++s) {
            const auto i = static_cast<std::size_t>(s);
            if (std::abs(vi.values[i] - brute.values[i]) > 1e-8) ok = false;
            CHECK(vi.values[i] == doctest::Approx(brute.values[i]).epsilon(1e-8));
            if (vi.values[i] < vi_prim.values[i] - 1e-8) ok = false;
            CHECK(vi.values[i] >= vi_prim.values[i] - 1e-8);
        }
    }
    const double sec = timer.seconds();
    report(2, ok && sec < 30.0, sec,
           "100 random 4-state/3-action instances, 1e-8 agreement + dominance");
    CHECK(sec < 30.0);
}

TEST_CASE("criterion 3: macro decisions replay as atomic pseudo-primitives") {
    Timer timer;
    const exp::EnvCatalog cat = catalog();
    bool ok = true;
    int replayed = 0;

    const auto run = [&](learn::LearnerKind kind, const std::string& env_tag,
                         const core::MacroAction& macro) {
        const core::EnvFactory factory = cat.factory(env_tag);
        const core::ActionSet set =
            core::ActionSet::with_macro(cat.primitive_count(env_tag), macro);
        learn::TrainConfig cfg;
        cfg.budget_steps = 20'000;
        cfg.seed = 3;
        std::vector<learn::DecisionRecord> records;
        const learn::DecisionSink sink = [&](const learn::DecisionRecord& r) {
            if (r.primitive_steps > 1) records.push_back(r);
        };
        if (kind == learn::LearnerKind::q_learning)
            learn::train_q_learning(factory, set, cfg, sink);
        else
            learn::train_actor_critic(factory, set, cfg, sink);

        const auto probe = factory();
        learn::QTable q_macro(probe->state_count(), set.size());
        learn::QTable q_atomic(probe->state_count(), set.size());
        learn::ActorCriticTables ac_macro(probe->state_count(), set.size());
        learn::ActorCriticTables ac_atomic(probe->state_count(), set.size());
        for (const learn::DecisionRecord& rec : records) {
            learn::DecisionRecord atomic = rec;
            atomic.primitive_steps = 1;
            learn::apply_q_update(q_macro, rec, cfg);
            learn::apply_q_update(q_atomic, atomic, cfg);
            learn::apply_ac_update(ac_macro, rec, cfg);
            learn::apply_ac_update(ac_atomic, atomic, cfg);
        }
        replayed += static_cast<int>(records.size());
        if (q_macro.values != q_atomic.values) ok = false;
        if (ac_macro.preferences != ac_atomic.preferences) ok = false;
        if (ac_macro.state_values != ac_atomic.state_values) ok = false;
        CHECK(q_macro.values == q_atomic.values);
        CHECK(ac_macro.preferences == ac_atomic.preferences);
        CHECK(ac_macro.state_values == ac_atomic.state_values);
    };
    run(learn::LearnerKind::q_learning, "dense", core::MacroAction({0, 2, 0, 0}));
    run(learn::LearnerKind::actor_critic, "risk_corridor", core::MacroAction({0, 0}));

    const double sec = timer.seconds();
    std::ostringstream detail;
    detail << replayed << " logged macro decisions, exact table equality";
    report(3, ok && sec < 5.0, sec, detail.str());
    CHECK(replayed > 200);
    CHECK(sec < 5.0);
}

TEST_CASE("criterion 4: genetic-stage structural laws at the published defaults") {
    Timer timer;
    const exp::EnvCatalog cat = catalog();
    const core::EnvFactory factory = cat.factory("dense");
    bool ok = true;
    for (std::uint64_t seed : kSeeds) {
        ga::GAConfig cfg; // 50 / 8 / 5 / 3, 20k fitness budget
        cfg.master_seed = seed;
        cfg.jobs = jobs();
        const ga::GAResult result =
            ga::generate_macro(cfg, factory, learn::LearnerKind::q_learning, {});
        if (result.evaluations_used != 50) ok = false;
        CHECK(result.evaluations_used == 50);
        CHECK(result.evaluated.size() == 50);
        for (int j = 0; j < cfg.generation_size(); ++j) {
            if (result.evaluated[static_cast<std::size_t>(j)].macro.length() != 2) ok = false;
            CHECK(result.evaluated[static_cast<std::size_t>(j)].macro.length() == 2);
        }
        for (const ga::FitnessRecord& rec : result.evaluated) {
            if (rec.macro.length() < 2) ok = false;
            CHECK(rec.macro.length() >= 2);
        }
        for (std::size_t i = 1; i < result.log.rows.size(); ++i) {
            if (result.log.rows[i].best_fitness < result.log.rows[i - 1].best_fitness)
                ok = false;
            CHECK(result.log.rows[i].best_fitness >= result.log.rows[i - 1].best_fitness);
        }
        CHECK(result.log.rows.size() >= 6); // six full generations before the budget breaks
    }
    const double sec = timer.seconds();
    report(4, ok && sec < 120.0, sec,
           "5 seeds x 50 evaluations, length-2 init, elitist best non-decreasing");
    CHECK(sec < 120.0);
}

TEST_CASE("criterion 5: average retained fitness improves across generations") {
    Timer timer;
    const exp::EnvCatalog cat = catalog();
    const core::EnvFactory factory = cat.factory("dense");
    int improved = 0;
    std::ostringstream detail;
    for (std::uint64_t seed : kSeeds) {
        ga::GAConfig cfg;
        cfg.master_seed = seed;
        cfg.jobs = jobs();
        const ga::GAResult result =
            ga::generate_macro(cfg, factory, learn::LearnerKind::q_learning, {});
        const double first = result.log.rows.front().avg_fitness;
        const double last = result.log.rows.back().avg_fitness;
        if (last > first) ++improved;
        detail << " " << first << "->" << last;
    }
    const double sec = timer.seconds();
    const bool ok = improved >= 4;
    report(5, ok && sec < 900.0, sec,
           "final vs generation-0 average fitness improved on " + std::to_string(improved) +
               "/5 seeds:" + detail.str());
    CHECK(improved >= 4);
    CHECK(sec < 900.0);
}

TEST_CASE("criterion 6: embedding effect against vanilla and action-repeat arms") {
    Timer timer;
    exp::ExperimentConfig cfg;
    cfg.mode = exp::Mode::validation;
    cfg.train.budget_steps = kUtilizationBudget;
    cfg.seeds = kSeeds;
    cfg.jobs = jobs();
    cfg.ga.master_seed = kMasterSeed;
    cfg.repeat_baseline = true;
    const exp::Report r = exp::run_validation(cfg, catalog());
    const exp::ArmReport& vanilla = exp::find_arm(r, "dense", "vanilla");
    const exp::ArmReport& macro = exp::find_arm(r, "dense", "macro");
    const exp::ArmReport& repeat = exp::find_arm(r, "dense", "repeat");
    double mean_diff = 0.0;
    int ge_repeat = 0;
    for (std::size_t i = 0; i < kSeeds.size(); ++i) {
        mean_diff += (macro.auc_per_seed[i] - vanilla.auc_per_seed[i]) / kSeeds.size();
        if (macro.auc_per_seed[i] >= repeat.auc_per_seed[i]) ++ge_repeat;
    }
    const double sec = timer.seconds();
    const bool ok = mean_diff > 0.0 && ge_repeat >= 3;
    std::ostringstream detail;
    detail << "macro (" << r.macro_names << ") AUC-vanilla=" << mean_diff
           << " (>0), >=repeat (" << repeat.macro_names << ") on " << ge_repeat << "/5";
    report(6, ok && sec < 1200.0, sec, detail.str());
    CHECK(mean_diff > 0.0);
    CHECK(ge_repeat >= 3);
    CHECK(sec < 1200.0);
}

TEST_CASE("criterion 7: evaluation effect on the risk corridor") {
    Timer timer;
    const exp::EnvCatalog cat = catalog();
    const core::EnvFactory factory = cat.factory("risk_corridor");
    const core::ActionSet vanilla = core::ActionSet::primitives_only(env::kRiskActionCount);
    const core::ActionSet with_ff =
        core::ActionSet::with_macro(env::kRiskActionCount,
                                    core::MacroAction({env::kForward, env::kForward}));
    int wins = 0;
    std::ostringstream detail;
    for (std::uint64_t seed : kSeeds) {
        learn::TrainConfig cfg;
        cfg.budget_steps = 50'000;
        cfg.seed = seed;
        const auto v = learn::train_q_learning(factory, vanilla, cfg);
        const auto m = learn::train_q_learning(factory, with_ff, cfg);
        const std::uint64_t eval_seed = Rng::derive(seed, 0xE7A1);
        const auto ev = learn::evaluate_policy(factory, vanilla,
                                               learn::greedy_policy_fn(v.table), 100, eval_seed);
        const auto em = learn::evaluate_policy(factory, with_ff,
                                               learn::greedy_policy_fn(m.table), 100, eval_seed);
        if (em.mean_return > ev.mean_return) ++wins;
        detail << " " << em.mean_return << "vs" << ev.mean_return;
    }
    const double sec = timer.seconds();
    const bool ok = wins >= 4;
    report(7, ok && sec < 300.0, sec,
           "(FORWARD,FORWARD) beats vanilla on " + std::to_string(wins) +
               "/5 seeds (returns macro-vs-vanilla:" + detail.str() + ")");
    CHECK(wins >= 4);
    CHECK(sec < 300.0);
}

TEST_CASE("criterion 8: reusability in both method directions") {
    Timer timer;
    bool ok = true;
    std::ostringstream detail;
    for (int dir = 0; dir < 2; ++dir) {
        exp::ExperimentConfig cfg;
        cfg.mode = exp::Mode::reusability;
        cfg.gen_method =
            dir == 0 ? learn::LearnerKind::q_learning : learn::LearnerKind::actor_critic;
        cfg.util_method =
            dir == 0 ? learn::LearnerKind::actor_critic : learn::LearnerKind::q_learning;
        cfg.train.budget_steps = kUtilizationBudget;
        cfg.seeds = kSeeds;
        cfg.jobs = jobs();
        cfg.ga.master_seed = kMasterSeed;
        const exp::Report r = exp::run_reusability(cfg, catalog());
        const exp::ArmReport& vanilla = exp::find_arm(r, "dense", "vanilla");
        const exp::ArmReport& macro = exp::find_arm(r, "dense", "macro");
        double mean_diff = 0.0;
        for (std::size_t i = 0; i < kSeeds.size(); ++i)
            mean_diff += (macro.auc_per_seed[i] - vanilla.auc_per_seed[i]) / kSeeds.size();
        if (mean_diff <= 0.0) ok = false;
        CHECK(mean_diff > 0.0);
        detail << (dir == 0 ? " q->ac:" : " ac->q:") << mean_diff;
    }
    const double sec = timer.seconds();
    report(8, ok && sec < 1800.0, sec, "mean AUC improvement" + detail.str() + " (both >0)");
    CHECK(sec < 1800.0);
}

TEST_CASE("criterion 9: transferability across the four reward settings") {
    Timer timer;
    exp::ExperimentConfig cfg;
    cfg.mode = exp::Mode::transferability;
    cfg.util_envs = {"dense", "sparse", "very_sparse", "super_sparse"};
    cfg.train.budget_steps = kUtilizationBudget;
    cfg.seeds = kSeeds;
    cfg.eval_episodes = 100;
    cfg.jobs = jobs();
    cfg.ga.master_seed = kMasterSeed;
    const exp::Report r = exp::run_transferability(cfg, catalog());
    REQUIRE(r.transfer.size() == 4);
    bool all_negative = true;
    double sparse_red = 0.0, super_red = 0.0;
    std::ostringstream detail;
    for (const exp::TransferRow& row : r.transfer) {
        if (row.reduction_pct >= 0.0) all_negative = false;
        if (row.task == "sparse") sparse_red = row.reduction_pct;
        if (row.task == "super_sparse") super_red = row.reduction_pct;
        detail << " " << row.task << "=" << row.reduction_pct << "%";
    }
    const bool ordering = std::abs(super_red) >= std::abs(sparse_red);
    const double sec = timer.seconds();
    report(9, all_negative && ordering && sec < 2700.0, sec,
           "macro (" + r.macro_names + ") reductions:" + detail.str());
    CHECK(all_negative);
    CHECK(ordering);
    CHECK(sec < 2700.0);
}

TEST_CASE("criterion 10: command reruns are byte-identical") {
    Timer timer;
    const std::string cli = [] {
        if (const char* p = std::getenv("MACROFORGE_CLI"); p && *p) return std::string(p);
        return std::string("./build/macroforge");
    }();
    const fs::path dir = fs::temp_directory_path() / "macroforge_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);

    std::ostringstream gen_cfg;
    gen_cfg << "[generation]\nmethod = q_learning\nenv = dense\n"
            << "[ga]\nk = 8\nq = 4\nq_plus = 2\nq_star = 2\nfitness_budget_steps = 5000\n"
            << "seed = 11\n"
            << "[maze]\nmaps_dir = " << maps_dir() << "\n";
    cli::write_file((dir / "gen.ini").string(), gen_cfg.str());

    std::ostringstream exp_cfg;
    exp_cfg << "[experiment]\nmode = validation\nseeds = 1,2\neval_episodes = 10\n"
            << "buckets = 20\nmacro = MOVE_FORWARD,TURN_RIGHT,MOVE_FORWARD,MOVE_FORWARD\n"
            << "[generation]\nmethod = q_learning\nenv = dense\n"
            << "[utilization]\nmethod = q_learning\nbudget_steps = 20000\n"
            << "[maze]\nmaps_dir = " << maps_dir() << "\n";
    cli::write_file((dir / "exp.ini").string(), exp_cfg.str());

    bool ok = true;
    const auto run = [&](const std::string& args) {
        const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
        if (WEXITSTATUS(status) != 0) ok = false;
        CHECK(WEXITSTATUS(status) == 0);
    };
    run("generate --config " + (dir / "gen.ini").string() + " --out " + (dir / "g1").string());
    run("generate --config " + (dir / "gen.ini").string() + " --out " + (dir / "g2").string());
    run("experiment --config " + (dir / "exp.ini").string() + " --out " + (dir / "e1").string());
    run("experiment --config " + (dir / "exp.ini").string() + " --out " + (dir / "e2").string());

    const auto same = [&](const fs::path& a, const fs::path& b) {
        const bool equal = slurp(a.string()) == slurp(b.string());
        if (!equal) ok = false;
        CHECK(equal);
    };
    same(dir / "g1" / "macro.json", dir / "g2" / "macro.json");
    same(dir / "g1" / "generations.csv", dir / "g2" / "generations.csv");
    same(dir / "e1" / "report.json", dir / "e2" / "report.json");
    for (const auto& entry : fs::directory_iterator(dir / "e1" / "curves"))
        same(entry.path(), dir / "e2" / "curves" / entry.path().filename());

    const double sec = timer.seconds();
    report(10, ok && sec < 120.0, sec,
           "generate and experiment reruns byte-identical (macro, log, report, curves)");
    CHECK(sec < 120.0);
}
