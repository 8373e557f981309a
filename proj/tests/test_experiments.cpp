#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "macroforge/errors.hpp"
#include "macroforge/exp/aggregate.hpp"
#include "macroforge/exp/experiment.hpp"
#include "macroforge/learn/q_learning.hpp"

using namespace macroforge;
using namespace macroforge::exp;
using core::MacroAction;

namespace {

std::string maps_dir() {
    if (const char* dir = std::getenv("MACROFORGE_MAPS_DIR"); dir && *dir) return dir;
    return "maps";
}

EnvCatalog catalog() {
    return EnvCatalog(maps_dir(), env::RewardParams{}, env::RiskCorridorSpec{});
}

learn::LearningCurve constant_curve(double value, std::uint64_t seed, int points = 10,
                                    std::int64_t budget = 1000) {
    learn::LearningCurve curve;
    curve.seed = seed;
    curve.method = "q_learning";
    curve.action_set = "vanilla";
    for (int i = 1; i <= points; ++i)
        curve.points.push_back({budget * i / points, value});
    return curve;
}

/// Small, fast experiment setup on the bundled maps.
ExperimentConfig tiny_config(Mode mode) {
    ExperimentConfig cfg;
    cfg.mode = mode;
    cfg.ga.k = 6;
    cfg.ga.q = 2;
    cfg.ga.q_plus = 1;
    cfg.ga.q_star = 1;
    cfg.ga.fitness_budget_steps = 1500;
    cfg.ga.master_seed = 5;
    cfg.train.budget_steps = 6000;
    cfg.seeds = {1, 2};
    cfg.eval_episodes = 5;
    cfg.buckets = 10;
    return cfg;
}

} // namespace

TEST_CASE("t quantile matches the table value for four degrees of freedom") {
    CHECK(t_quantile_975(4) == doctest::Approx(2.776).epsilon(1e-3));
    CHECK(t_quantile_975(1) == doctest::Approx(12.706).epsilon(1e-3));
}

TEST_CASE("aggregate_curves: identical curves have a zero-width band") {
    std::vector<learn::LearningCurve> curves;
    for (int s = 0; s < 5; ++s) curves.push_back(constant_curve(2.5, static_cast<std::uint64_t>(s)));
    const AggregatedCurve agg = aggregate_curves(curves, 10, 1000);
    REQUIRE(agg.mean.size() == 10);
    for (std::size_t i = 0; i < agg.mean.size(); ++i) {
        CHECK(agg.mean[i] == doctest::Approx(2.5));
        CHECK(agg.ci_hi[i] - agg.ci_lo[i] == doctest::Approx(0.0));
    }
}

TEST_CASE("aggregate_curves: hand-computed t interval for samples 1..5") {
    std::vector<learn::LearningCurve> curves;
    for (int s = 1; s <= 5; ++s)
        curves.push_back(constant_curve(static_cast<double>(s), static_cast<std::uint64_t>(s)));
    const AggregatedCurve agg = aggregate_curves(curves, 1, 1000); // one global bucket
    REQUIRE(agg.mean.size() == 1);
    CHECK(agg.mean[0] == doctest::Approx(3.0));
    // s = 1.5811, t(0.975, 4) = 2.776 -> half-width 1.9632
    CHECK(agg.ci_hi[0] - agg.mean[0] == doctest::Approx(1.9632).epsilon(1e-3));
    CHECK(agg.mean[0] - agg.ci_lo[0] == doctest::Approx(1.9632).epsilon(1e-3));
}

TEST_CASE("aggregate_curves: empty buckets carry the previous value") {
    learn::LearningCurve sparse_curve;
    sparse_curve.seed = 1;
    sparse_curve.points = {{100, 1.0}, {900, 5.0}};
    learn::LearningCurve dense_curve;
    dense_curve.seed = 2;
    for (int i = 1; i <= 10; ++i) dense_curve.points.push_back({i * 100, 2.0});
    const AggregatedCurve agg = aggregate_curves({sparse_curve, dense_curve}, 10, 1000);
    // the sparse curve holds 1.0 through the middle buckets
    CHECK(agg.mean[4] == doctest::Approx((1.0 + 2.0) / 2));
    CHECK(agg.mean[9] == doctest::Approx((5.0 + 2.0) / 2));
}

TEST_CASE("aggregate_curves rejects a single curve") {
    CHECK_THROWS_AS(aggregate_curves({constant_curve(1.0, 1)}, 10, 1000),
                    InvalidArgumentError);
}

TEST_CASE("auc: constant and linear shapes") {
    CHECK(auc({0, 50, 100}, {3.0, 3.0, 3.0}) == doctest::Approx(3.0));
    CHECK(auc({0, 100}, {0.0, 1.0}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(auc({0}, {1.0}), InvalidArgumentError);
}

TEST_CASE("auc matches an independent trapezoid recomputation") {
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::int64_t> t{0};
        std::vector<double> y{rng.next_double()};
        for (int i = 0; i < 30; ++i) {
            t.push_back(t.back() + 1 + rng.next_below(50));
            y.push_back(rng.next_double() * 4 - 2);
        }
        double area = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i)
            area += (y[i] + y[i - 1]) * static_cast<double>(t[i] - t[i - 1]) / 2.0;
        CHECK(auc(t, y) == doctest::Approx(area / static_cast<double>(t.back() - t.front())));
    }
}

TEST_CASE("reduction sign convention matches the reference table") {
    CHECK(reduction_pct(405.63, 223.95) == doctest::Approx(-44.79).epsilon(1e-3));
    CHECK(reduction_pct(100.0, 100.0) == doctest::Approx(0.0));
    CHECK(reduction_pct(100.0, 50.0) == doctest::Approx(-50.0));
}

TEST_CASE("mode invariants are enforced at validation") {
    ExperimentConfig cfg = tiny_config(Mode::reusability);
    cfg.util_method = cfg.gen_method; // must differ
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = tiny_config(Mode::validation);
    cfg.util_envs = {"sparse"}; // must equal gen_env
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = tiny_config(Mode::transferability);
    cfg.util_envs = {"dense", "risk_corridor"}; // maze settings only
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = tiny_config(Mode::validation);
    cfg.seeds = {1}; // needs two seeds
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("catalog resolves tags, betas and errors") {
    const EnvCatalog cat = catalog();
    CHECK(cat.is_maze("dense"));
    CHECK_FALSE(cat.is_maze("risk_corridor"));
    CHECK(cat.curiosity_for("dense", 0.1) == 0.1);
    CHECK(cat.curiosity_for("risk_corridor", 0.1) == 0.0);
    CHECK(cat.primitive_count("dense") == 3);
    CHECK(cat.primitive_count("risk_corridor") == 3);
    CHECK_THROWS_AS(cat.factory("lava_pit"), ConfigError);
    auto env = cat.factory("very_sparse")();
    CHECK(env->state_count() > 0);
    CHECK(cat.maze_spec("super_sparse")->fixed_spawns.size() == 1);
}

TEST_CASE("validation run produces fair, reproducible arms") {
    ExperimentConfig cfg = tiny_config(Mode::validation);
    cfg.macro_override = MacroAction({0, 0}); // skip the GA for speed
    const EnvCatalog cat = catalog();
    const Report a = run_validation(cfg, cat);
    REQUIRE(a.arms.size() == 2);
    CHECK(a.generated == false);
    CHECK(a.macro_names == "MOVE_FORWARD,MOVE_FORWARD");
    CHECK(find_arm(a, "dense", "vanilla").curves.size() == 2);
    CHECK(find_arm(a, "dense", "macro").macro_names == "MOVE_FORWARD,MOVE_FORWARD");
    // arm fairness: identical seed lists in curve records
    for (const ArmReport& arm : a.arms) {
        REQUIRE(arm.curves.size() == a.seeds.size());
        for (std::size_t i = 0; i < arm.curves.size(); ++i)
            CHECK(arm.curves[i].seed == a.seeds[i]);
    }
    // byte-identical rerun
    const Report b = run_validation(cfg, cat);
    CHECK(report_to_json(a) == report_to_json(b));
}

TEST_CASE("validation with the repeat baseline adds a same-length repeat arm") {
    ExperimentConfig cfg = tiny_config(Mode::validation);
    cfg.macro_override = MacroAction({0, 0, 2});
    cfg.repeat_baseline = true;
    const Report report = run_validation(cfg, catalog());
    REQUIRE(report.arms.size() == 3);
    const ArmReport& repeat = find_arm(report, "dense", "repeat");
    const MacroAction m = MacroAction::parse(repeat.macro_names, env::maze_action_names());
    CHECK(m.length() == 3);
    CHECK(m.actions()[0] == m.actions()[1]);
    CHECK(m.actions()[1] == m.actions()[2]);
}

TEST_CASE("reusability requires distinct methods and runs both arms") {
    ExperimentConfig cfg = tiny_config(Mode::reusability);
    cfg.util_method = learn::LearnerKind::actor_critic;
    cfg.macro_override = MacroAction({0, 0});
    const Report report = run_reusability(cfg, catalog());
    REQUIRE(report.arms.size() == 2);
    CHECK(report.util_method == "actor_critic");
    CHECK(report.gen_method == "q_learning");
    for (const ArmReport& arm : report.arms) CHECK(arm.method == "actor_critic");
}

TEST_CASE("transferability emits one reduction row per setting") {
    ExperimentConfig cfg = tiny_config(Mode::transferability);
    cfg.util_envs = {"dense", "sparse"};
    cfg.macro_override = MacroAction({0, 0});
    const Report report = run_transferability(cfg, catalog());
    REQUIRE(report.transfer.size() == 2);
    REQUIRE(report.arms.size() == 4);
    for (const TransferRow& row : report.transfer) {
        const ArmReport& vanilla = find_arm(report, row.task, "vanilla");
        const ArmReport& with_macro = find_arm(report, row.task, "macro");
        CHECK(row.vanilla_mean_steps ==
              doctest::Approx(vanilla.eval_mean.mean_steps_to_goal));
        CHECK(row.macro_mean_steps ==
              doctest::Approx(with_macro.eval_mean.mean_steps_to_goal));
        CHECK(row.reduction_pct ==
              doctest::Approx(reduction_pct(row.vanilla_mean_steps, row.macro_mean_steps)));
    }
}

TEST_CASE("report JSON round-trips") {
    ExperimentConfig cfg = tiny_config(Mode::validation);
    cfg.macro_override = MacroAction({0, 2});
    const Report report = run_validation(cfg, catalog());
    const std::string json = report_to_json(report);
    const Report back = report_from_json(json);
    CHECK(back.mode == report.mode);
    CHECK(back.macro_names == report.macro_names);
    CHECK(back.arms.size() == report.arms.size());
    CHECK(back.arms[0].aggregated.mean == report.arms[0].aggregated.mean);
    CHECK(back.arms[1].auc_per_seed == report.arms[1].auc_per_seed);
    CHECK(report_to_json(back) == json); // stable second serialization

    CHECK_THROWS_AS(report_from_json("{}"), ConfigError);
    CHECK_THROWS_AS(report_from_json("not json"), ConfigError);
}

TEST_CASE("a null macro changes nothing measurable on the deterministic corridor") {
    // a NOOP wrapped as a length-1 macro duplicates an existing primitive;
    // the paired AUC difference across seeds should straddle zero
    const EnvCatalog cat = catalog();
    const core::EnvFactory factory = cat.factory("risk_corridor");
    learn::TrainConfig cfg;
    cfg.budget_steps = 20'000;
    const core::ActionSet vanilla = core::ActionSet::primitives_only(3);
    const core::ActionSet with_noop =
        core::ActionSet::with_macro(3, MacroAction({env::kNoop}));
    std::vector<double> diffs;
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        cfg.seed = seed;
        const auto base = learn::train_q_learning(factory, vanilla, cfg);
        const auto null_macro = learn::train_q_learning(factory, with_noop, cfg);
        diffs.push_back(curve_auc(null_macro.curve) - curve_auc(base.curve));
    }
    const double mean = mean_of(diffs);
    const double halfwidth = ci_halfwidth_95(diffs);
    CHECK(mean - halfwidth <= 0.0);
    CHECK(mean + halfwidth >= 0.0);
}

TEST_CASE("two vanilla arms with shared seeds are identical") {
    const EnvCatalog cat = catalog();
    const core::EnvFactory factory = cat.factory("dense");
    learn::TrainConfig cfg;
    cfg.budget_steps = 5000;
    cfg.curiosity_scale = 0.1;
    std::vector<learn::LearningCurve> first, second;
    for (std::uint64_t seed : {3, 4}) {
        cfg.seed = seed;
        first.push_back(learn::train_q_learning(factory, core::ActionSet::primitives_only(3), cfg).curve);
        second.push_back(learn::train_q_learning(factory, core::ActionSet::primitives_only(3), cfg).curve);
    }
    const AggregatedCurve a = aggregate_curves(first, 20, cfg.budget_steps);
    const AggregatedCurve b = aggregate_curves(second, 20, cfg.budget_steps);
    CHECK(a.mean == b.mean);
    CHECK(a.ci_lo == b.ci_lo);
    CHECK(a.ci_hi == b.ci_hi);
}
