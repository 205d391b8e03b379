#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "lacircle/automaton.hpp"
#include "lacircle/errors.hpp"

namespace lacircle {
namespace {

EdgeMap map_from_points(int w, int h, const std::vector<Point>& pts) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w * h), 0);
    for (auto p : pts) bits[static_cast<std::size_t>(p.y * w + p.x)] = 1;
    return EdgeMap(w, h, bits);
}

SampledPoints sampled(std::vector<Point> pts) { return {std::move(pts), std::nullopt}; }

TEST(BuildActionSet, SingleTriplet) {
    Rng rng(1);
    const auto set = build_action_set(sampled({{150, 100}, {100, 150}, {50, 100}}), {}, 300, 300, rng);
    ASSERT_EQ(set.size(), 1u);
    EXPECT_NEAR(set.actions[0].circle.r, 50.0, 1e-9);
    EXPECT_EQ(set.triplets_examined, 1u);
}

TEST(BuildActionSet, CollinearOnly) {
    Rng rng(1);
    EXPECT_THROW((void)build_action_set(sampled({{0, 0}, {10, 10}, {20, 20}}), {}, 300, 300, rng),
                 NoFeasibleActions);
}

TEST(BuildActionSet, ConcyclicPointsCollapse) {
    Rng rng(1);
    const auto set = build_action_set(sampled({{160, 100}, {100, 160}, {40, 100}, {100, 40}}), {},
                                      300, 300, rng);
    EXPECT_EQ(set.size(), 1u);
    EXPECT_EQ(set.triplets_examined, 4u);
}

TEST(BuildActionSet, RadiusAndClipFilters) {
    Rng rng(1);
    // r = 10 is below r_min.
    EXPECT_THROW((void)build_action_set(sampled({{110, 100}, {100, 110}, {90, 100}}), {}, 300, 300, rng),
                 NoFeasibleActions);
    // Centre at the corner: three quarters of the perimeter is clipped.
    EXPECT_THROW((void)build_action_set(sampled({{50, 0}, {0, 50}, {35, 35}}), {}, 300, 300, rng),
                 NoFeasibleActions);
}

TEST(BuildActionSet, SampledInvariants) {
    Rng pts_rng(3);
    std::vector<Point> pts;
    for (int i = 0; i < 60; ++i) {
        pts.push_back({static_cast<int>(uniform_below(pts_rng, 400)), static_cast<int>(uniform_below(pts_rng, 400))});
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    ActionSetConfig cfg{20, 150, 300, 0.5};
    Rng a(8), b(8);
    const auto set = build_action_set(sampled(pts), cfg, 400, 400, a);
    const auto again = build_action_set(sampled(pts), cfg, 400, 400, b);
    ASSERT_EQ(set.size(), again.size());
    EXPECT_LE(set.size(), cfg.cap);
    std::set<std::tuple<long long, long long, long long>> keys;
    for (std::size_t n = 0; n < set.size(); ++n) {
        const auto& c = set.actions[n];
        EXPECT_EQ(c.circle, again.actions[n].circle);
        EXPECT_GE(c.circle.r, cfg.r_min);
        EXPECT_LE(c.circle.r, cfg.r_max);
        EXPECT_LE(rasterize_circle(c.circle, 400, 400).clipped_fraction(), cfg.max_clip_fraction);
        EXPECT_TRUE(keys.insert({round_pixel(c.circle.x0), round_pixel(c.circle.y0), round_pixel(c.circle.r)}).second);
    }
}

TEST(Reinforcement, PerfectEmptyAndHalf) {
    const Circle c{60, 50, 25};
    const auto perimeter = rasterize_circle(c, 120, 100).points;
    EXPECT_EQ(reinforcement(c, map_from_points(120, 100, perimeter)), 1.0);
    EXPECT_EQ(reinforcement(c, map_from_points(120, 100, {})), 0.0);

    std::vector<Point> half;
    for (std::size_t n = 0; n < perimeter.size(); n += 2) half.push_back(perimeter[n]);
    const double beta = reinforcement(c, map_from_points(120, 100, half));
    EXPECT_DOUBLE_EQ(beta, static_cast<double>(half.size()) / static_cast<double>(perimeter.size()));
    EXPECT_LE(std::abs(beta - 0.5), 1.0 / static_cast<double>(perimeter.size()));
}

TEST(LriUpdate, HandEvaluated) {
    const auto out = lri_update(ProbabilityVector::uniform(4), 0, 1.0, 0.1);
    EXPECT_NEAR(out.p[0], 0.325, 1e-15);
    for (int j = 1; j < 4; ++j) EXPECT_NEAR(out.p[j], 0.225, 1e-15);
    EXPECT_EQ(out.iteration, 1u);
}

TEST(LriUpdate, ZeroRewardIsInaction) {
    ProbabilityVector pv{{0.1, 0.6, 0.3}, 0};
    const auto out = lri_update(pv, 2, 0.0, 0.5);
    EXPECT_EQ(out.p, pv.p);
}

TEST(LriUpdate, RejectsBadArguments) {
    const auto pv = ProbabilityVector::uniform(3);
    EXPECT_THROW((void)lri_update(pv, 3, 0.5, 0.1), std::out_of_range);
    EXPECT_THROW((void)lri_update(pv, 0, 1.5, 0.1), std::invalid_argument);
    EXPECT_THROW((void)lri_update(pv, 0, 0.5, 0.0), std::invalid_argument);
    EXPECT_THROW((void)lri_update(pv, 0, 0.5, 1.0), std::invalid_argument);
}

TEST(LriUpdate, SimplexPreservedRandomWalk) {
    Rng rng(17);
    for (int run = 0; run < 50; ++run) {
        const std::size_t n = 1 + uniform_below(rng, 20);
        std::vector<double> p(n);
        for (auto& v : p) v = uniform01(rng) + 1e-3;
        const double s = std::accumulate(p.begin(), p.end(), 0.0);
        for (auto& v : p) v /= s;
        for (int k = 0; k < 2000; ++k) {
            lri_update_in_place(p, uniform_below(rng, n), uniform01(rng), 0.001 + 0.998 * uniform01(rng));
            const double sum = std::accumulate(p.begin(), p.end(), 0.0);
            ASSERT_NEAR(sum, 1.0, kSimplexTolerance);
            for (double v : p) ASSERT_TRUE(v >= 0.0 && v <= 1.0);
        }
    }
}

TEST(SelectAction, HandEvaluated) {
    const std::vector<double> degenerate{1.0, 0.0, 0.0};
    for (double z : {0.0, 0.3, 0.999999}) EXPECT_EQ(select_action(degenerate, z), 0u);
    const std::vector<double> p{0.2, 0.3, 0.5};
    EXPECT_EQ(select_action(p, 0.25), 1u);
    EXPECT_EQ(select_action(p, 0.0), 0u);
    EXPECT_EQ(select_action(p, 0.2), 1u);
    EXPECT_EQ(select_action(p, 0.7), 2u);
}

TEST(SelectAction, FrequenciesFollowDistribution) {
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    Rng rng(4);
    std::vector<int> hits(4, 0);
    const int n = 200000;
    for (int t = 0; t < n; ++t) ++hits[select_action(p, uniform01(rng))];
    for (std::size_t i = 0; i < 4; ++i) {
        const double sigma = std::sqrt(n * p[i] * (1 - p[i]));
        EXPECT_NEAR(hits[i], n * p[i], 4 * sigma);
    }
}

ActionSet actions_of(std::vector<Circle> circles, int w, int h) {
    ActionSet set;
    for (const auto& c : circles) set.actions.push_back({0, 0, 0, c, 0.0});
    set.width = w;
    set.height = h;
    return set;
}

TEST(RunLearning, SingleActionStopsImmediately) {
    const auto set = actions_of({{50, 50, 20}}, 100, 100);
    const auto out = run_learning(set, map_from_points(100, 100, {}), LearningConfig{});
    EXPECT_EQ(out.probabilities.p, std::vector<double>{1.0});
    EXPECT_EQ(out.iterations, 0u);
    EXPECT_EQ(out.stop, StopReason::kProbabilityThreshold);
}

TEST(RunLearning, PerfectCircleWins) {
    const Circle truth{100, 90, 45};
    const auto edges = map_from_points(200, 200, rasterize_circle(truth, 200, 200).points);
    const auto set = actions_of({{60, 60, 30}, {130, 120, 50}, truth, {100, 90, 60}, {95, 85, 41}, {150, 40, 35}}, 200, 200);
    LearningConfig cfg;
    cfg.theta = 0.1;
    cfg.p_stop = 0.95;
    cfg.k_max = 2000;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        cfg.seed = seed;
        const auto out = run_learning(set, edges, cfg);
        EXPECT_EQ(out.probabilities.argmax(), 2u) << "seed " << seed;
    }
}

TEST(RunLearning, DeterministicAndCachedBetasFresh) {
    const Circle truth{100, 90, 45};
    const auto edges = map_from_points(200, 200, rasterize_circle(truth, 200, 200).points);
    const auto set = actions_of({{60, 60, 30}, truth, {100, 90, 60}, {95, 85, 41}}, 200, 200);
    LearningConfig cfg;
    cfg.theta = 0.05;
    cfg.k_max = 500;
    cfg.seed = 42;
    const auto a = run_learning(set, edges, cfg);
    const auto b = run_learning(set, edges, cfg);
    EXPECT_EQ(a.probabilities.p, b.probabilities.p);
    EXPECT_EQ(a.iterations, b.iterations);
    ASSERT_EQ(a.betas.size(), set.size());
    for (std::size_t n = 0; n < set.size(); ++n) {
        EXPECT_EQ(a.betas[n], reinforcement(set.actions[n].circle, edges));
    }
}

TEST(RunLearning, BudgetAndStopReasons) {
    const auto set = actions_of({{50, 50, 20}, {40, 40, 20}, {60, 60, 20}, {50, 60, 25}}, 100, 100);
    const auto edges = map_from_points(100, 100, {});
    LearningConfig cfg;
    cfg.p_stop = 1.0;
    EXPECT_EQ(iteration_budget(4, cfg), 2u);
    EXPECT_EQ(iteration_budget(100000, cfg), 5000u);
    cfg.k_max = 7;
    EXPECT_EQ(iteration_budget(4, cfg), 7u);
    const auto out = run_learning(set, edges, cfg);
    EXPECT_EQ(out.iterations, 7u);
    EXPECT_EQ(out.stop, StopReason::kIterationBudget);

    const auto perfect = map_from_points(100, 100, rasterize_circle({60, 60, 20}, 100, 100).points);
    cfg.k_max = 100000;
    cfg.k_cap = 100000;
    cfg.beta_min_solution = 0.99;
    const auto found = run_learning(set, perfect, cfg);
    EXPECT_EQ(found.stop, StopReason::kSolutionFound);
    ASSERT_TRUE(found.solution);
    EXPECT_EQ(*found.solution, 2u);
}

TEST(RunLearning, TwoActionDominance) {
    // A traces every perimeter pixel, B only a third of its own.
    const Circle a{60, 60, 30}, b{140, 140, 30};
    auto pts = rasterize_circle(a, 200, 200).points;
    const auto pb = rasterize_circle(b, 200, 200).points;
    for (std::size_t n = 0; n < pb.size(); n += 3) pts.push_back(pb[n]);
    const auto edges = map_from_points(200, 200, pts);
    const auto set = actions_of({a, b}, 200, 200);
    LearningConfig cfg;
    cfg.theta = 0.01;
    cfg.k_max = 1000;
    cfg.p_stop = 1.0;
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        cfg.seed = seed;
        const auto out = run_learning(set, edges, cfg);
        EXPECT_EQ(out.iterations, 1000u);
        wins += out.probabilities.p[0] > out.probabilities.p[1];
    }
    EXPECT_GE(wins, 99);
}

TEST(LearningConfig, Validation) {
    LearningConfig cfg;
    EXPECT_NO_THROW(validate(cfg));
    cfg.theta = 1.0;
    EXPECT_THROW(validate(cfg), std::invalid_argument);
    cfg = {};
    cfg.p_stop = 0.0;
    EXPECT_THROW(validate(cfg), std::invalid_argument);
    cfg = {};
    cfg.beta_min_solution = 1.5;
    EXPECT_THROW(validate(cfg), std::invalid_argument);
}

}  // namespace
}  // namespace lacircle
