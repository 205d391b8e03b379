#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "lacircle/detector.hpp"
#include "lacircle/errors.hpp"
#include "lacircle/synth.hpp"

namespace lacircle {
namespace {

ActionSet actions_of(std::vector<Circle> circles) {
    ActionSet set;
    for (const auto& c : circles) set.actions.push_back({0, 0, 0, c, 0.0});
    set.width = set.height = 400;
    return set;
}

TEST(ExtractCircles, IdenticalActionsGiveOne) {
    const auto set = actions_of({{100, 100, 50}, {100, 100, 50}, {100, 100, 50}});
    const ProbabilityVector pv{{0.4, 0.35, 0.25}, 0};
    const std::vector<double> betas{1, 1, 1};
    EXPECT_EQ(extract_circles(set, pv, betas, 55, 10).size(), 1u);
}

TEST(ExtractCircles, DistinctPairAccepted) {
    // Distinctiveness 30 + 20 + 10 = 60 > 55.
    const auto set = actions_of({{100, 100, 50}, {130, 120, 60}});
    const ProbabilityVector pv{{0.4, 0.3}, 0};
    const std::vector<double> betas{0.9, 0.8};
    const auto out = extract_circles(set, pv, betas, 55, 10);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].rank, 1);
    EXPECT_EQ(out[1].rank, 2);
    EXPECT_EQ(out[0].action, 0u);
    EXPECT_EQ(out[1].beta, 0.8);
}

TEST(ExtractCircles, ProbabilityCutoff) {
    const auto set = actions_of({{100, 100, 50}, {300, 300, 60}});
    const ProbabilityVector pv{{0.4, 0.03}, 0};
    const std::vector<double> betas{1, 1};
    EXPECT_EQ(extract_circles(set, pv, betas, 55, 10).size(), 1u);
}

TEST(ExtractCircles, ChecksAgainstAllAccepted) {
    // C is far from B but a near-duplicate of A.
    const auto set = actions_of({{100, 100, 50}, {250, 250, 50}, {110, 105, 52}});
    const ProbabilityVector pv{{0.5, 0.3, 0.2}, 0};
    const std::vector<double> betas{1, 1, 1};
    const auto out = extract_circles(set, pv, betas, 55, 10);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[1].action, 1u);
}

TEST(ExtractCircles, BetaAcceptSkipsWithoutBlocking) {
    const auto set = actions_of({{100, 100, 50}, {250, 250, 50}, {255, 250, 50}});
    const ProbabilityVector pv{{0.5, 0.3, 0.2}, 0};
    const std::vector<double> betas{0.9, 0.1, 0.8};
    const auto out = extract_circles(set, pv, betas, 55, 10, 0.5);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[1].action, 2u);
}

TEST(ExtractCircles, TiesByActionIndex) {
    const auto set = actions_of({{100, 100, 50}, {250, 250, 50}, {100, 300, 50}});
    const ProbabilityVector pv{{0.2, 0.4, 0.4}, 0};
    const std::vector<double> betas{1, 1, 1};
    const auto out = extract_circles(set, pv, betas, 55, 10);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0].action, 1u);
    EXPECT_EQ(out[1].action, 2u);
    EXPECT_EQ(out[2].action, 0u);
}

GroundTruthScene scene_with(std::vector<Circle> circles, double noise = 0.0) {
    SceneSpec spec;
    for (const auto& c : circles) spec.circles.push_back({c, false});
    spec.noise = noise;
    spec.seed = 9;
    return generate_scene(spec);
}

DetectorConfig desk_config() {
    DetectorConfig cfg;
    cfg.r_min = 15;
    cfg.r_max = 100;
    cfg.beta_accept = 0.3;
    return cfg;
}

TEST(Detect, SingleNoiseFreeCircle) {
    const auto scene = scene_with({{128, 128, 60}});
    const auto result = detect(scene.image, desk_config(), 1);
    ASSERT_EQ(result.circles.size(), 1u);
    EXPECT_LT(error_score(result.circles[0].circle, scene.circles[0].circle), 1.0);
}

TEST(Detect, ThreeSeparatedCircles) {
    const auto scene = scene_with({{60, 60, 40}, {190, 70, 45}, {120, 185, 50}});
    const auto cfg = desk_config();
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 35; ++seed) {
        const auto result = detect(scene.image, cfg, seed);
        EXPECT_EQ(count_contract_violations(result, cfg.es_threshold(), cfg.pr_divisor), 0u);
        std::vector<Circle> found;
        for (const auto& d : result.circles) found.push_back(d.circle);
        const auto truth = scene.truth();
        const auto m = match_circles(found, truth);
        bool all = result.circles.size() == 3;
        for (double es : m.es) all = all && es < 1.0;
        ok += all;
    }
    EXPECT_GE(ok, 32);
}

TEST(Detect, RanksAndProbabilitiesOrdered) {
    const auto scene = scene_with({{60, 60, 40}, {190, 70, 45}, {120, 185, 50}}, 0.02);
    const auto result = detect(scene.image, desk_config(), 3);
    for (std::size_t n = 0; n < result.circles.size(); ++n) {
        const auto& c = result.circles[n];
        EXPECT_EQ(c.rank, static_cast<int>(n) + 1);
        EXPECT_GT(c.probability, 0.0);
        EXPECT_GE(c.beta, 0.0);
        EXPECT_LE(c.beta, 1.0);
        if (n > 0) EXPECT_LE(c.probability, result.circles[n - 1].probability);
    }
}

TEST(Detect, BlankImage) {
    EXPECT_THROW((void)detect(GrayImage(64, 64, 100), DetectorConfig{}, 0), TooFewEdgePoints);
}

TEST(Detect, EdgeMapCompositionAndDeterminism) {
    const auto scene = scene_with({{128, 128, 60}}, 0.02);
    const auto cfg = desk_config();
    const auto from_image = detect(scene.image, cfg, 5);
    const auto from_edges = detect(detect_edges(scene.image, cfg.edges), cfg, 5);
    EXPECT_EQ(to_json(from_image, false).dump(), to_json(from_edges, false).dump());
    EXPECT_EQ(to_json(detect(scene.image, cfg, 5), false).dump(), to_json(from_image, false).dump());
}

TEST(Detect, InvalidConfig) {
    auto cfg = desk_config();
    cfg.r_max = 10;
    EXPECT_THROW((void)detect(GrayImage(8, 8), cfg, 0), ConfigError);
}

TEST(DetectionJson, RoundTrip) {
    DetectionResult r;
    r.circles.push_back({{10.5, 20.25, 30.125}, 0.5, 0.75, 1, 3});
    r.n_actions = 12;
    r.iterations = 6;
    r.seed = 99;
    r.elapsed_s = 0.5;
    const auto j = to_json(r);
    EXPECT_EQ(j["circles"][0]["x0"], 10.5);
    const auto back = detection_from_json(j);
    EXPECT_EQ(back.circles[0].circle, r.circles[0].circle);
    EXPECT_EQ(back.circles[0].rank, 1);
    EXPECT_EQ(back.iterations, 6u);
    EXPECT_EQ(back.elapsed_s, 0.5);
    EXPECT_TRUE(to_json(r, false)["elapsed_s"].is_null());
    EXPECT_THROW((void)detection_from_json(nlohmann::json::object()), FormatError);
}

TEST(Overlay, DrawsPerimeter) {
    const GrayImage img(50, 50, 10);
    const std::vector<DetectedCircle> cs{{{25, 25, 10}, 1, 1, 1, 0}};
    const auto out = render_overlay(img, cs);
    EXPECT_EQ(out.at(35, 25), (Rgb{255, 0, 0}));
    EXPECT_EQ(out.at(25, 25), (Rgb{10, 10, 10}));
}

}  // namespace
}  // namespace lacircle
