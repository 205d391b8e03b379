#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "lacircle/config.hpp"
#include "lacircle/errors.hpp"

namespace lacircle {
namespace {

TEST(DetectorConfig, DefaultsAndThreshold) {
    const DetectorConfig cfg;
    EXPECT_EQ(cfg.fraction, 0.05);
    EXPECT_EQ(cfg.theta, 0.001);
    EXPECT_EQ(cfg.p_stop, 0.2);
    EXPECT_EQ(cfg.pr_divisor, 10.0);
    EXPECT_EQ(cfg.k_cap, 5000u);
    EXPECT_EQ(cfg.action_cap, 1000u);
    EXPECT_EQ(cfg.es_threshold(), 55.0);
    EXPECT_NO_THROW(validate(cfg));
}

TEST(DetectorConfig, JsonOverlay) {
    DetectorConfig cfg;
    MetricConfig metric;
    apply_detector_json(nlohmann::json::parse(
                            R"({"r-min": 15, "r-max": 100, "theta": 0.1, "k-max": 40,
                                "blur-sigma": 2.0, "mu": 0.2, "beta-min-solution": 0.9, "seed": 3})"),
                        cfg, metric);
    EXPECT_EQ(cfg.r_min, 15.0);
    EXPECT_EQ(cfg.r_max, 100.0);
    EXPECT_EQ(cfg.theta, 0.1);
    EXPECT_EQ(cfg.k_max, std::optional<std::size_t>(40));
    EXPECT_EQ(cfg.edges.blur_sigma, 2.0);
    EXPECT_EQ(metric.mu, 0.2);
    EXPECT_EQ(cfg.beta_min_solution, std::optional<double>(0.9));
    EXPECT_EQ(cfg.fraction, 0.05);

    apply_detector_json(nlohmann::json::parse(R"({"k-max": null})"), cfg, metric);
    EXPECT_FALSE(cfg.k_max);
}

TEST(DetectorConfig, JsonErrors) {
    DetectorConfig cfg;
    MetricConfig metric;
    EXPECT_THROW(apply_detector_json(nlohmann::json::parse(R"({"radius": 3})"), cfg, metric), ConfigError);
    EXPECT_THROW(apply_detector_json(nlohmann::json::parse(R"({"theta": "fast"})"), cfg, metric), ConfigError);
    EXPECT_THROW(apply_detector_json(nlohmann::json::parse(R"({"k-cap": -4})"), cfg, metric), ConfigError);
    EXPECT_THROW(apply_detector_json(nlohmann::json::parse("[1, 2]"), cfg, metric), ConfigError);
}

TEST(DetectorConfig, Validation) {
    auto bad = [](auto mutate) {
        DetectorConfig cfg;
        mutate(cfg);
        return cfg;
    };
    EXPECT_THROW(validate(bad([](auto& c) { c.fraction = 0; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) { c.r_max = c.r_min; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) { c.sensitivity = -1; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) { c.theta = 1.5; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) { c.pr_divisor = 1; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) { c.action_cap = 0; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) { c.edges.low_thresh = 0.9; })), ConfigError);
}

TEST(SceneConfig, JsonOverlay) {
    SceneSpec spec;
    apply_scene_json(nlohmann::json::parse(R"({"width": 320, "n-circles": 2, "outline": true,
                                              "noise": 0.04, "seed": 8})"),
                     spec);
    EXPECT_EQ(spec.width, 320);
    EXPECT_EQ(spec.height, 256);
    EXPECT_EQ(spec.n_circles, 2);
    EXPECT_FALSE(spec.filled);
    EXPECT_EQ(spec.noise, 0.04);
    EXPECT_EQ(spec.seed, 8u);

    apply_scene_json(nlohmann::json::parse(R"({"circles": [{"x": 10, "y": 20, "r": 5, "partial": true}]})"), spec);
    ASSERT_EQ(spec.circles.size(), 1u);
    EXPECT_EQ(spec.circles[0].circle, (Circle{10, 20, 5}));
    EXPECT_TRUE(spec.circles[0].partial);

    EXPECT_THROW(apply_scene_json(nlohmann::json::parse(R"({"depth": 3})"), spec), ConfigError);
}

}  // namespace
}  // namespace lacircle
