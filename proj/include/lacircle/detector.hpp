#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lacircle/automaton.hpp"
#include "lacircle/edges.hpp"
#include "lacircle/geometry.hpp"
#include "lacircle/image.hpp"

namespace lacircle {

/// Every knob of the end-to-end pipeline. Defaults: r in [40, 150], s = 2,
/// theta = 0.001, 5% sampling.
struct DetectorConfig {
    EdgeConfig edges;
    double fraction = 0.05;
    double r_min = 40.0;
    double r_max = 150.0;
    double sensitivity = 2.0;
    double theta = 0.001;
    std::optional<std::size_t> k_max;
    std::size_t k_cap = 5000;
    double p_stop = 0.2;
    double pr_divisor = 10.0;
    std::size_t action_cap = 1000;
    double max_clip_fraction = 0.5;
    double beta_accept = 0.0;
    std::optional<double> beta_min_solution;

    [[nodiscard]] double es_threshold() const {
        return distinctiveness_threshold(r_min, r_max, sensitivity);
    }
    [[nodiscard]] ActionSetConfig action_config() const {
        return {r_min, r_max, action_cap, max_clip_fraction};
    }
    [[nodiscard]] LearningConfig learning_config(std::uint64_t seed) const {
        return {theta, k_max, k_cap, p_stop, beta_min_solution, seed};
    }
};

/// Throws ConfigError naming the first invalid field.
void validate(const DetectorConfig& cfg);

struct DetectedCircle {
    Circle circle;
    double probability = 0.0;
    double beta = 0.0;
    int rank = 0;
    /// Index of the originating action.
    std::size_t action = 0;
};

struct DetectionResult {
    std::vector<DetectedCircle> circles;
    std::size_t n_actions = 0;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
    double elapsed_s = 0.0;
};

/// Walks the actions in descending probability (ties by index) and accepts an
/// action when its distinctiveness to every accepted circle exceeds es_th.
/// Stops once probability drops below Pr_high / pr_divisor. Actions whose beta
/// is below beta_accept are skipped without blocking later ones.
[[nodiscard]] std::vector<DetectedCircle> extract_circles(const ActionSet& actions,
                                                          const ProbabilityVector& pv,
                                                          std::span<const double> betas,
                                                          double es_th, double pr_divisor,
                                                          double beta_accept = 0.0);

/// Full pipeline on an edge map: sample, build actions, learn, extract.
/// Throws TooFewEdgePoints or NoFeasibleActions.
[[nodiscard]] DetectionResult detect(const EdgeMap& edges, const DetectorConfig& cfg,
                                     std::uint64_t seed);

/// Runs detect_edges(img, cfg.edges) first.
[[nodiscard]] DetectionResult detect(const GrayImage& img, const DetectorConfig& cfg,
                                     std::uint64_t seed);

/// Number of accepted pairs whose distinctiveness is not above es_th plus the
/// number of circles whose probability is below Pr_high / pr_divisor.
[[nodiscard]] std::size_t count_contract_violations(const DetectionResult& result, double es_th,
                                                    double pr_divisor);

/// Pass include_timing = false for byte-reproducible output; elapsed_s is then null.
[[nodiscard]] nlohmann::json to_json(const DetectionResult& result, bool include_timing = true);
[[nodiscard]] DetectionResult detection_from_json(const nlohmann::json& j);

/// Copy of img with each circle's midpoint perimeter drawn in marker.
[[nodiscard]] RgbImage render_overlay(const GrayImage& img, std::span<const DetectedCircle> circles,
                                      Rgb marker = {255, 0, 0});

}  // namespace lacircle
