#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lacircle/detector.hpp"
#include "lacircle/geometry.hpp"
#include "lacircle/image.hpp"
#include "lacircle/random.hpp"

namespace lacircle {

/// A ground-truth circle. Partial circles are drawn as half disks.
struct TrueCircle {
    Circle circle;
    bool partial = false;
};

/// Parameters for a synthetic scene. When `circles` is non-empty those exact
/// circles are drawn and the random placement fields are ignored.
struct SceneSpec {
    int width = 256;
    int height = 256;
    int n_circles = 1;
    int r_lo = 20;
    int r_hi = 80;
    /// Fraction of circles drawn as half disks.
    double partial_fraction = 0.0;
    /// Minimum distance between any two centres.
    double min_separation = 0.0;
    /// Minimum gap between each circle and the image border.
    int margin = 2;
    bool filled = true;
    /// Ring width for outlined circles.
    double stroke = 3.0;
    std::uint8_t foreground = 220;
    std::uint8_t background = 30;
    double noise = 0.0;
    std::uint64_t seed = 0;
    int max_retries = 1000;
    std::vector<TrueCircle> circles;
};

struct GroundTruthScene {
    GrayImage image;
    std::vector<TrueCircle> circles;
    double noise_level = 0.0;
    std::uint64_t seed = 0;

    [[nodiscard]] std::vector<Circle> truth() const;
};

/// Draws the scene with 4x4 supersampled coverage so edges sit where the
/// analytic boundary is, then applies salt & pepper noise. Integer centres and
/// radii are drawn uniformly. Throws PlacementFailure or ConfigError.
[[nodiscard]] GroundTruthScene generate_scene(const SceneSpec& spec, Rng& rng);
/// Seeds its generator from spec.seed.
[[nodiscard]] GroundTruthScene generate_scene(const SceneSpec& spec);

/// Each pixel independently becomes 0 or 255 (even odds) with probability
/// level. The corrupted set depends only on the generator, not on the image.
[[nodiscard]] GrayImage add_salt_pepper(const GrayImage& img, double level, Rng& rng);

/// Weights of the error score plus the score charged for a missed circle.
struct MetricConfig {
    double eta = 0.05;
    double mu = 0.1;
    double es_fail = 2.0;
};

/// eta * (|dx| + |dy|) + mu * |dr|
[[nodiscard]] double error_score(const Circle& detected, const Circle& truth,
                                 const MetricConfig& m = {});

struct MatchReport {
    double me = 0.0;
    /// Es per true circle; es_fail for unmatched ones.
    std::vector<double> es;
    /// Detection index matched to each true circle, or -1.
    std::vector<int> match;
    std::size_t false_positives = 0;
};

/// Greedy one-to-one assignment (smallest Es first, ties by truth index then
/// detection order) and the multiple error averaged over the true circles.
[[nodiscard]] MatchReport match_circles(std::span<const Circle> detected,
                                        std::span<const Circle> truth, const MetricConfig& m = {});

[[nodiscard]] double multiple_error(const DetectionResult& result, const GroundTruthScene& scene,
                                    const MetricConfig& m = {});

/// Percentage of trials with ME < 1.
[[nodiscard]] double success_rate(std::span<const double> me_values);

[[nodiscard]] nlohmann::json truth_to_json(const GroundTruthScene& scene);
[[nodiscard]] std::vector<TrueCircle> truth_from_json(const nlohmann::json& j);

}  // namespace lacircle
