#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lacircle/detector.hpp"
#include "lacircle/synth.hpp"

namespace lacircle {

/// One benchmark row: a synthetic scene or an image file with known truth.
struct BenchInput {
    std::string name;
    std::optional<SceneSpec> scene;
    std::filesystem::path image;
    std::vector<TrueCircle> truth;
    DetectorConfig detector;
    /// Redraw the salt & pepper pattern for every trial (scene inputs only).
    bool noise_per_trial = true;
};

struct Suite {
    std::string name;
    MetricConfig metric;
    std::vector<BenchInput> inputs;
};

/// Parses a suite document. Relative image/truth paths resolve against
/// base_dir. An input carrying "noise-levels": [...] expands into one row per
/// level. Throws ConfigError.
[[nodiscard]] Suite suite_from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = {});
[[nodiscard]] Suite load_suite(const std::filesystem::path& path);

struct TrialRecord {
    std::size_t input = 0;
    std::uint64_t seed = 0;
    std::optional<DetectionResult> detection;
    MatchReport match;
    /// Set when detection raised TooFewEdgePoints / NoFeasibleActions.
    std::string error;
};

struct BenchRow {
    std::string name;
    std::size_t n_true = 0;
    std::vector<double> me_values;
    double me_mean = 0.0;
    double me_std = 0.0;
    double sr = 0.0;
    double elapsed_mean = 0.0;
    double elapsed_std = 0.0;
    double false_positives_mean = 0.0;
    std::size_t errors = 0;
};

struct BenchReport {
    std::string suite;
    std::size_t trials = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<BenchRow> rows;
};

using TrialObserver = std::function<void(const BenchInput&, const TrialRecord&)>;

/// Runs detect on every input with seeds base_seed .. base_seed + trials - 1.
/// A detection error counts as a failed trial with ME = es_fail.
[[nodiscard]] BenchReport run_benchmark(const Suite& suite, std::size_t trials,
                                        std::uint64_t base_seed,
                                        const TrialObserver& observer = {});

/// Mean and sample standard deviation (0 for a single value).
[[nodiscard]] std::pair<double, double> mean_std(const std::vector<double>& values);

[[nodiscard]] nlohmann::json to_json(const BenchReport& report, bool include_timing = true);
/// Columns: input, SR%, ME mean +- std, time mean +- std.
[[nodiscard]] std::string to_table(const BenchReport& report, bool include_timing = true);

}  // namespace lacircle
