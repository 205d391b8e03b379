#include "lacircle/bench.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numeric>

#include "lacircle/config.hpp"
#include "lacircle/errors.hpp"

namespace lacircle {

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

GrayImage noisy_trial_image(const GroundTruthScene& clean, const SceneSpec& spec,
                            std::uint64_t trial_seed) {
    Rng rng(mix_seed(spec.seed ^ mix_seed(trial_seed)));
    return add_salt_pepper(clean.image, spec.noise, rng);
}

}  // namespace

Suite suite_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("suite must be a JSON object");
    Suite suite;
    suite.name = j.value("name", std::string("suite"));

    DetectorConfig base;
    if (j.contains("detector")) apply_detector_json(j["detector"], base, suite.metric);
    if (j.contains("metric")) {
        DetectorConfig ignored;
        apply_detector_json(j["metric"], ignored, suite.metric);
    }
    if (!j.contains("inputs") || !j["inputs"].is_array() || j["inputs"].empty()) {
        throw ConfigError("suite needs a non-empty \"inputs\" array");
    }

    for (const auto& in : j["inputs"]) {
        if (!in.is_object()) throw ConfigError("suite input must be an object");
        BenchInput input;
        input.name = in.value("name", std::string("input") + std::to_string(suite.inputs.size()));
        input.detector = base;
        if (in.contains("detector")) {
            MetricConfig unused = suite.metric;
            apply_detector_json(in["detector"], input.detector, unused);
        }
        validate(input.detector);
        if (in.contains("noise-per-trial")) {
            if (!in["noise-per-trial"].is_boolean()) {
                throw ConfigError("noise-per-trial must be a boolean");
            }
            input.noise_per_trial = in["noise-per-trial"].get<bool>();
        }

        if (in.contains("scene")) {
            SceneSpec spec;
            apply_scene_json(in["scene"], spec);
            if (in.contains("noise-levels")) {
                if (!in["noise-levels"].is_array()) throw ConfigError("noise-levels must be an array");
                for (const auto& level : in["noise-levels"]) {
                    if (!level.is_number()) throw ConfigError("noise level must be a number");
                    BenchInput row = input;
                    row.scene = spec;
                    row.scene->noise = level.get<double>();
                    row.name = fmt::format("{} @{:.2f}", input.name, row.scene->noise);
                    suite.inputs.push_back(std::move(row));
                }
                continue;
            }
            input.scene = spec;
        } else if (in.contains("image")) {
            if (!in.contains("truth")) throw ConfigError("image input needs a \"truth\" file");
            input.image = base_dir / in["image"].get<std::string>();
            input.truth = truth_from_json(load_json_file(base_dir / in["truth"].get<std::string>()));
            if (input.truth.empty()) throw ConfigError("truth file lists no circles");
        } else {
            throw ConfigError("suite input needs \"scene\" or \"image\"");
        }
        suite.inputs.push_back(std::move(input));
    }
    return suite;
}

Suite load_suite(const std::filesystem::path& path) {
    return suite_from_json(load_json_file(path), path.parent_path());
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

BenchReport run_benchmark(const Suite& suite, std::size_t trials, std::uint64_t base_seed,
                          const TrialObserver& observer) {
    if (trials < 1) throw std::invalid_argument("run_benchmark: trials must be >= 1");
    BenchReport report;
    report.suite = suite.name;
    report.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) report.seeds.push_back(base_seed + t);

    for (std::size_t idx = 0; idx < suite.inputs.size(); ++idx) {
        const auto& input = suite.inputs[idx];
        GroundTruthScene scene;
        bool redraw_noise = false;
        if (input.scene) {
            SceneSpec clean = *input.scene;
            redraw_noise = input.noise_per_trial && clean.noise > 0.0;
            if (redraw_noise) clean.noise = 0.0;
            scene = generate_scene(clean);
            scene.noise_level = input.scene->noise;
        } else {
            scene.image = load_gray_image(input.image);
            scene.circles = input.truth;
        }
        const auto truth = scene.truth();

        BenchRow row;
        row.name = input.name;
        row.n_true = truth.size();
        std::vector<double> elapsed;
        std::vector<double> false_positives;
        for (std::uint64_t seed : report.seeds) {
            TrialRecord record;
            record.input = idx;
            record.seed = seed;
            const GrayImage image =
                redraw_noise ? noisy_trial_image(scene, *input.scene, seed) : scene.image;
            try {
                auto detection = detect(image, input.detector, seed);
                std::vector<Circle> found;
                for (const auto& d : detection.circles) found.push_back(d.circle);
                record.match = match_circles(found, truth, suite.metric);
                elapsed.push_back(detection.elapsed_s);
                record.detection = std::move(detection);
            } catch (const DetectionError& e) {
                record.error = e.what();
                record.match = match_circles({}, truth, suite.metric);
                ++row.errors;
            }
            row.me_values.push_back(record.match.me);
            false_positives.push_back(static_cast<double>(record.match.false_positives));
            if (observer) observer(input, record);
        }
        std::tie(row.me_mean, row.me_std) = mean_std(row.me_values);
        std::tie(row.elapsed_mean, row.elapsed_std) = mean_std(elapsed);
        row.false_positives_mean = mean_std(false_positives).first;
        row.sr = success_rate(row.me_values);
        report.rows.push_back(std::move(row));
    }
    return report;
}

nlohmann::json to_json(const BenchReport& report, bool include_timing) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r = {{"input", row.name},
                            {"n_true", row.n_true},
                            {"sr", round2(row.sr)},
                            {"me_mean", row.me_mean},
                            {"me_std", row.me_std},
                            {"me_values", row.me_values},
                            {"false_positives_mean", row.false_positives_mean},
                            {"errors", row.errors}};
        r["elapsed_mean_s"] = include_timing ? nlohmann::json(row.elapsed_mean) : nlohmann::json();
        r["elapsed_std_s"] = include_timing ? nlohmann::json(row.elapsed_std) : nlohmann::json();
        rows.push_back(std::move(r));
    }
    return {{"suite", report.suite},
            {"trials", report.trials},
            {"seeds", report.seeds},
            {"rows", std::move(rows)}};
}

std::string to_table(const BenchReport& report, bool include_timing) {
    std::size_t width = 5;
    for (const auto& row : report.rows) width = std::max(width, row.name.size());

    std::string out = fmt::format("{} ({} trials)\n", report.suite, report.trials);
    out += fmt::format("{:<{}}  {:>7}  {:>17}  {:>17}\n", "input", width, "SR (%)",
                       "ME mean +- std", "time (s) +- std");
    for (const auto& row : report.rows) {
        const std::string me = fmt::format("{:.3f} +- {:.3f}", row.me_mean, row.me_std);
        const std::string time = include_timing
                                     ? fmt::format("{:.3f} +- {:.3f}", row.elapsed_mean, row.elapsed_std)
                                     : std::string("-");
        out += fmt::format("{:<{}}  {:>7.2f}  {:>17}  {:>17}\n", row.name, width, row.sr, me, time);
    }
    return out;
}

}  // namespace lacircle
