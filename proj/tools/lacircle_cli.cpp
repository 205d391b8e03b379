// lacircle: command-line front end for the learning-automaton circle detector.
//
// Exit codes: 0 ok, 1 I/O or configuration error, 2 nothing detectable
// (too few edge points / no feasible candidate), 3 --assert threshold unmet.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "lacircle/bench.hpp"
#include "lacircle/config.hpp"
#include "lacircle/detector.hpp"
#include "lacircle/edges.hpp"
#include "lacircle/errors.hpp"
#include "lacircle/image.hpp"
#include "lacircle/synth.hpp"

namespace fs = std::filesystem;
using namespace lacircle;

namespace {

enum ExitCode : int { kOk = 0, kIoOrConfig = 1, kNoDetection = 2, kAssertion = 3 };

struct EdgeFlags {
    std::optional<double> blur_sigma;
    std::optional<double> low_thresh;
    std::optional<double> high_thresh;

    void attach(CLI::App& app) {
        app.add_option("--blur-sigma", blur_sigma, "Gaussian sigma before gradients (1.4)");
        app.add_option("--low-thresh", low_thresh, "Hysteresis low threshold, normalized (0.1)");
        app.add_option("--high-thresh", high_thresh, "Hysteresis high threshold, normalized (0.3)");
    }
    void apply(EdgeConfig& cfg) const {
        if (blur_sigma) cfg.blur_sigma = *blur_sigma;
        if (low_thresh) cfg.low_thresh = *low_thresh;
        if (high_thresh) cfg.high_thresh = *high_thresh;
    }
};

struct DetectorFlags {
    EdgeFlags edges;
    std::optional<double> fraction, r_min, r_max, sensitivity, theta, p_stop, pr_divisor;
    std::optional<double> max_clip_fraction, beta_accept, beta_min_solution;
    std::optional<std::size_t> k_cap, k_max, action_cap;
    std::optional<std::uint64_t> seed;
    std::string config;

    void attach(CLI::App& app) {
        edges.attach(app);
        app.add_option("--fraction", fraction, "Fraction of edge points sampled (0.05)");
        app.add_option("--r-min", r_min, "Smallest feasible radius (40)");
        app.add_option("--r-max", r_max, "Largest feasible radius (150)");
        app.add_option("--sensitivity", sensitivity, "Sensitivity s of the distinctiveness threshold (2)");
        app.add_option("--theta", theta, "Learning rate (0.001)");
        app.add_option("--k-cap", k_cap, "Absolute iteration ceiling (5000)");
        app.add_option("--k-max", k_max, "Iteration budget (default: actions / 2)");
        app.add_option("--p-stop", p_stop, "Stop once an action reaches this probability (0.2)");
        app.add_option("--pr-divisor", pr_divisor, "Extraction cutoff Pr_high / divisor (10)");
        app.add_option("--action-cap", action_cap, "Maximum number of actions (1000)");
        app.add_option("--max-clip-fraction", max_clip_fraction,
                       "Reject candidates clipped beyond this fraction (0.5)");
        app.add_option("--beta-accept", beta_accept, "Skip extracted circles below this beta (0)");
        app.add_option("--beta-min-solution", beta_min_solution,
                       "Stop learning when a drawn action reaches this beta");
        app.add_option("--seed", seed, "Random seed (0)");
        app.add_option("--config", config, "JSON config with flat keys named like the flags");
    }

    // defaults < config file < flags
    void resolve(DetectorConfig& cfg, MetricConfig& metric, std::uint64_t& seed_out) const {
        seed_out = 0;
        if (!config.empty()) {
            const auto j = load_json_file(config);
            apply_detector_json(j, cfg, metric);
            if (j.contains("seed")) {
                if (!j["seed"].is_number_unsigned()) throw ConfigError("config key 'seed' must be a non-negative integer");
                seed_out = j["seed"].get<std::uint64_t>();
            }
        }
        edges.apply(cfg.edges);
        if (fraction) cfg.fraction = *fraction;
        if (r_min) cfg.r_min = *r_min;
        if (r_max) cfg.r_max = *r_max;
        if (sensitivity) cfg.sensitivity = *sensitivity;
        if (theta) cfg.theta = *theta;
        if (k_cap) cfg.k_cap = *k_cap;
        if (k_max) cfg.k_max = *k_max;
        if (p_stop) cfg.p_stop = *p_stop;
        if (pr_divisor) cfg.pr_divisor = *pr_divisor;
        if (action_cap) cfg.action_cap = *action_cap;
        if (max_clip_fraction) cfg.max_clip_fraction = *max_clip_fraction;
        if (beta_accept) cfg.beta_accept = *beta_accept;
        if (beta_min_solution) cfg.beta_min_solution = *beta_min_solution;
        if (seed) seed_out = *seed;
        validate(cfg);
    }
};

void write_text(const fs::path& path, const std::string& text) {
    detail::write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

bool is_edge_map_file(const fs::path& path) {
    const auto bytes = detail::read_file(path);
    return bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '4';
}

int cmd_edges(const std::string& input, const std::string& output, const EdgeFlags& flags,
              const std::string& config) {
    EdgeConfig cfg;
    if (!config.empty()) {
        DetectorConfig det;
        MetricConfig metric;
        apply_detector_json(load_json_file(config), det, metric);
        cfg = det.edges;
    }
    flags.apply(cfg);
    if (!(cfg.low_thresh >= 0.0 && cfg.low_thresh <= cfg.high_thresh) || !(cfg.blur_sigma >= 0.0)) {
        throw ConfigError("need blur-sigma >= 0 and 0 <= low-thresh <= high-thresh");
    }
    const auto img = load_gray_image(input);
    const auto edges = detect_edges(img, cfg);
    save_edge_map(edges, output);
    std::cout << edges.count() << "\n";
    return kOk;
}

int cmd_detect(const std::string& input, const DetectorFlags& flags, const std::string& out,
               const std::string& overlay, bool timing) {
    DetectorConfig cfg;
    MetricConfig metric;
    std::uint64_t seed = 0;
    flags.resolve(cfg, metric, seed);

    DetectionResult result;
    std::optional<GrayImage> image;
    if (is_edge_map_file(input)) {
        result = detect(load_edge_map(input), cfg, seed);
    } else {
        image = load_gray_image(input);
        result = detect(*image, cfg, seed);
    }
    const std::string text = to_json(result, timing).dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text(out, text);
    }
    if (!overlay.empty()) {
        if (!image) {
            const auto edges = load_edge_map(input);
            std::vector<std::uint8_t> gray(edges.bits().size());
            for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = edges.bits()[i] ? 255 : 0;
            image = GrayImage(edges.width(), edges.height(), std::move(gray));
        }
        save_rgb_image(render_overlay(*image, result.circles), overlay);
    }
    return kOk;
}

struct SynthFlags {
    std::string out;
    std::string truth;
    std::string config;
    std::optional<int> width, height, circles, r_lo, r_hi, margin;
    std::optional<double> min_sep, partial, noise;
    std::optional<std::uint64_t> seed;
    bool outline = false;
};

int cmd_synth(const SynthFlags& f) {
    SceneSpec spec;
    if (!f.config.empty()) apply_scene_json(load_json_file(f.config), spec);
    if (f.width) spec.width = *f.width;
    if (f.height) spec.height = *f.height;
    if (f.circles) spec.n_circles = *f.circles;
    if (f.r_lo) spec.r_lo = *f.r_lo;
    if (f.r_hi) spec.r_hi = *f.r_hi;
    if (f.margin) spec.margin = *f.margin;
    if (f.min_sep) spec.min_separation = *f.min_sep;
    if (f.partial) spec.partial_fraction = *f.partial;
    if (f.noise) spec.noise = *f.noise;
    if (f.seed) spec.seed = *f.seed;
    if (f.outline) spec.filled = false;

    const auto scene = generate_scene(spec);
    save_gray_image(scene.image, f.out);
    fs::path truth = f.truth;
    if (truth.empty()) {
        truth = f.out;
        truth.replace_extension(".json");
    }
    write_text(truth, truth_to_json(scene).dump(2) + "\n");
    return kOk;
}

struct BenchFlags {
    std::string suite;
    std::size_t trials = 35;
    std::uint64_t base_seed = 0;
    std::string out;
    std::string table;
    std::optional<double> assert_sr;
    std::optional<double> assert_me;
    bool timing = false;
};

int cmd_bench(const BenchFlags& f) {
    if (f.trials < 1) throw ConfigError("--trials must be >= 1");
    const auto suite = load_suite(f.suite);
    const auto report = run_benchmark(suite, f.trials, f.base_seed);
    const std::string table = to_table(report, f.timing);
    std::cout << table;
    if (!f.table.empty()) write_text(f.table, table);
    if (!f.out.empty()) write_text(f.out, to_json(report, f.timing).dump(2) + "\n");

    int status = kOk;
    for (const auto& row : report.rows) {
        if (f.assert_sr && row.sr < *f.assert_sr) {
            std::cerr << fmt::format("assertion failed: {} SR {:.2f} < {:.2f}\n", row.name, row.sr,
                                     *f.assert_sr);
            status = kAssertion;
        }
        if (f.assert_me && row.me_mean > *f.assert_me) {
            std::cerr << fmt::format("assertion failed: {} ME {:.3f} > {:.3f}\n", row.name,
                                     row.me_mean, *f.assert_me);
            status = kAssertion;
        }
    }
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiple-circle detection with a learning automaton"};
    app.require_subcommand(1);

    std::string edges_in, edges_out, edges_config;
    EdgeFlags edge_flags;
    auto* edges_cmd = app.add_subcommand("edges", "Write the Canny edge map of an image as PBM");
    edges_cmd->add_option("input", edges_in, "Input PGM or PNG")->required();
    edges_cmd->add_option("output", edges_out, "Output PBM (its sidecar is <output>.json)")
        ->required();
    edge_flags.attach(*edges_cmd);
    edges_cmd->add_option("--config", edges_config, "JSON config with flat keys");

    std::string detect_in, detect_out, detect_overlay;
    bool detect_timing = false;
    DetectorFlags detector_flags;
    auto* detect_cmd = app.add_subcommand("detect", "Detect circles in an image or PBM edge map");
    detect_cmd->add_option("input", detect_in, "Input PGM, PNG or PBM edge map")->required();
    detector_flags.attach(*detect_cmd);
    detect_cmd->add_option("--out", detect_out, "Write result JSON here instead of stdout");
    detect_cmd->add_option("--overlay", detect_overlay, "Write the annotated image (.ppm or .png)");
    detect_cmd->add_flag("--timing", detect_timing, "Record elapsed_s (output is then not reproducible)");

    SynthFlags synth_flags;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scene with ground truth");
    synth_cmd->add_option("--out", synth_flags.out, "Output image (.pgm or .png)")->required();
    synth_cmd->add_option("--truth", synth_flags.truth, "Ground-truth JSON (default: <out> with a .json extension)");
    synth_cmd->add_option("--config", synth_flags.config, "Scene JSON");
    synth_cmd->add_option("--width", synth_flags.width, "Image width (256)");
    synth_cmd->add_option("--height", synth_flags.height, "Image height (256)");
    synth_cmd->add_option("--circles", synth_flags.circles, "Number of circles (1)");
    synth_cmd->add_option("--r-lo", synth_flags.r_lo, "Smallest radius (20)");
    synth_cmd->add_option("--r-hi", synth_flags.r_hi, "Largest radius (80)");
    synth_cmd->add_option("--margin", synth_flags.margin, "Gap to the image border (2)");
    synth_cmd->add_option("--min-sep", synth_flags.min_sep, "Minimum centre separation (0)");
    synth_cmd->add_option("--partial", synth_flags.partial, "Fraction of half-disk circles (0)");
    synth_cmd->add_option("--noise", synth_flags.noise, "Salt & pepper level (0)");
    synth_cmd->add_option("--seed", synth_flags.seed, "Random seed (0)");
    synth_cmd->add_flag("--outline", synth_flags.outline, "Draw rings instead of filled disks");

    BenchFlags bench_flags;
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
    bench_cmd->add_option("suite", bench_flags.suite, "Suite JSON")->required();
    bench_cmd->add_option("--trials", bench_flags.trials, "Trials per input (35)");
    bench_cmd->add_option("--base-seed", bench_flags.base_seed, "First trial seed (0)");
    bench_cmd->add_option("--out", bench_flags.out, "Write the JSON report here");
    bench_cmd->add_option("--table", bench_flags.table, "Also write the text table here");
    bench_cmd->add_option("--assert-sr", bench_flags.assert_sr, "Exit 3 if any row has SR below this");
    bench_cmd->add_option("--assert-me", bench_flags.assert_me, "Exit 3 if any row has mean ME above this");
    bench_cmd->add_flag("--timing", bench_flags.timing, "Include wall-clock columns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kIoOrConfig;
    }

    try {
        if (*edges_cmd) return cmd_edges(edges_in, edges_out, edge_flags, edges_config);
        if (*detect_cmd) {
            return cmd_detect(detect_in, detector_flags, detect_out, detect_overlay, detect_timing);
        }
        if (*synth_cmd) return cmd_synth(synth_flags);
        if (*bench_cmd) return cmd_bench(bench_flags);
    } catch (const DetectionError& e) {
        std::cerr << "lacircle: " << e.what() << "\n";
        return kNoDetection;
    } catch (const std::exception& e) {
        std::cerr << "lacircle: " << e.what() << "\n";
        return kIoOrConfig;
    }
    return kIoOrConfig;
}
