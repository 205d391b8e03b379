#include "lacircle/synth.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lacircle/errors.hpp"

namespace lacircle {

namespace {

constexpr int kSupersample = 4;

void check_spec(const SceneSpec& spec) {
    auto fail = [](const std::string& msg) { throw ConfigError("scene: " + msg); };
    if (spec.width <= 0 || spec.height <= 0) fail("width and height must be positive");
    if (!(spec.noise >= 0.0 && spec.noise <= 1.0)) fail("noise must lie in [0, 1]");
    if (!(spec.partial_fraction >= 0.0 && spec.partial_fraction <= 1.0)) {
        fail("partial fraction must lie in [0, 1]");
    }
    if (spec.margin < 0) fail("margin must be >= 0");
    if (!spec.circles.empty()) return;
    if (spec.n_circles < 1) fail("need at least one circle");
    if (spec.r_lo < 1 || spec.r_hi < spec.r_lo) fail("need 1 <= r_lo <= r_hi");
    if (2 * (spec.r_lo + spec.margin) >= std::min(spec.width, spec.height)) {
        fail("radius range does not fit in the image");
    }
}

// Half-plane direction for partial circles: right, down, left, up.
constexpr double kHalfDirs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

std::vector<TrueCircle> place_circles(const SceneSpec& spec, Rng& rng,
                                      std::vector<int>& half_dirs) {
    for (int attempt = 0; attempt < spec.max_retries; ++attempt) {
        std::vector<TrueCircle> placed;
        half_dirs.clear();
        bool ok = true;
        for (int n = 0; n < spec.n_circles && ok; ++n) {
            ok = false;
            for (int tries = 0; tries < 100; ++tries) {
                const int r = spec.r_lo + static_cast<int>(uniform_below(
                                              rng, static_cast<std::uint64_t>(spec.r_hi - spec.r_lo + 1)));
                const int lo = r + spec.margin;
                const int hi_x = spec.width - 1 - r - spec.margin;
                const int hi_y = spec.height - 1 - r - spec.margin;
                if (hi_x < lo || hi_y < lo) continue;
                const int cx = lo + static_cast<int>(uniform_below(rng, hi_x - lo + 1));
                const int cy = lo + static_cast<int>(uniform_below(rng, hi_y - lo + 1));
                const bool partial = uniform01(rng) < spec.partial_fraction;
                const int dir = static_cast<int>(uniform_below(rng, 4));
                const bool separated =
                    std::all_of(placed.begin(), placed.end(), [&](const TrueCircle& t) {
                        return std::hypot(t.circle.x0 - cx, t.circle.y0 - cy) >= spec.min_separation;
                    });
                if (!separated) continue;
                placed.push_back({{static_cast<double>(cx), static_cast<double>(cy),
                                   static_cast<double>(r)},
                                  partial});
                half_dirs.push_back(dir);
                ok = true;
                break;
            }
        }
        if (ok) return placed;
    }
    throw PlacementFailure("could not place " + std::to_string(spec.n_circles) +
                           " circles after " + std::to_string(spec.max_retries) + " attempts");
}

bool covers(const SceneSpec& spec, const TrueCircle& t, int half_dir, double sx, double sy) {
    const double dx = sx - t.circle.x0;
    const double dy = sy - t.circle.y0;
    const double d = std::hypot(dx, dy);
    const bool inside =
        spec.filled ? d <= t.circle.r : std::abs(d - t.circle.r) <= spec.stroke / 2.0;
    if (!inside) return false;
    if (!t.partial) return true;
    const auto& dir = kHalfDirs[half_dir];
    return dx * dir[0] + dy * dir[1] >= 0.0;
}

GrayImage render(const SceneSpec& spec, const std::vector<TrueCircle>& circles,
                 const std::vector<int>& half_dirs) {
    const int w = spec.width;
    const int h = spec.height;
    std::vector<float> coverage(static_cast<std::size_t>(w) * h, 0.0f);
    const double pad = spec.filled ? 1.0 : 1.0 + spec.stroke;

    for (std::size_t c = 0; c < circles.size(); ++c) {
        const auto& t = circles[c];
        const int x_lo = std::max(0, static_cast<int>(std::floor(t.circle.x0 - t.circle.r - pad)));
        const int x_hi = std::min(w - 1, static_cast<int>(std::ceil(t.circle.x0 + t.circle.r + pad)));
        const int y_lo = std::max(0, static_cast<int>(std::floor(t.circle.y0 - t.circle.r - pad)));
        const int y_hi = std::min(h - 1, static_cast<int>(std::ceil(t.circle.y0 + t.circle.r + pad)));
        for (int y = y_lo; y <= y_hi; ++y) {
            for (int x = x_lo; x <= x_hi; ++x) {
                int hits = 0;
                for (int sy = 0; sy < kSupersample; ++sy) {
                    for (int sx = 0; sx < kSupersample; ++sx) {
                        const double px = x - 0.5 + (sx + 0.5) / kSupersample;
                        const double py = y - 0.5 + (sy + 0.5) / kSupersample;
                        hits += covers(spec, t, half_dirs[c], px, py) ? 1 : 0;
                    }
                }
                auto& cov = coverage[static_cast<std::size_t>(y) * w + x];
                cov = std::max(cov, static_cast<float>(hits) / (kSupersample * kSupersample));
            }
        }
    }

    std::vector<std::uint8_t> data(coverage.size());
    const double bg = spec.background;
    const double fg = spec.foreground;
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = static_cast<std::uint8_t>(std::lround(bg + (fg - bg) * coverage[i]));
    }
    return GrayImage(w, h, std::move(data));
}

}  // namespace

std::vector<Circle> GroundTruthScene::truth() const {
    std::vector<Circle> out;
    out.reserve(circles.size());
    for (const auto& t : circles) out.push_back(t.circle);
    return out;
}

GroundTruthScene generate_scene(const SceneSpec& spec, Rng& rng) {
    check_spec(spec);
    GroundTruthScene scene;
    std::vector<int> half_dirs;
    if (spec.circles.empty()) {
        scene.circles = place_circles(spec, rng, half_dirs);
    } else {
        scene.circles = spec.circles;
        half_dirs.assign(scene.circles.size(), 0);
    }
    scene.image = render(spec, scene.circles, half_dirs);
    if (spec.noise > 0.0) {
        scene.image = add_salt_pepper(scene.image, spec.noise, rng);
    }
    scene.noise_level = spec.noise;
    scene.seed = spec.seed;
    return scene;
}

GroundTruthScene generate_scene(const SceneSpec& spec) {
    Rng rng(spec.seed);
    return generate_scene(spec, rng);
}

GrayImage add_salt_pepper(const GrayImage& img, double level, Rng& rng) {
    if (!(level >= 0.0 && level <= 1.0)) {
        throw std::invalid_argument("add_salt_pepper: level must lie in [0, 1]");
    }
    GrayImage out = img;
    for (auto& v : out.data()) {
        if (uniform01(rng) < level) {
            v = (rng() >> 63) != 0 ? 255 : 0;
        }
    }
    return out;
}

double error_score(const Circle& detected, const Circle& truth, const MetricConfig& m) {
    return m.eta * (std::abs(truth.x0 - detected.x0) + std::abs(truth.y0 - detected.y0)) +
           m.mu * std::abs(truth.r - detected.r);
}

MatchReport match_circles(std::span<const Circle> detected, std::span<const Circle> truth,
                          const MetricConfig& m) {
    if (truth.empty()) {
        throw std::invalid_argument("match_circles: need at least one true circle");
    }
    MatchReport report;
    report.es.assign(truth.size(), m.es_fail);
    report.match.assign(truth.size(), -1);

    std::vector<bool> det_used(detected.size(), false);
    std::vector<bool> truth_used(truth.size(), false);
    const std::size_t rounds = std::min(detected.size(), truth.size());
    for (std::size_t round = 0; round < rounds; ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bt = 0;
        std::size_t bd = 0;
        // Strict < over (truth, detection) scan order implements the tie rule.
        for (std::size_t t = 0; t < truth.size(); ++t) {
            if (truth_used[t]) continue;
            for (std::size_t d = 0; d < detected.size(); ++d) {
                if (det_used[d]) continue;
                const double es = error_score(detected[d], truth[t], m);
                if (es < best) {
                    best = es;
                    bt = t;
                    bd = d;
                }
            }
        }
        truth_used[bt] = true;
        det_used[bd] = true;
        report.es[bt] = best;
        report.match[bt] = static_cast<int>(bd);
    }
    double sum = 0.0;
    for (double e : report.es) sum += e;
    report.me = sum / static_cast<double>(truth.size());
    report.false_positives = detected.size() - rounds;
    return report;
}

double multiple_error(const DetectionResult& result, const GroundTruthScene& scene,
                      const MetricConfig& m) {
    std::vector<Circle> detected;
    detected.reserve(result.circles.size());
    for (const auto& d : result.circles) detected.push_back(d.circle);
    const auto truth = scene.truth();
    return match_circles(detected, truth, m).me;
}

double success_rate(std::span<const double> me_values) {
    if (me_values.empty()) {
        throw std::invalid_argument("success_rate: no trials");
    }
    const auto ok = std::count_if(me_values.begin(), me_values.end(),
                                  [](double me) { return me < 1.0; });
    return 100.0 * static_cast<double>(ok) / static_cast<double>(me_values.size());
}

nlohmann::json truth_to_json(const GroundTruthScene& scene) {
    nlohmann::json circles = nlohmann::json::array();
    for (const auto& t : scene.circles) {
        nlohmann::json c = {{"x", t.circle.x0}, {"y", t.circle.y0}, {"r", t.circle.r}};
        if (t.partial) c["partial"] = true;
        circles.push_back(std::move(c));
    }
    return {{"circles", std::move(circles)}, {"noise", scene.noise_level}};
}

std::vector<TrueCircle> truth_from_json(const nlohmann::json& j) {
    try {
        std::vector<TrueCircle> out;
        for (const auto& c : j.at("circles")) {
            TrueCircle t;
            t.circle = {c.at("x").get<double>(), c.at("y").get<double>(), c.at("r").get<double>()};
            t.partial = c.value("partial", false);
            out.push_back(t);
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("ground-truth JSON: ") + e.what());
    }
}

}  // namespace lacircle
