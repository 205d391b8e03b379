#include "lacircle/detector.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

#include "lacircle/errors.hpp"

namespace lacircle {

void validate(const DetectorConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (!(cfg.fraction > 0.0 && cfg.fraction <= 1.0)) fail("fraction must lie in (0, 1]");
    if (!(cfg.r_min >= 1.0)) fail("r-min must be >= 1");
    if (!(cfg.r_max > cfg.r_min)) fail("r-max must exceed r-min");
    if (!(cfg.sensitivity > 0.0)) fail("sensitivity must be > 0");
    if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) fail("theta must lie in (0, 1)");
    if (!(cfg.p_stop > 0.0 && cfg.p_stop <= 1.0)) fail("p-stop must lie in (0, 1]");
    if (!(cfg.pr_divisor > 1.0)) fail("pr-divisor must be > 1");
    if (cfg.action_cap < 1) fail("action-cap must be >= 1");
    if (!(cfg.max_clip_fraction >= 0.0 && cfg.max_clip_fraction <= 1.0)) {
        fail("max-clip-fraction must lie in [0, 1]");
    }
    if (!(cfg.beta_accept >= 0.0 && cfg.beta_accept <= 1.0)) fail("beta-accept must lie in [0, 1]");
    if (cfg.beta_min_solution &&
        !(*cfg.beta_min_solution >= 0.0 && *cfg.beta_min_solution <= 1.0)) {
        fail("beta-min-solution must lie in [0, 1]");
    }
    if (!(cfg.edges.blur_sigma >= 0.0)) fail("blur-sigma must be >= 0");
    if (!(cfg.edges.low_thresh >= 0.0 && cfg.edges.low_thresh <= cfg.edges.high_thresh)) {
        fail("need 0 <= low-thresh <= high-thresh");
    }
}

std::vector<DetectedCircle> extract_circles(const ActionSet& actions, const ProbabilityVector& pv,
                                            std::span<const double> betas, double es_th,
                                            double pr_divisor, double beta_accept) {
    if (pv.size() == 0 || pv.size() != actions.size() || betas.size() != actions.size()) {
        throw std::invalid_argument("extract_circles: actions, probabilities and betas must align");
    }
    if (!(es_th > 0.0)) throw std::invalid_argument("extract_circles: es_th must be > 0");
    if (!(pr_divisor > 1.0)) throw std::invalid_argument("extract_circles: pr_divisor must be > 1");

    std::vector<std::size_t> order(pv.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pv.p[a] > pv.p[b]; });

    const double pr_high = pv.p[order.front()];
    const double pr_th = pr_high / pr_divisor;

    std::vector<DetectedCircle> accepted;
    for (std::size_t idx : order) {
        const double prob = pv.p[idx];
        if (prob < pr_th) break;
        if (betas[idx] < beta_accept) continue;
        const Circle& c = actions.actions[idx].circle;
        const bool distinct = std::all_of(accepted.begin(), accepted.end(), [&](const auto& d) {
            return distinctiveness(c, d.circle) > es_th;
        });
        if (!distinct) continue;
        DetectedCircle d;
        d.circle = c;
        d.probability = prob;
        d.beta = betas[idx];
        d.rank = static_cast<int>(accepted.size()) + 1;
        d.action = idx;
        accepted.push_back(d);
    }
    return accepted;
}

DetectionResult detect(const EdgeMap& edges, const DetectorConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();

    Rng rng(seed);
    auto sampled = sample_edge_points(edges, cfg.fraction, rng);
    sampled.source_seed = seed;
    const auto actions =
        build_action_set(sampled, cfg.action_config(), edges.width(), edges.height(), rng);
    const auto learning = run_learning(actions, edges, cfg.learning_config(seed), rng);

    DetectionResult result;
    result.circles = extract_circles(actions, learning.probabilities, learning.betas,
                                     cfg.es_threshold(), cfg.pr_divisor, cfg.beta_accept);
    result.n_actions = actions.size();
    result.iterations = learning.iterations;
    result.seed = seed;
    result.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

DetectionResult detect(const GrayImage& img, const DetectorConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    if (img.empty()) throw std::invalid_argument("detect: empty image");
    const auto start = std::chrono::steady_clock::now();
    const auto edges = detect_edges(img, cfg.edges);
    auto result = detect(edges, cfg, seed);
    result.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::size_t count_contract_violations(const DetectionResult& result, double es_th,
                                      double pr_divisor) {
    std::size_t violations = 0;
    const auto& cs = result.circles;
    double pr_high = 0.0;
    for (const auto& c : cs) pr_high = std::max(pr_high, c.probability);
    for (std::size_t a = 0; a < cs.size(); ++a) {
        if (cs[a].probability < pr_high / pr_divisor) ++violations;
        for (std::size_t b = a + 1; b < cs.size(); ++b) {
            if (!(distinctiveness(cs[a].circle, cs[b].circle) > es_th)) ++violations;
        }
    }
    return violations;
}

nlohmann::json to_json(const DetectionResult& result, bool include_timing) {
    nlohmann::json circles = nlohmann::json::array();
    for (const auto& c : result.circles) {
        circles.push_back({{"x0", c.circle.x0},
                           {"y0", c.circle.y0},
                           {"r", c.circle.r},
                           {"probability", c.probability},
                           {"beta", c.beta},
                           {"rank", c.rank}});
    }
    nlohmann::json j = {{"circles", std::move(circles)},
                        {"n_actions", result.n_actions},
                        {"iterations", result.iterations},
                        {"seed", result.seed}};
    j["elapsed_s"] = include_timing ? nlohmann::json(result.elapsed_s) : nlohmann::json(nullptr);
    return j;
}

DetectionResult detection_from_json(const nlohmann::json& j) {
    try {
        DetectionResult r;
        for (const auto& c : j.at("circles")) {
            DetectedCircle d;
            d.circle = {c.at("x0").get<double>(), c.at("y0").get<double>(),
                        c.at("r").get<double>()};
            d.probability = c.at("probability").get<double>();
            d.beta = c.at("beta").get<double>();
            d.rank = c.at("rank").get<int>();
            r.circles.push_back(d);
        }
        r.n_actions = j.at("n_actions").get<std::size_t>();
        r.iterations = j.at("iterations").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        const auto& elapsed = j.at("elapsed_s");
        r.elapsed_s = elapsed.is_null() ? 0.0 : elapsed.get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("detection JSON: ") + e.what());
    }
}

RgbImage render_overlay(const GrayImage& img, std::span<const DetectedCircle> circles,
                        Rgb marker) {
    RgbImage out(img);
    for (const auto& d : circles) {
        if (!(d.circle.r >= 1.0)) continue;
        for (const Point& p : midpoint_circle(round_pixel(d.circle.x0), round_pixel(d.circle.y0),
                                              round_pixel(d.circle.r))) {
            if (img.contains(p.x, p.y)) out.at(p.x, p.y) = marker;
        }
    }
    return out;
}

}  // namespace lacircle
