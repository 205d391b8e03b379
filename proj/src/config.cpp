#include "lacircle/config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <type_traits>

#include "lacircle/errors.hpp"

namespace lacircle {

namespace {

template <typename T>
T get_as(const nlohmann::json& flat, const std::string& key) {
    try {
        const auto& v = flat.at(key);
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be a boolean");
        } else if constexpr (std::is_arithmetic_v<T>) {
            if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
            if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0)) {
                    throw ConfigError("config key '" + key + "' must be a non-negative integer");
                }
            }
        }
        return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

void require_object(const nlohmann::json& j, const char* what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

}  // namespace

const std::vector<std::string>& detector_config_keys() {
    static const std::vector<std::string> keys = {
        "fraction",    "r-min",       "r-max",          "sensitivity",       "theta",
        "k-max",       "k-cap",       "p-stop",         "pr-divisor",        "action-cap",
        "max-clip-fraction",          "beta-accept",    "beta-min-solution", "blur-sigma",
        "low-thresh",  "high-thresh", "eta",            "mu",                "es-fail",
        "seed"};
    return keys;
}

void apply_detector_json(const nlohmann::json& flat, DetectorConfig& cfg, MetricConfig& metric) {
    require_object(flat, "detector config");
    const auto& keys = detector_config_keys();
    for (const auto& [key, value] : flat.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    auto num = [&](const char* key, double& target) {
        if (flat.contains(key)) target = get_as<double>(flat, key);
    };
    auto count = [&](const char* key, std::size_t& target) {
        if (flat.contains(key)) target = get_as<std::size_t>(flat, key);
    };
    num("fraction", cfg.fraction);
    num("r-min", cfg.r_min);
    num("r-max", cfg.r_max);
    num("sensitivity", cfg.sensitivity);
    num("theta", cfg.theta);
    count("k-cap", cfg.k_cap);
    num("p-stop", cfg.p_stop);
    num("pr-divisor", cfg.pr_divisor);
    count("action-cap", cfg.action_cap);
    num("max-clip-fraction", cfg.max_clip_fraction);
    num("beta-accept", cfg.beta_accept);
    num("blur-sigma", cfg.edges.blur_sigma);
    num("low-thresh", cfg.edges.low_thresh);
    num("high-thresh", cfg.edges.high_thresh);
    num("eta", metric.eta);
    num("mu", metric.mu);
    num("es-fail", metric.es_fail);
    if (flat.contains("k-max")) {
        cfg.k_max = flat["k-max"].is_null() ? std::nullopt
                                            : std::optional(get_as<std::size_t>(flat, "k-max"));
    }
    if (flat.contains("beta-min-solution")) {
        cfg.beta_min_solution = flat["beta-min-solution"].is_null()
                                    ? std::nullopt
                                    : std::optional(get_as<double>(flat, "beta-min-solution"));
    }
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
    const auto bytes = detail::read_file(path);
    auto j = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
    if (j.is_discarded()) {
        throw ConfigError(path.string() + ": malformed JSON");
    }
    return j;
}

void apply_scene_json(const nlohmann::json& flat, SceneSpec& spec) {
    require_object(flat, "scene");
    static const std::vector<std::string> keys = {
        "width", "height",     "n-circles",  "r-lo",  "r-hi",   "partial", "min-separation",
        "margin", "outline",   "stroke",     "foreground", "background", "noise", "seed",
        "circles"};
    for (const auto& [key, value] : flat.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError("unknown scene key '" + key + "'");
        }
    }
    auto integer = [&](const char* key, int& target) {
        if (flat.contains(key)) target = get_as<int>(flat, key);
    };
    auto num = [&](const char* key, double& target) {
        if (flat.contains(key)) target = get_as<double>(flat, key);
    };
    integer("width", spec.width);
    integer("height", spec.height);
    integer("n-circles", spec.n_circles);
    integer("r-lo", spec.r_lo);
    integer("r-hi", spec.r_hi);
    num("partial", spec.partial_fraction);
    num("min-separation", spec.min_separation);
    integer("margin", spec.margin);
    if (flat.contains("outline")) spec.filled = !get_as<bool>(flat, "outline");
    num("stroke", spec.stroke);
    if (flat.contains("foreground")) {
        spec.foreground = static_cast<std::uint8_t>(std::clamp(get_as<int>(flat, "foreground"), 0, 255));
    }
    if (flat.contains("background")) {
        spec.background = static_cast<std::uint8_t>(std::clamp(get_as<int>(flat, "background"), 0, 255));
    }
    num("noise", spec.noise);
    if (flat.contains("seed")) spec.seed = get_as<std::uint64_t>(flat, "seed");
    if (flat.contains("circles")) {
        spec.circles = truth_from_json(flat);
    }
}

}  // namespace lacircle
