#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lacircle/detector.hpp"
#include "lacircle/synth.hpp"

namespace lacircle {

/// Flat keys accepted in detector config objects; they mirror the CLI flag
/// names without the leading dashes ("r-min", "theta", ...).
[[nodiscard]] const std::vector<std::string>& detector_config_keys();

/// Overlays the keys present in `flat` onto cfg / metric. Unknown keys and
/// wrongly typed values throw ConfigError. "seed" is ignored here.
void apply_detector_json(const nlohmann::json& flat, DetectorConfig& cfg, MetricConfig& metric);

/// Reads a JSON object from disk. Throws IoError or ConfigError.
[[nodiscard]] nlohmann::json load_json_file(const std::filesystem::path& path);

/// Scene keys: width, height, n-circles, r-lo, r-hi, partial, min-separation,
/// margin, outline, stroke, foreground, background, noise, seed and an
/// optional explicit "circles" list of {x, y, r[, partial]}.
void apply_scene_json(const nlohmann::json& flat, SceneSpec& spec);

}  // namespace lacircle
