#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "scenetest/scene.hpp"

namespace scenetest {

/// Parses and validates a scene file. Unknown keys are rejected. Throws
/// ParseError for malformed text and ValidationError for domain violations
/// (degenerate bounds, duplicate ids, avatar outside bounds, bad colliders).
/// Dangling refs are kept as-is. The result's digest is the SHA-256 of the
/// canonicalized file.
Scene load_scene(const std::string& text);
Scene load_scene_file(const std::string& path);

/// Scene-file form of a scene's static description (clock and ephemeral
/// effects are not part of the file format).
nlohmann::json scene_to_json(const Scene& scene);

}  // namespace scenetest
