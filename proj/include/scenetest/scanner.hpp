#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scenetest/oracle.hpp"
#include "scenetest/scene.hpp"

namespace scenetest {

struct ScanConfig {
  double angular_resolution = 5.0;               // degrees
  std::optional<std::uint64_t> rays_per_window;  // default: one origin's full sweep
  double window = 60.0;                          // simulated seconds
  std::vector<Vec3> origins;                     // empty: the avatar position

  friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

struct CatalogEntry {
  std::string id;
  Vec3 position;  // first-seen position
  InteractiveSet interactive;
  std::size_t window = 0;  // index of the window that found it

  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

struct ObjectCatalog {
  std::map<std::string, CatalogEntry> entries;
  std::vector<Failure> scan_failures;
  std::vector<std::size_t> history;  // new objects per window
  std::uint64_t rays_cast = 0;
  double duration = 0.0;  // simulated seconds spent scanning
  std::vector<HookSite> hooks_fired;

  friend bool operator==(const ObjectCatalog&, const ObjectCatalog&) = default;

  bool contains(const std::string& id) const { return entries.count(id) != 0; }
  std::size_t size() const { return entries.size(); }
};

/// Unit directions of the sweep grid, elevation-major from -90 to +90, azimuth
/// in [0, 360). Throws std::invalid_argument for a non-positive resolution.
std::vector<Vec3> scan_directions(double angular_resolution);

/// Raycast sweep from each origin. Stops after the first window with no new
/// objects or when the grid is exhausted. Pure: the scene is not modified.
ObjectCatalog scan(const Scene& scene, const ScanConfig& config);

/// New-object count of the most recent window. Throws std::invalid_argument
/// on an empty history.
std::size_t detection_rate(std::span<const std::size_t> history);

void validate_scan_config(const ScanConfig& config);

}  // namespace scenetest
