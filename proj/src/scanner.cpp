#include "scenetest/scanner.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace scenetest {

namespace {

constexpr double kGridSlack = 1e-9;

void check_definition(const Scene& scene, const SceneObject& object, std::size_t origin_index,
                      ObjectCatalog& catalog) {
  for (const auto& ref : object.refs) {
    if (scene.objects.count(ref)) continue;
    catalog.scan_failures.push_back({category_of(FaultKind::object_not_found),
                                     {LocationScope::object, object.id},
                                     "'" + object.id + "' references missing object '" + ref + "'",
                                     "scan",
                                     FaultKind::object_not_found});
  }
  for (std::size_t i = 0; i < object.hooks.size(); ++i) {
    const auto& hook = object.hooks[i];
    if (hook.trigger != HookTrigger::on_detect) continue;
    catalog.hooks_fired.push_back({object.id, hook.trigger, i});
    if (const auto* fault = std::get_if<RaiseFault>(&hook.reaction)) {
      catalog.scan_failures.push_back({category_of(fault->kind),
                                       {LocationScope::scanner, std::to_string(origin_index)},
                                       std::string(to_string(fault->kind)) + " raised by '" +
                                           object.id + "' on detection",
                                       "scan",
                                       fault->kind});
      break;  // a fault aborts the remaining hooks of this detection
    }
  }
}

}  // namespace

void validate_scan_config(const ScanConfig& config) {
  if (!std::isfinite(config.angular_resolution) || config.angular_resolution <= 0.0) {
    throw ConfigError("scan angular_resolution must be > 0");
  }
  if (!std::isfinite(config.window) || config.window <= 0.0) throw ConfigError("scan window must be > 0");
  if (config.rays_per_window && *config.rays_per_window == 0) {
    throw ConfigError("scan rays_per_window must be positive");
  }
  for (const auto& o : config.origins) {
    if (!o.finite()) throw ConfigError("scan origins must be finite");
  }
}

std::vector<Vec3> scan_directions(double res) {
  if (!std::isfinite(res) || res <= 0.0) throw std::invalid_argument("angular resolution must be > 0");
  constexpr double deg = std::numbers::pi / 180.0;
  std::vector<Vec3> dirs;
  for (std::size_t i = 0;; ++i) {
    const double elevation = -90.0 + double(i) * res;
    if (elevation > 90.0 + kGridSlack) break;
    const double e = std::min(elevation, 90.0) * deg;
    for (std::size_t j = 0;; ++j) {
      const double azimuth = double(j) * res;
      if (azimuth >= 360.0 - kGridSlack) break;
      const double a = azimuth * deg;
      Vec3 d{std::cos(e) * std::cos(a), std::sin(e), std::cos(e) * std::sin(a)};
      dirs.push_back(d / norm(d));
    }
  }
  return dirs;
}

ObjectCatalog scan(const Scene& scene, const ScanConfig& config) {
  validate_scan_config(config);
  const auto dirs = scan_directions(config.angular_resolution);
  std::vector<Vec3> origins = config.origins;
  if (origins.empty()) origins.push_back(scene.avatar.position);

  const std::uint64_t per_window = config.rays_per_window.value_or(dirs.size());
  const double ray_cost = config.window / double(per_window);
  const std::uint64_t total = std::uint64_t(dirs.size()) * origins.size();
  constexpr double kMaxDist = std::numeric_limits<double>::max();

  ObjectCatalog catalog;
  std::size_t found_in_window = 0;
  std::uint64_t in_window = 0;
  for (std::uint64_t r = 0; r < total; ++r) {
    const std::size_t origin_index = r / dirs.size();
    const auto hit = raycast(scene, origins[origin_index], dirs[r % dirs.size()], kMaxDist);
    ++catalog.rays_cast;
    ++in_window;
    if (hit) {
      const SceneObject& object = scene.objects.at(hit->id);
      if (!object.scenery() && !catalog.contains(object.id)) {
        catalog.entries.emplace(object.id, CatalogEntry{object.id, object.position, object.interactive,
                                                        catalog.history.size()});
        ++found_in_window;
        check_definition(scene, object, origin_index, catalog);
      }
    }
    if (in_window == per_window || r + 1 == total) {
      catalog.history.push_back(found_in_window);
      const bool empty_window = found_in_window == 0;
      found_in_window = 0;
      in_window = 0;
      if (empty_window) break;
    }
  }
  if (total == 0) catalog.history.push_back(0);
  catalog.duration = double(catalog.rays_cast) * ray_cost;
  return catalog;
}

std::size_t detection_rate(std::span<const std::size_t> history) {
  if (history.empty()) throw std::invalid_argument("detection_rate requires a non-empty history");
  return history.back();
}

}  // namespace scenetest
