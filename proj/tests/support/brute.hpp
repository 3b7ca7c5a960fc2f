#pragma once

// Reference implementations used as test oracles. They deliberately take a
// different route from the library: closest-approach for ray/sphere, face
// planes for ray/box, rounded-box decomposition for sphere/box.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scenetest/harness.hpp"
#include "scenetest/oracle.hpp"
#include "scenetest/scene.hpp"

namespace brute {

using scenetest::Aabb;
using scenetest::Collider;
using scenetest::Scene;
using scenetest::Vec3;

std::optional<double> ray_sphere(const Vec3& center, double radius, const Vec3& origin, const Vec3& dir);
std::optional<double> ray_box(const Aabb& box, const Vec3& origin, const Vec3& dir);
std::optional<double> ray_collider(const Collider& world, const Vec3& origin, const Vec3& dir);

bool sphere_box(const Aabb& box, const Vec3& center, double radius);
bool sphere_collider(const Collider& world, const Vec3& center, double radius);

struct BruteHit {
  std::string id;
  double distance = 0.0;
};

/// Nearest hit over every collider, ties broken by id.
std::optional<BruteHit> raycast(const Scene& scene, const Vec3& origin, const Vec3& dir);
std::vector<std::string> overlap(const Scene& scene, const Vec3& center, double radius);

/// Interactive objects that are the first hit of some grid ray from origin.
std::set<std::string> visible_interactive(const Scene& scene, const Vec3& origin, double resolution_deg);

/// Grid directions computed independently of the scanner.
std::vector<Vec3> grid(double resolution_deg);

double coverage(const std::vector<std::string>& catalog, const std::vector<scenetest::CoverageEvent>& events);

/// (category, scope, id) -> count
std::map<std::tuple<int, int, std::string>, std::size_t> tally(const std::vector<scenetest::Failure>& failures);

}  // namespace brute
