#pragma once

// Hand-rolled generators for property tests. Each takes a Gen so a failing
// case can be reproduced from its seed alone.

#include <random>
#include <string>
#include <vector>

#include "scenetest/harness.hpp"
#include "scenetest/oracle.hpp"
#include "scenetest/petri.hpp"
#include "scenetest/scene.hpp"

namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }
  scenetest::Vec3 point(const scenetest::Aabb& box);
  scenetest::Vec3 unit();
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Local-space collider: a sphere centred at the origin or a box around it.
scenetest::Collider collider(Gen& g, double max_size);

/// Scene with n objects anywhere in bounds, colliders may overlap.
scenetest::Scene cluttered_scene(Gen& g, int n);

/// Open scene for scanner tests: up to n interactive objects around origin,
/// pruned until each one is the first hit of some grid ray.
scenetest::Scene open_scene(Gen& g, int n, const scenetest::Vec3& origin, double resolution_deg);

/// Query point: half the time near a random object, otherwise anywhere in box.
scenetest::Vec3 probe_point(Gen& g, const scenetest::Scene& scene, const scenetest::Aabb& box);
/// Unit direction: half the time aimed near a random object from origin.
scenetest::Vec3 probe_direction(Gen& g, const scenetest::Scene& scene, const scenetest::Vec3& origin);

std::vector<scenetest::Failure> failures(Gen& g, int n, int distinct_sites);

std::vector<std::string> catalog_ids(Gen& g, int n);
std::vector<scenetest::CoverageEvent> coverage_events(Gen& g, const std::vector<std::string>& ids, int n);

/// Cycle P0 -> P1 -> ... -> P(n-1) -> P0 with every transition bound to `sensor`.
scenetest::NetSpec cycle_net(int n, const std::string& sensor = "any", const std::string& effector = "in_bounds");

}  // namespace gen
