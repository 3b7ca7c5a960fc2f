#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>

namespace scenetest {

/// Point or displacement in scene units (meters). Y is up.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

std::string to_string(const Vec3& v);

/// Axis-aligned box, closed on every face.
struct Aabb {
  Vec3 min;
  Vec3 max;

  friend bool operator==(const Aabb&, const Aabb&) = default;

  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 extent() const { return max - min; }
  bool contains(const Vec3& p) const;
  Vec3 clamp(const Vec3& p) const;
  bool valid() const;         // min <= max componentwise
  bool non_degenerate() const;  // min < max on every axis
};

struct Sphere {
  Vec3 center;
  double radius = 0.0;

  friend bool operator==(const Sphere&, const Sphere&) = default;
};

/// Collision volume of a scene object. Coordinates are relative to the
/// owning object's position until translated into world space.
struct Collider {
  std::variant<Aabb, Sphere> shape;

  friend bool operator==(const Collider&, const Collider&) = default;

  static Collider box(Vec3 min, Vec3 max) { return Collider{Aabb{min, max}}; }
  static Collider sphere(Vec3 center, double radius) { return Collider{Sphere{center, radius}}; }

  bool is_box() const { return std::holds_alternative<Aabb>(shape); }
  bool valid() const;
  Collider translated(const Vec3& offset) const;
  Aabb bounding_box() const;
  Vec3 center() const;
};

/// Distance along a unit-direction ray to the first point of the collider,
/// 0 when the origin is inside. Empty when missed or beyond max_dist.
std::optional<double> ray_distance(const Collider& c, const Vec3& origin, const Vec3& dir,
                                   double max_dist);

bool contains_point(const Collider& c, const Vec3& p);

/// Closed test: touching counts as overlap.
bool overlaps_sphere(const Collider& c, const Vec3& center, double radius);

bool overlaps(const Collider& a, const Collider& b);

/// Euclidean gap between two colliders; 0 when touching or overlapping.
double separation(const Collider& a, const Collider& b);

/// True when a, shrunk by tolerance on every side, still overlaps b.
bool interpenetrates(const Collider& a, const Collider& b, double tolerance);

/// Sweep `moving` along `displacement` (t in [0,1]) against a static obstacle.
/// Returns the last parameter before first contact, or empty if the sweep never
/// touches the obstacle. Obstacles already overlapping at t = 0 are ignored.
std::optional<double> first_contact(const Collider& moving, const Vec3& displacement,
                                    const Collider& obstacle);

/// Largest t in [0,1] that keeps `box` translated by t * displacement inside
/// `bounds` on every axis it is currently inside of.
double bounds_limit(const Aabb& box, const Vec3& displacement, const Aabb& bounds);

}  // namespace scenetest
