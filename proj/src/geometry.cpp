#include "scenetest/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <sstream>

namespace scenetest {

namespace {

constexpr int kSearchIterations = 200;

Vec3 closest_point(const Aabb& box, const Vec3& p) { return box.clamp(p); }

double squared_distance(const Aabb& box, const Vec3& p) {
  const Vec3 d = p - closest_point(box, p);
  return dot(d, d);
}

std::optional<double> ray_box(const Aabb& box, const Vec3& origin, const Vec3& dir) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double o = origin[axis];
    const double d = dir[axis];
    if (d == 0.0) {
      if (o < box.min[axis] || o > box.max[axis]) return std::nullopt;
      continue;
    }
    double t0 = (box.min[axis] - o) / d;
    double t1 = (box.max[axis] - o) / d;
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
  }
  if (t_far < std::max(t_near, 0.0)) return std::nullopt;
  return std::max(t_near, 0.0);
}

std::optional<double> ray_sphere(const Sphere& s, const Vec3& origin, const Vec3& dir) {
  const Vec3 oc = origin - s.center;
  const double c = dot(oc, oc) - s.radius * s.radius;
  if (c <= 0.0) return 0.0;
  const double b = dot(oc, dir);
  if (b > 0.0) return std::nullopt;  // outside and pointing away
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  return -b - std::sqrt(disc);
}

double box_gap(const Aabb& a, const Aabb& b) {
  double sum = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double g = std::max({0.0, b.min[axis] - a.max[axis], a.min[axis] - b.max[axis]});
    sum += g * g;
  }
  return std::sqrt(sum);
}

bool boxes_overlap(const Aabb& a, const Aabb& b) {
  for (int axis = 0; axis < 3; ++axis) {
    if (a.max[axis] < b.min[axis] || b.max[axis] < a.min[axis]) return false;
  }
  return true;
}

Aabb swept_box(const Aabb& box, const Vec3& displacement) {
  Aabb out = box;
  for (int axis = 0; axis < 3; ++axis) {
    if (displacement[axis] > 0.0) out.max[axis] += displacement[axis];
    else out.min[axis] += displacement[axis];
  }
  return out;
}

}  // namespace

std::string to_string(const Vec3& v) {
  std::ostringstream out;
  out << '(' << v.x << ", " << v.y << ", " << v.z << ')';
  return out.str();
}

bool Aabb::contains(const Vec3& p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
         p.z <= max.z;
}

Vec3 Aabb::clamp(const Vec3& p) const {
  return {std::clamp(p.x, min.x, max.x), std::clamp(p.y, min.y, max.y),
          std::clamp(p.z, min.z, max.z)};
}

bool Aabb::valid() const { return min.x <= max.x && min.y <= max.y && min.z <= max.z; }

bool Aabb::non_degenerate() const { return min.x < max.x && min.y < max.y && min.z < max.z; }

bool Collider::valid() const {
  if (const auto* box = std::get_if<Aabb>(&shape)) {
    return box->min.finite() && box->max.finite() && box->valid();
  }
  const auto& s = std::get<Sphere>(shape);
  return s.center.finite() && std::isfinite(s.radius) && s.radius > 0.0;
}

Collider Collider::translated(const Vec3& offset) const {
  if (const auto* box = std::get_if<Aabb>(&shape)) {
    return Collider::box(box->min + offset, box->max + offset);
  }
  const auto& s = std::get<Sphere>(shape);
  return Collider::sphere(s.center + offset, s.radius);
}

Aabb Collider::bounding_box() const {
  if (const auto* box = std::get_if<Aabb>(&shape)) return *box;
  const auto& s = std::get<Sphere>(shape);
  const Vec3 r{s.radius, s.radius, s.radius};
  return {s.center - r, s.center + r};
}

Vec3 Collider::center() const {
  if (const auto* box = std::get_if<Aabb>(&shape)) return box->center();
  return std::get<Sphere>(shape).center;
}

std::optional<double> ray_distance(const Collider& c, const Vec3& origin, const Vec3& dir,
                                   double max_dist) {
  const auto t = std::visit(
      [&](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Aabb>) {
          return ray_box(s, origin, dir);
        } else {
          return ray_sphere(s, origin, dir);
        }
      },
      c.shape);
  if (!t || *t > max_dist) return std::nullopt;
  return t;
}

bool contains_point(const Collider& c, const Vec3& p) {
  if (const auto* box = std::get_if<Aabb>(&c.shape)) return box->contains(p);
  const auto& s = std::get<Sphere>(c.shape);
  const Vec3 d = p - s.center;
  return dot(d, d) <= s.radius * s.radius;
}

bool overlaps_sphere(const Collider& c, const Vec3& center, double radius) {
  if (const auto* box = std::get_if<Aabb>(&c.shape)) {
    return squared_distance(*box, center) <= radius * radius;
  }
  const auto& s = std::get<Sphere>(c.shape);
  const Vec3 d = center - s.center;
  const double r = s.radius + radius;
  return dot(d, d) <= r * r;
}

bool overlaps(const Collider& a, const Collider& b) {
  if (const auto* sb = std::get_if<Sphere>(&b.shape)) return overlaps_sphere(a, sb->center, sb->radius);
  if (const auto* sa = std::get_if<Sphere>(&a.shape)) return overlaps_sphere(b, sa->center, sa->radius);
  return boxes_overlap(std::get<Aabb>(a.shape), std::get<Aabb>(b.shape));
}

double separation(const Collider& a, const Collider& b) {
  const auto* sa = std::get_if<Sphere>(&a.shape);
  const auto* sb = std::get_if<Sphere>(&b.shape);
  if (sa && sb) return std::max(0.0, distance(sa->center, sb->center) - sa->radius - sb->radius);
  if (sa) return std::max(0.0, std::sqrt(squared_distance(std::get<Aabb>(b.shape), sa->center)) - sa->radius);
  if (sb) return std::max(0.0, std::sqrt(squared_distance(std::get<Aabb>(a.shape), sb->center)) - sb->radius);
  return box_gap(std::get<Aabb>(a.shape), std::get<Aabb>(b.shape));
}

bool interpenetrates(const Collider& a, const Collider& b, double tolerance) {
  Collider shrunk = a;
  if (auto* box = std::get_if<Aabb>(&shrunk.shape)) {
    for (int axis = 0; axis < 3; ++axis) {
      const double lo = box->min[axis] + tolerance;
      const double hi = box->max[axis] - tolerance;
      if (lo > hi) {
        box->min[axis] = box->max[axis] = 0.5 * (box->min[axis] + box->max[axis]);
      } else {
        box->min[axis] = lo;
        box->max[axis] = hi;
      }
    }
  } else {
    auto& s = std::get<Sphere>(shrunk.shape);
    s.radius = std::max(0.0, s.radius - tolerance);
  }
  return overlaps(shrunk, b);
}

std::optional<double> first_contact(const Collider& moving, const Vec3& displacement,
                                    const Collider& obstacle) {
  if (!boxes_overlap(swept_box(moving.bounding_box(), displacement), obstacle.bounding_box())) {
    return std::nullopt;
  }
  const auto gap = [&](double t) { return separation(moving.translated(displacement * t), obstacle); };
  if (gap(0.0) <= 0.0) return std::nullopt;

  // The gap is convex in t, so any zero found bounds a single first crossing.
  std::optional<double> touching;
  if (gap(1.0) <= 0.0) {
    touching = 1.0;
  } else {
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < kSearchIterations && !touching; ++i) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      const double g1 = gap(m1);
      const double g2 = gap(m2);
      if (g1 <= 0.0) touching = m1;
      else if (g2 <= 0.0) touching = m2;
      else if (g1 < g2) hi = m2;
      else lo = m1;
    }
  }
  if (!touching) return std::nullopt;

  double lo = 0.0;
  double hi = *touching;
  for (int i = 0; i < kSearchIterations; ++i) {
    const double mid = lo + (hi - lo) * 0.5;
    if (mid <= lo || mid >= hi) break;
    if (gap(mid) <= 0.0) hi = mid;
    else lo = mid;
  }
  return lo;
}

double bounds_limit(const Aabb& box, const Vec3& displacement, const Aabb& bounds) {
  double t = 1.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double d = displacement[axis];
    if (d > 0.0 && box.max[axis] <= bounds.max[axis]) {
      t = std::min(t, (bounds.max[axis] - box.max[axis]) / d);
    } else if (d < 0.0 && box.min[axis] >= bounds.min[axis]) {
      t = std::min(t, (bounds.min[axis] - box.min[axis]) / d);
    }
  }
  return std::max(t, 0.0);
}

}  // namespace scenetest
