#include "scenetest/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "enum_names.hpp"

namespace scenetest {

namespace {

constexpr double kUnitNormTolerance = 1e-9;
constexpr double kRelocateMargin = 1e-3;

constexpr std::pair<ObjectState, std::string_view> kStateNames[] = {
    {ObjectState::idle, "idle"},
    {ObjectState::selected, "selected"},
    {ObjectState::grabbed, "grabbed"},
    {ObjectState::moving, "moving"},
};

constexpr std::pair<HookTrigger, std::string_view> kTriggerNames[] = {
    {HookTrigger::on_detect, "on_detect"},       {HookTrigger::on_select, "on_select"},
    {HookTrigger::on_grab, "on_grab"},           {HookTrigger::on_move, "on_move"},
    {HookTrigger::on_collide, "on_collide"},     {HookTrigger::on_teleport_near, "on_teleport_near"},
};

constexpr std::pair<FaultKind, std::string_view> kFaultNames[] = {
    {FaultKind::null_reference, "null_reference"},
    {FaultKind::object_not_found, "object_not_found"},
    {FaultKind::dependency_error, "dependency_error"},
};

constexpr std::pair<OutOfBoundsHandling, std::string_view> kOutOfBoundsNames[] = {
    {OutOfBoundsHandling::clamp, "clamp"},
    {OutOfBoundsHandling::reject, "reject"},
    {OutOfBoundsHandling::accept, "accept"},
};

constexpr std::pair<IntoObjectHandling, std::string_view> kIntoObjectNames[] = {
    {IntoObjectHandling::reject, "reject"},
    {IntoObjectHandling::relocate, "relocate"},
    {IntoObjectHandling::accept, "accept"},
};

constexpr std::pair<ReleaseHandling, std::string_view> kReleaseNames[] = {
    {ReleaseHandling::keep, "keep"},
    {ReleaseHandling::snap_back, "snap_back"},
};

constexpr std::pair<TeleportResolution, std::string_view> kResolutionNames[] = {
    {TeleportResolution::none, "none"},         {TeleportResolution::applied, "applied"},
    {TeleportResolution::clamped, "clamped"},   {TeleportResolution::rejected, "rejected"},
    {TeleportResolution::relocated, "relocated"},
};

constexpr std::pair<OutcomeStatus, std::string_view> kOutcomeNames[] = {
    {OutcomeStatus::applied, "applied"},     {OutcomeStatus::clamped, "clamped"},
    {OutcomeStatus::rejected, "rejected"},   {OutcomeStatus::relocated, "relocated"},
    {OutcomeStatus::illegal, "illegal"},     {OutcomeStatus::fault, "fault"},
};

InteractionKind base_kind(InteractionKind kind) {
  return is_teleport(kind) ? InteractionKind::teleport : kind;
}

SceneObject& require_target(Scene& scene, const InteractionEvent& event) {
  if (!event.target) {
    throw IllegalEventError(std::string(to_string(event.kind)) + " event without target");
  }
  const auto it = scene.objects.find(*event.target);
  if (it == scene.objects.end()) {
    throw IllegalEventError("unknown target object '" + *event.target + "'");
  }
  return it->second;
}

Vec3 require_destination(const InteractionEvent& event) {
  if (!event.params.destination || !event.params.destination->finite()) {
    throw IllegalEventError(std::string(to_string(event.kind)) + " event without finite destination");
  }
  return *event.params.destination;
}

void release_held(Scene& scene) {
  if (!scene.avatar.held_object) return;
  const auto it = scene.objects.find(*scene.avatar.held_object);
  if (it != scene.objects.end() && it->second.state == ObjectState::grabbed) {
    it->second.state = ObjectState::idle;
  }
  scene.avatar.held_object.reset();
}

// Keeps the held-object invariant: grabbed <=> held by the avatar.
void set_object_state(Scene& scene, SceneObject& object, ObjectState state) {
  const bool held = scene.avatar.held_object == object.id;
  if (state == ObjectState::grabbed && !held) {
    release_held(scene);
    scene.avatar.held_object = object.id;
  } else if (state != ObjectState::grabbed && held) {
    scene.avatar.held_object.reset();
  }
  object.state = state;
}

void fire_hooks(Scene& scene, const std::string& object_id, HookTrigger trigger) {
  auto& object = scene.objects.at(object_id);
  for (std::size_t i = 0; i < object.hooks.size(); ++i) {
    if (object.hooks[i].trigger != trigger) continue;
    HookSite site{object_id, trigger, i};
    scene.hooks_fired.push_back(site);
    const HookReaction reaction = object.hooks[i].reaction;
    if (const auto* s = std::get_if<SetState>(&reaction)) {
      set_object_state(scene, scene.objects.at(object_id), s->state);
    } else if (const auto* m = std::get_if<EmitMarker>(&reaction)) {
      scene.markers.push_back(m->label);
    } else {
      throw FaultError(std::get<RaiseFault>(reaction).kind, std::move(site));
    }
  }
}

bool usable_position(const Scene& scene, const Vec3& p) {
  return scene.bounds.contains(p) && !collider_containing(scene, p);
}

std::optional<Vec3> relocate_outside(const Scene& scene, const Collider& collider, const Vec3& p) {
  Vec3 out = p;
  if (const auto* s = std::get_if<Sphere>(&collider.shape)) {
    Vec3 dir = p - s->center;
    const double len = norm(dir);
    dir = len > 0.0 ? dir / len : Vec3{0.0, 1.0, 0.0};
    out = s->center + dir * (s->radius + kRelocateMargin);
  } else {
    const auto& box = std::get<Aabb>(collider.shape);
    int best_axis = 0;
    bool to_max = false;
    double best = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 3; ++axis) {
      const double to_min_face = p[axis] - box.min[axis];
      const double to_max_face = box.max[axis] - p[axis];
      if (to_min_face < best) { best = to_min_face; best_axis = axis; to_max = false; }
      if (to_max_face < best) { best = to_max_face; best_axis = axis; to_max = true; }
    }
    out[best_axis] = to_max ? box.max[best_axis] + kRelocateMargin : box.min[best_axis] - kRelocateMargin;
  }
  if (!usable_position(scene, out)) return std::nullopt;
  return out;
}

void apply_teleport(Scene& scene, const InteractionEvent& event) {
  const Vec3 dest = require_destination(event);
  Vec3 landing = dest;
  TeleportResolution resolution = TeleportResolution::applied;

  if (!scene.bounds.contains(dest)) {
    switch (scene.behavior.out_of_bounds) {
      case OutOfBoundsHandling::clamp:
        landing = scene.bounds.clamp(dest);
        resolution = TeleportResolution::clamped;
        break;
      case OutOfBoundsHandling::reject:
        resolution = TeleportResolution::rejected;
        break;
      case OutOfBoundsHandling::accept:
        break;
    }
  } else if (const auto inside = collider_containing(scene, dest)) {
    switch (scene.behavior.into_object) {
      case IntoObjectHandling::reject:
        resolution = TeleportResolution::rejected;
        break;
      case IntoObjectHandling::relocate:
        if (auto out = relocate_outside(scene, *scene.objects.at(*inside).world_collider(), dest)) {
          landing = *out;
          resolution = TeleportResolution::relocated;
        } else {
          resolution = TeleportResolution::rejected;
        }
        break;
      case IntoObjectHandling::accept:
        break;
    }
  } else {
    landing = dest + scene.behavior.teleport_offset;
  }

  scene.teleport_resolution = resolution;
  if (resolution == TeleportResolution::rejected) return;
  scene.avatar.position = landing;
  for (const auto& id : overlap_sphere(scene, landing, scene.avatar.hand_radius)) {
    fire_hooks(scene, id, HookTrigger::on_teleport_near);
  }
}

void apply_select(Scene& scene, const InteractionEvent& event) {
  auto& object = require_target(scene, event);
  if (!object.interactive.selectable) throw IllegalEventError("'" + object.id + "' is not selectable");
  if (object.state == ObjectState::grabbed) throw IllegalEventError("'" + object.id + "' is held");
  set_object_state(scene, object, ObjectState::selected);
  fire_hooks(scene, object.id, HookTrigger::on_select);
}

void apply_grab(Scene& scene, const InteractionEvent& event) {
  auto& object = require_target(scene, event);
  if (!object.interactive.grabbable) throw IllegalEventError("'" + object.id + "' is not grabbable");
  if (object.state == ObjectState::grabbed) throw IllegalEventError("'" + object.id + "' is already held");
  const double reach = event.params.probe_radius.value_or(scene.avatar.hand_radius);
  const auto collider = object.world_collider();
  const bool in_reach = collider ? overlaps_sphere(*collider, scene.avatar.position, reach)
                                 : distance(object.position, scene.avatar.position) <= reach;
  if (!in_reach) throw IllegalEventError("'" + object.id + "' is out of reach");
  set_object_state(scene, object, ObjectState::grabbed);
  fire_hooks(scene, object.id, HookTrigger::on_grab);
}

Vec3 keep_inside(const Scene& scene, const SceneObject& object, const Vec3& dest) {
  if (!object.collider) return scene.bounds.clamp(dest);
  const Aabb local = object.collider->bounding_box();
  Vec3 out = dest;
  for (int axis = 0; axis < 3; ++axis) {
    const double lo = scene.bounds.min[axis] - local.min[axis];
    const double hi = scene.bounds.max[axis] - local.max[axis];
    out[axis] = lo > hi ? 0.5 * (lo + hi) : std::clamp(dest[axis], lo, hi);
  }
  return out;
}

void apply_move(Scene& scene, const InteractionEvent& event) {
  auto& object = require_target(scene, event);
  if (!object.interactive.movable) throw IllegalEventError("'" + object.id + "' is not movable");
  if (scene.avatar.held_object != object.id) throw IllegalEventError("'" + object.id + "' is not held");
  const Vec3 dest = require_destination(event);
  const Vec3 start = object.position;
  object.position = keep_inside(scene, object, dest);
  set_object_state(scene, object, ObjectState::moving);
  set_object_state(scene, object, ObjectState::idle);
  if (scene.behavior.release == ReleaseHandling::snap_back) object.position = start;
  fire_hooks(scene, object.id, HookTrigger::on_move);
}

void apply_collide(Scene& scene, const InteractionEvent& event) {
  auto& object = require_target(scene, event);
  if (!object.interactive.movable) throw IllegalEventError("'" + object.id + "' is not movable");
  const Vec3 dest = require_destination(event);
  if (scene.avatar.held_object == object.id) release_held(scene);

  const Vec3 start = object.position;
  const Vec3 displacement = dest - start;
  std::optional<std::string> contact;
  double t = 1.0;
  if (const auto moving = object.world_collider()) {
    t = bounds_limit(moving->bounding_box(), displacement, scene.bounds);
    for (const auto& [id, other] : scene.objects) {
      if (id == object.id) continue;
      const auto obstacle = other.world_collider();
      if (!obstacle) continue;
      const auto hit = first_contact(*moving, displacement, *obstacle);
      if (hit && (*hit < t || (*hit == t && !contact))) {
        t = *hit;
        contact = id;
      }
    }
  } else {
    t = bounds_limit(Aabb{start, start}, displacement, scene.bounds);
  }

  set_object_state(scene, object, ObjectState::moving);
  object.position = start + displacement * t;
  set_object_state(scene, object, ObjectState::idle);

  if (contact) {
    scene.contacts.push_back({object.id, *contact});
    std::string a = object.id;
    std::string b = *contact;
    if (b < a) std::swap(a, b);
    fire_hooks(scene, a, HookTrigger::on_collide);
    fire_hooks(scene, b, HookTrigger::on_collide);
  }
}

}  // namespace

std::optional<Collider> SceneObject::world_collider() const {
  if (!collider) return std::nullopt;
  return collider->translated(position);
}

const SceneObject* Scene::find(std::string_view id) const {
  const auto it = objects.find(std::string(id));
  return it == objects.end() ? nullptr : &it->second;
}

std::size_t Scene::declared_hooks() const {
  std::size_t total = 0;
  for (const auto& [id, object] : objects) total += object.hooks.size();
  return total;
}

FaultError::FaultError(FaultKind kind, HookSite site)
    : Error(std::string(to_string(kind)) + " raised by " + site.object + "." +
            std::string(to_string(site.trigger))),
      kind_(kind),
      site_(std::move(site)) {}

const ObjectSnapshot* SceneSnapshot::find(std::string_view id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

std::optional<std::string> SceneSnapshot::collider_containing(const Vec3& p) const {
  for (const auto& o : objects) {
    if (o.collider && contains_point(*o.collider, p)) return o.id;
  }
  return std::nullopt;
}

void validate_scene(const Scene& scene) {
  if (!scene.bounds.min.finite() || !scene.bounds.max.finite() || !scene.bounds.non_degenerate()) {
    throw ValidationError("scene bounds must be finite with min < max on every axis");
  }
  if (!scene.avatar.position.finite() || !scene.bounds.contains(scene.avatar.position)) {
    throw ValidationError("avatar position " + to_string(scene.avatar.position) + " is outside the scene bounds");
  }
  if (!std::isfinite(scene.avatar.hand_radius) || scene.avatar.hand_radius <= 0.0) {
    throw ValidationError("avatar hand_radius must be > 0");
  }
  if (!scene.behavior.teleport_offset.finite()) {
    throw ValidationError("teleport_offset must be finite");
  }
  if (scene.expected.out_of_bounds == OutOfBoundsHandling::accept ||
      scene.expected.into_object == IntoObjectHandling::accept) {
    throw ValidationError("'accept' is not a valid expected behavior");
  }
  if (!std::isfinite(scene.clock) || scene.clock < 0.0) {
    throw ValidationError("scene clock must be a non-negative finite number");
  }
  for (const auto& [id, object] : scene.objects) {
    if (id.empty() || id != object.id) throw ValidationError("object id mismatch for '" + id + "'");
    if (!object.position.finite()) throw ValidationError("object '" + id + "' has a non-finite position");
    if (object.collider && !object.collider->valid()) {
      throw ValidationError("object '" + id + "' has an invalid collider");
    }
  }
}

std::optional<Hit> raycast(const Scene& scene, const Vec3& origin, const Vec3& direction,
                           double max_dist) {
  if (std::abs(norm(direction) - 1.0) > kUnitNormTolerance) {
    throw std::invalid_argument("raycast direction must have unit norm");
  }
  if (!(max_dist > 0.0)) throw std::invalid_argument("raycast max_dist must be > 0");
  std::optional<Hit> best;
  for (const auto& [id, object] : scene.objects) {
    const auto collider = object.world_collider();
    if (!collider) continue;
    const auto d = ray_distance(*collider, origin, direction, max_dist);
    if (d && (!best || *d < best->distance)) best = Hit{id, *d};
  }
  return best;
}

std::vector<std::string> overlap_sphere(const Scene& scene, const Vec3& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("overlap_sphere radius must be > 0");
  std::vector<std::string> ids;
  for (const auto& [id, object] : scene.objects) {
    const auto collider = object.world_collider();
    if (collider && overlaps_sphere(*collider, center, radius)) ids.push_back(id);
  }
  return ids;
}

std::optional<std::string> collider_containing(const Scene& scene, const Vec3& p) {
  for (const auto& [id, object] : scene.objects) {
    const auto collider = object.world_collider();
    if (collider && contains_point(*collider, p)) return id;
  }
  return std::nullopt;
}

Scene apply_event(const Scene& scene, const InteractionEvent& event) {
  Scene next = scene;
  next.markers.clear();
  next.contacts.clear();
  next.hooks_fired.clear();
  next.teleport_resolution = TeleportResolution::none;

  auto& input = next.avatar.last_input;
  input.serial += 1;
  input.kind = base_kind(event.kind);
  input.target = event.target;
  input.destination = event.params.destination;

  switch (base_kind(event.kind)) {
    case InteractionKind::teleport: apply_teleport(next, event); break;
    case InteractionKind::select: apply_select(next, event); break;
    case InteractionKind::grab: apply_grab(next, event); break;
    case InteractionKind::move: apply_move(next, event); break;
    case InteractionKind::collide: apply_collide(next, event); break;
    default: throw IllegalEventError("unsupported interaction kind");
  }
  return next;
}

SceneSnapshot snapshot(const Scene& scene) {
  SceneSnapshot snap;
  snap.clock = scene.clock;
  snap.bounds = scene.bounds;
  snap.avatar = scene.avatar;
  snap.objects.reserve(scene.objects.size());
  for (const auto& [id, object] : scene.objects) {
    snap.objects.push_back({id, object.position, object.state, object.world_collider()});
  }
  snap.markers = scene.markers;
  snap.contacts = scene.contacts;
  return snap;
}

Scene advance_clock(const Scene& scene, double dt) {
  if (!std::isfinite(dt) || dt < 0.0) throw std::invalid_argument("advance_clock requires dt >= 0");
  Scene next = scene;
  next.clock += dt;
  return next;
}

std::string_view to_string(ObjectState state) { return detail::name_of(kStateNames, state); }
std::string_view to_string(HookTrigger trigger) { return detail::name_of(kTriggerNames, trigger); }
std::string_view to_string(FaultKind kind) { return detail::name_of(kFaultNames, kind); }
std::string_view to_string(OutOfBoundsHandling h) { return detail::name_of(kOutOfBoundsNames, h); }
std::string_view to_string(IntoObjectHandling h) { return detail::name_of(kIntoObjectNames, h); }
std::string_view to_string(ReleaseHandling h) { return detail::name_of(kReleaseNames, h); }
std::string_view to_string(TeleportResolution r) { return detail::name_of(kResolutionNames, r); }

std::string_view to_string(OutcomeStatus s) { return detail::name_of(kOutcomeNames, s); }

OutcomeStatus parse_outcome_status(std::string_view text) {
  return detail::value_of(kOutcomeNames, text, "outcome status");
}

ObjectState parse_object_state(std::string_view text) {
  return detail::value_of(kStateNames, text, "object state");
}
HookTrigger parse_hook_trigger(std::string_view text) {
  return detail::value_of(kTriggerNames, text, "hook trigger");
}
FaultKind parse_fault_kind(std::string_view text) {
  return detail::value_of(kFaultNames, text, "fault kind");
}
OutOfBoundsHandling parse_out_of_bounds(std::string_view text) {
  return detail::value_of(kOutOfBoundsNames, text, "out_of_bounds handling");
}
IntoObjectHandling parse_into_object(std::string_view text) {
  return detail::value_of(kIntoObjectNames, text, "into_object handling");
}
ReleaseHandling parse_release(std::string_view text) {
  return detail::value_of(kReleaseNames, text, "release handling");
}

}  // namespace scenetest
