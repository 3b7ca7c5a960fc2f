#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scenetest/error.hpp"
#include "scenetest/geometry.hpp"
#include "scenetest/interaction.hpp"

namespace scenetest {

enum class ObjectState { idle, selected, grabbed, moving };

struct InteractiveSet {
  bool selectable = false;
  bool grabbable = false;
  bool movable = false;

  friend bool operator==(const InteractiveSet&, const InteractiveSet&) = default;

  bool empty() const { return !selectable && !grabbable && !movable; }
};

enum class HookTrigger { on_detect, on_select, on_grab, on_move, on_collide, on_teleport_near };

/// Simulated engine exceptions a hook may raise.
enum class FaultKind { null_reference, object_not_found, dependency_error };

struct SetState {
  ObjectState state = ObjectState::idle;
  friend bool operator==(const SetState&, const SetState&) = default;
};
struct EmitMarker {
  std::string label;
  friend bool operator==(const EmitMarker&, const EmitMarker&) = default;
};
struct RaiseFault {
  FaultKind kind = FaultKind::null_reference;
  friend bool operator==(const RaiseFault&, const RaiseFault&) = default;
};

using HookReaction = std::variant<SetState, EmitMarker, RaiseFault>;

/// Scripted scene reaction attached to an object.
struct BehaviorHook {
  HookTrigger trigger = HookTrigger::on_select;
  HookReaction reaction;

  friend bool operator==(const BehaviorHook&, const BehaviorHook&) = default;
};

/// Identifies one declared hook: the object, its trigger, and its position in
/// the object's hook list.
struct HookSite {
  std::string object;
  HookTrigger trigger = HookTrigger::on_select;
  std::size_t index = 0;

  friend bool operator==(const HookSite&, const HookSite&) = default;
  friend auto operator<=>(const HookSite&, const HookSite&) = default;
};

struct SceneObject {
  std::string id;
  std::optional<Collider> collider;  // relative to position
  Vec3 position;
  InteractiveSet interactive;
  ObjectState state = ObjectState::idle;
  std::vector<BehaviorHook> hooks;
  std::vector<std::string> refs;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;

  bool scenery() const { return interactive.empty(); }
  std::optional<Collider> world_collider() const;
};

// How the application under test handles teleport requests and releases.
// Mutant fixtures change these to model faulty applications.
enum class OutOfBoundsHandling { clamp, reject, accept };
enum class IntoObjectHandling { reject, relocate, accept };
enum class ReleaseHandling { keep, snap_back };

struct ApplicationBehavior {
  OutOfBoundsHandling out_of_bounds = OutOfBoundsHandling::clamp;
  IntoObjectHandling into_object = IntoObjectHandling::reject;
  Vec3 teleport_offset;  // added to every in-bounds teleport destination
  ReleaseHandling release = ReleaseHandling::keep;

  friend bool operator==(const ApplicationBehavior&, const ApplicationBehavior&) = default;
};

/// What the invalid-teleport oracles treat as correct. Only clamp/reject and
/// reject/relocate are meaningful expectations.
struct ExpectedBehavior {
  OutOfBoundsHandling out_of_bounds = OutOfBoundsHandling::clamp;
  IntoObjectHandling into_object = IntoObjectHandling::reject;

  friend bool operator==(const ExpectedBehavior&, const ExpectedBehavior&) = default;
};

/// Last request the application received from the avatar's controller.
/// serial increases on every applied event, accepted or not.
struct InputRecord {
  std::uint64_t serial = 0;
  std::optional<InteractionKind> kind;  // teleport, select, grab, move or collide
  std::optional<std::string> target;
  std::optional<Vec3> destination;

  friend bool operator==(const InputRecord&, const InputRecord&) = default;
};

struct AvatarState {
  Vec3 position;
  std::optional<std::string> held_object;
  double hand_radius = 0.5;
  InputRecord last_input;

  friend bool operator==(const AvatarState&, const AvatarState&) = default;
};

struct Contact {
  std::string moved;
  std::string other;

  friend bool operator==(const Contact&, const Contact&) = default;
};

enum class TeleportResolution { none, applied, clamped, rejected, relocated };

struct Scene {
  Aabb bounds;
  std::map<std::string, SceneObject> objects;
  AvatarState avatar;
  double clock = 0.0;
  ApplicationBehavior behavior;
  ExpectedBehavior expected;
  std::string digest;  // content hash of the canonicalized source file

  // Effects of the most recently applied event only.
  std::vector<std::string> markers;
  std::vector<Contact> contacts;
  std::vector<HookSite> hooks_fired;
  TeleportResolution teleport_resolution = TeleportResolution::none;

  const SceneObject* find(std::string_view id) const;
  std::size_t declared_hooks() const;
};

/// An injected fault fired while applying an event: the simulated crash.
class FaultError : public Error {
 public:
  FaultError(FaultKind kind, HookSite site);

  FaultKind kind() const noexcept { return kind_; }
  const HookSite& site() const noexcept { return site_; }

 private:
  FaultKind kind_;
  HookSite site_;
};

struct ObjectSnapshot {
  std::string id;
  Vec3 position;
  ObjectState state = ObjectState::idle;
  std::optional<Collider> collider;  // world space

  friend bool operator==(const ObjectSnapshot&, const ObjectSnapshot&) = default;
};

/// Immutable observation of a scene. Equality is exact.
struct SceneSnapshot {
  double clock = 0.0;
  Aabb bounds;
  AvatarState avatar;
  std::vector<ObjectSnapshot> objects;  // id order
  std::vector<std::string> markers;
  std::vector<Contact> contacts;

  friend bool operator==(const SceneSnapshot&, const SceneSnapshot&) = default;

  const ObjectSnapshot* find(std::string_view id) const;
  /// First object (id order) whose collider contains p.
  std::optional<std::string> collider_containing(const Vec3& p) const;
};

enum class OutcomeStatus { applied, clamped, rejected, relocated, illegal, fault };

/// What happened when an agent executed one interaction.
struct RawOutcome {
  OutcomeStatus status = OutcomeStatus::applied;
  std::optional<FaultKind> fault;
  std::optional<HookSite> site;
  std::string message;

  friend bool operator==(const RawOutcome&, const RawOutcome&) = default;

  bool executed() const {
    return status != OutcomeStatus::illegal && status != OutcomeStatus::fault;
  }
};

std::string_view to_string(OutcomeStatus status);
OutcomeStatus parse_outcome_status(std::string_view text);

struct Hit {
  std::string id;
  double distance = 0.0;

  friend bool operator==(const Hit&, const Hit&) = default;
};

void validate_scene(const Scene& scene);

std::optional<Hit> raycast(const Scene& scene, const Vec3& origin, const Vec3& direction,
                           double max_dist);
std::vector<std::string> overlap_sphere(const Scene& scene, const Vec3& center, double radius);

/// First object (id order) whose collider contains p.
std::optional<std::string> collider_containing(const Scene& scene, const Vec3& p);

/// Successor scene after the application processes one event. Throws
/// IllegalEventError on precondition breach and FaultError when a fault hook
/// fires; in both cases the input scene is untouched.
Scene apply_event(const Scene& scene, const InteractionEvent& event);

SceneSnapshot snapshot(const Scene& scene);
Scene advance_clock(const Scene& scene, double dt);

std::string_view to_string(ObjectState state);
std::string_view to_string(HookTrigger trigger);
std::string_view to_string(FaultKind kind);
std::string_view to_string(OutOfBoundsHandling handling);
std::string_view to_string(IntoObjectHandling handling);
std::string_view to_string(ReleaseHandling handling);
std::string_view to_string(TeleportResolution resolution);
ObjectState parse_object_state(std::string_view text);
HookTrigger parse_hook_trigger(std::string_view text);
FaultKind parse_fault_kind(std::string_view text);
OutOfBoundsHandling parse_out_of_bounds(std::string_view text);
IntoObjectHandling parse_into_object(std::string_view text);
ReleaseHandling parse_release(std::string_view text);

}  // namespace scenetest
