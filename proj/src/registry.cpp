// Built-in sensor and effector kinds.
//
// Sensors: one per interaction kind name ("teleport", "select", ...), plus
// "interaction" (args.kinds = comma-separated kind names) and "any".
// Effectors: in_bounds, out_of_bounds_handled, into_object_handled, selected,
// grabbed, at_destination, collided, and "table1", which dispatches on the
// event kind to the matching check.

#include <algorithm>
#include <sstream>

#include "scenetest/oracle.hpp"

namespace scenetest {

namespace {

constexpr double kMoveTolerance = 1e-6;
constexpr double kClampTolerance = 1e-9;
constexpr double kPenetrationTolerance = 1e-9;

const ObjectSnapshot& require_target(const InteractionEvent& e, const SceneSnapshot& s) {
  if (!e.target) throw EffectorInternalError("event carries no target");
  const auto* o = s.find(*e.target);
  if (!o) throw EffectorInternalError("target '" + *e.target + "' missing from snapshot");
  return *o;
}

const Vec3& require_destination(const InteractionEvent& e) {
  if (!e.params.destination) throw EffectorInternalError("event carries no destination");
  return *e.params.destination;
}

const ExpectedBehavior& require_expected(const VerifyContext& ctx) {
  if (!ctx.expected) throw EffectorInternalError("expected-behavior flags unavailable");
  return *ctx.expected;
}

const SceneSnapshot& require_previous(const VerifyContext& ctx) {
  if (!ctx.previous) throw EffectorInternalError("previous snapshot unavailable");
  return *ctx.previous;
}

CheckResult ok(std::string message) { return {true, std::move(message)}; }
CheckResult bad(std::string message) { return {false, std::move(message)}; }

CheckResult avatar_clear(const SceneSnapshot& s, std::string_view what) {
  const Vec3& p = s.avatar.position;
  if (!s.bounds.contains(p)) {
    return bad(std::string(what) + ": avatar at " + to_string(p) + " is outside the scene bounds");
  }
  if (const auto inside = s.collider_containing(p)) {
    return bad(std::string(what) + ": avatar at " + to_string(p) + " is inside '" + *inside + "'");
  }
  return ok(std::string(what) + ": avatar inside bounds and clear of colliders");
}

CheckResult check_in_bounds(const InteractionEvent&, const SceneSnapshot& s, const VerifyContext&,
                            const OracleArgs&) {
  return avatar_clear(s, "teleport");
}

CheckResult check_unchanged(const SceneSnapshot& s, const VerifyContext& ctx, std::string_view what) {
  const Vec3& before = require_previous(ctx).avatar.position;
  if (s.avatar.position != before) {
    return bad(std::string(what) + ": expected rejection, avatar moved from " + to_string(before) +
               " to " + to_string(s.avatar.position));
  }
  return ok(std::string(what) + ": request rejected");
}

CheckResult check_out_of_bounds(const InteractionEvent& e, const SceneSnapshot& s,
                                const VerifyContext& ctx, const OracleArgs&) {
  const auto& expected = require_expected(ctx);
  const Vec3& dest = require_destination(e);
  if (expected.out_of_bounds == OutOfBoundsHandling::reject) {
    return check_unchanged(s, ctx, "out-of-bounds teleport");
  }
  const Vec3 clamped = s.bounds.clamp(dest);
  if (distance(s.avatar.position, clamped) > kClampTolerance) {
    return bad("out-of-bounds teleport: expected clamp to " + to_string(clamped) + ", avatar at " +
               to_string(s.avatar.position));
  }
  return ok("out-of-bounds teleport: clamped");
}

CheckResult check_into_object(const InteractionEvent&, const SceneSnapshot& s,
                              const VerifyContext& ctx, const OracleArgs&) {
  const auto& expected = require_expected(ctx);
  if (expected.into_object == IntoObjectHandling::reject) {
    return check_unchanged(s, ctx, "teleport into object");
  }
  return avatar_clear(s, "teleport into object");
}

CheckResult check_selected(const InteractionEvent& e, const SceneSnapshot& s, const VerifyContext&,
                           const OracleArgs&) {
  const auto& o = require_target(e, s);
  if (o.state != ObjectState::selected) {
    return bad("select: '" + o.id + "' is " + std::string(to_string(o.state)) + ", expected selected");
  }
  return ok("select: '" + o.id + "' selected");
}

CheckResult check_grabbed(const InteractionEvent& e, const SceneSnapshot& s, const VerifyContext&,
                          const OracleArgs&) {
  const auto& o = require_target(e, s);
  if (o.state != ObjectState::grabbed) {
    return bad("grab: '" + o.id + "' is " + std::string(to_string(o.state)) + ", expected grabbed");
  }
  if (s.avatar.held_object != o.id) return bad("grab: '" + o.id + "' is not held by the avatar");
  return ok("grab: '" + o.id + "' held");
}

CheckResult check_at_destination(const InteractionEvent& e, const SceneSnapshot& s,
                                 const VerifyContext&, const OracleArgs&) {
  const auto& o = require_target(e, s);
  const Vec3& dest = require_destination(e);
  const double off = distance(o.position, dest);
  if (!(off <= kMoveTolerance)) {
    return bad("move: '" + o.id + "' at " + to_string(o.position) + ", expected " + to_string(dest));
  }
  return ok("move: '" + o.id + "' at destination");
}

CheckResult check_collided(const InteractionEvent& e, const SceneSnapshot& s, const VerifyContext&,
                           const OracleArgs&) {
  const auto& moved = require_target(e, s);
  const auto contact = std::find_if(s.contacts.begin(), s.contacts.end(),
                                    [&](const Contact& c) { return c.moved == moved.id; });
  if (contact == s.contacts.end()) return bad("collide: '" + moved.id + "' made no contact");
  const auto* other = s.find(contact->other);
  if (!other) throw EffectorInternalError("contact partner '" + contact->other + "' missing");
  if (moved.collider && other->collider &&
      (interpenetrates(*moved.collider, *other->collider, kPenetrationTolerance) ||
       interpenetrates(*other->collider, *moved.collider, kPenetrationTolerance))) {
    return bad("collide: '" + moved.id + "' interpenetrates '" + other->id + "'");
  }
  return ok("collide: '" + moved.id + "' stopped at '" + other->id + "'");
}

CheckResult check_table1(const InteractionEvent& e, const SceneSnapshot& s, const VerifyContext& ctx,
                         const OracleArgs& args) {
  switch (e.kind) {
    case InteractionKind::teleport: return check_in_bounds(e, s, ctx, args);
    case InteractionKind::teleport_out_of_bounds: return check_out_of_bounds(e, s, ctx, args);
    case InteractionKind::teleport_into_object: return check_into_object(e, s, ctx, args);
    case InteractionKind::select: return check_selected(e, s, ctx, args);
    case InteractionKind::grab: return check_grabbed(e, s, ctx, args);
    case InteractionKind::move: return check_at_destination(e, s, ctx, args);
    case InteractionKind::collide: return check_collided(e, s, ctx, args);
  }
  throw EffectorInternalError("unknown interaction kind");
}

std::vector<InteractionKind> parse_kind_list(const std::string& text) {
  std::vector<InteractionKind> kinds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) kinds.push_back(parse_interaction_kind(item));
  }
  return kinds;
}

}  // namespace

OracleRegistry OracleRegistry::with_builtins() {
  OracleRegistry r;
  for (const auto kind : kAllInteractionKinds) {
    r.add_sensor(std::string(to_string(kind)),
                 [kind](const InteractionEvent& e, const OracleArgs&) { return e.kind == kind; });
  }
  r.add_sensor("interaction", [](const InteractionEvent& e, const OracleArgs& args) {
    const auto it = args.find("kinds");
    if (it == args.end()) throw ConfigError("sensor 'interaction' requires args.kinds");
    const auto kinds = parse_kind_list(it->second);
    return std::find(kinds.begin(), kinds.end(), e.kind) != kinds.end();
  });
  r.add_sensor("any", [](const InteractionEvent&, const OracleArgs&) { return true; });

  r.add_effector("in_bounds", check_in_bounds);
  r.add_effector("out_of_bounds_handled", check_out_of_bounds);
  r.add_effector("into_object_handled", check_into_object);
  r.add_effector("selected", check_selected);
  r.add_effector("grabbed", check_grabbed);
  r.add_effector("at_destination", check_at_destination);
  r.add_effector("collided", check_collided);
  r.add_effector("table1", check_table1);
  return r;
}

const OracleRegistry& OracleRegistry::builtin() {
  static const OracleRegistry registry = with_builtins();
  return registry;
}

void OracleRegistry::add_sensor(std::string kind, SensorFn fn) { sensors_[std::move(kind)] = std::move(fn); }

void OracleRegistry::add_effector(std::string kind, EffectorFn fn) {
  effectors_[std::move(kind)] = std::move(fn);
}

const SensorFn* OracleRegistry::sensor(std::string_view kind) const {
  const auto it = sensors_.find(kind);
  return it == sensors_.end() ? nullptr : &it->second;
}

const EffectorFn* OracleRegistry::effector(std::string_view kind) const {
  const auto it = effectors_.find(kind);
  return it == effectors_.end() ? nullptr : &it->second;
}

bool OracleRegistry::accepts(const SensorSpec& spec, const InteractionEvent& event) const {
  const auto* fn = sensor(spec.kind);
  if (!fn) throw ConfigError("unregistered sensor '" + spec.kind + "'");
  return (*fn)(event, spec.args);
}

std::vector<std::string> OracleRegistry::sensor_kinds() const {
  std::vector<std::string> out;
  for (const auto& [k, fn] : sensors_) out.push_back(k);
  return out;
}

std::vector<std::string> OracleRegistry::effector_kinds() const {
  std::vector<std::string> out;
  for (const auto& [k, fn] : effectors_) out.push_back(k);
  return out;
}

}  // namespace scenetest
