#include "scenetest/agents.hpp"

#include <algorithm>
#include <cmath>

#include "enum_names.hpp"

namespace scenetest {

std::atomic<std::uint64_t> Rng::total_{0};

namespace {

constexpr std::pair<Behavior, std::string_view> kBehaviorNames[] = {
    {Behavior::simple_teleportation, "simple_teleportation"},
    {Behavior::teleportation_outside_scene_bounds, "teleportation_outside_scene_bounds"},
    {Behavior::teleportation_into_objects, "teleportation_into_objects"},
    {Behavior::object_selection, "object_selection"},
    {Behavior::object_grabbing, "object_grabbing"},
    {Behavior::object_movement, "object_movement"},
    {Behavior::collision, "collision"},
};

constexpr std::pair<StopReason, std::string_view> kStopNames[] = {
    {StopReason::completed, "completed"},
    {StopReason::budget, "budget"},
    {StopReason::crash, "crash"},
};

InteractionParams destination_only(const Vec3& dest) {
  InteractionParams p;
  p.destination = dest;
  return p;
}

Vec3 uniform_in(const Aabb& box, Rng& rng) {
  return {rng.uniform(box.min.x, box.max.x), rng.uniform(box.min.y, box.max.y),
          rng.uniform(box.min.z, box.max.z)};
}

std::optional<Aabb> intersect(const Aabb& a, const Aabb& b) {
  Aabb out{{std::max(a.min.x, b.min.x), std::max(a.min.y, b.min.y), std::max(a.min.z, b.min.z)},
           {std::min(a.max.x, b.max.x), std::min(a.max.y, b.max.y), std::min(a.max.z, b.max.z)}};
  if (!out.valid()) return std::nullopt;
  return out;
}

InteractionRequest sample_simple_teleport(const Scene& scene, const AgentParameters& p, Rng& rng) {
  for (int i = 0; i < kMaxSamplingDraws; ++i) {
    const Vec3 dest = uniform_in(scene.bounds, rng);
    if (distance(dest, scene.avatar.position) < p.teleport_threshold) continue;
    if (collider_containing(scene, dest)) continue;
    return {InteractionKind::teleport, std::nullopt, destination_only(dest)};
  }
  throw SamplingError("no teleport destination at least " + std::to_string(p.teleport_threshold) +
                      " from the avatar after " + std::to_string(kMaxSamplingDraws) + " draws");
}

InteractionRequest sample_out_of_bounds(const Scene& scene, Rng& rng) {
  const Vec3 margin = scene.bounds.extent();
  const Aabb region{scene.bounds.min - margin, scene.bounds.max + margin};
  for (int i = 0; i < kMaxSamplingDraws; ++i) {
    const Vec3 dest = uniform_in(region, rng);
    if (scene.bounds.contains(dest)) continue;
    return {InteractionKind::teleport_out_of_bounds, std::nullopt, destination_only(dest)};
  }
  throw SamplingError("no out-of-bounds destination after " + std::to_string(kMaxSamplingDraws) + " draws");
}

std::optional<InteractionRequest> sample_into_object(const ObjectCatalog& catalog, const Scene& scene,
                                                     Rng& rng) {
  std::vector<std::pair<std::string, Collider>> candidates;
  for (const auto& [id, entry] : catalog.entries) {
    const SceneObject* o = scene.find(id);
    if (!o) continue;
    const auto c = o->world_collider();
    if (c && intersect(c->bounding_box(), scene.bounds)) candidates.emplace_back(id, *c);
  }
  if (candidates.empty()) return std::nullopt;
  const auto& [id, collider] = candidates[rng.index(candidates.size())];
  const Aabb region = *intersect(collider.bounding_box(), scene.bounds);
  for (int i = 0; i < kMaxSamplingDraws; ++i) {
    const Vec3 dest = uniform_in(region, rng);
    if (contains_point(collider, dest)) {
      return InteractionRequest{InteractionKind::teleport_into_object, id, destination_only(dest)};
    }
  }
  throw SamplingError("no point inside '" + id + "' after " + std::to_string(kMaxSamplingDraws) + " draws");
}

// Nearest other object (position distance, then id) not already overlapping
// the target. Objects without a collider qualify: a sweep aimed at one shows
// whether the application lets things pass through it.
std::optional<std::string> collide_partner(const Scene& scene, const SceneObject& target) {
  const auto moving = target.world_collider();
  std::optional<std::string> best;
  double best_d = 0.0;
  for (const auto& [id, other] : scene.objects) {
    if (id == target.id) continue;
    const auto c = other.world_collider();
    if (c && moving && overlaps(*moving, *c)) continue;
    if (other.position == target.position) continue;
    const double d = distance(target.position, other.position);
    if (!best || d < best_d) {
      best = id;
      best_d = d;
    }
  }
  return best;
}

bool visible(const Scene& scene, const Vec3& eye, const SceneObject& target) {
  const auto c = target.world_collider();
  if (!c) return false;
  if (contains_point(*c, eye)) return true;
  const Vec3 to = c->center() - eye;
  const double len = norm(to);
  if (len == 0.0) return true;
  const auto hit = raycast(scene, eye, to / len, len * 2.0 + 1.0);
  return hit && hit->id == target.id;
}

bool in_reach(const Scene& scene, const Vec3& hand, const std::string& id, double radius) {
  const auto ids = overlap_sphere(scene, hand, radius);
  return std::binary_search(ids.begin(), ids.end(), id);
}

// Distance from the collider's center to its surface along unit direction d.
double exit_distance(const Collider& c, const Vec3& d) {
  if (const auto* s = std::get_if<Sphere>(&c.shape)) return s->radius;
  const auto& box = std::get<Aabb>(c.shape);
  const Vec3 half = box.extent() * 0.5;
  double t = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] != 0.0) t = std::min(t, half[axis] / std::abs(d[axis]));
  }
  return t;
}

std::string target_id(const InteractionEvent& e) {
  if (!e.target) throw IllegalEventError(std::string(to_string(e.kind)) + " request without target");
  return *e.target;
}

const SceneObject& live_target(const Scene& scene, const std::string& id) {
  const SceneObject* o = scene.find(id);
  if (!o) throw IllegalEventError("target '" + id + "' is not in the scene");
  return *o;
}

OutcomeStatus status_of(TeleportResolution r) {
  switch (r) {
    case TeleportResolution::clamped: return OutcomeStatus::clamped;
    case TeleportResolution::rejected: return OutcomeStatus::rejected;
    case TeleportResolution::relocated: return OutcomeStatus::relocated;
    default: return OutcomeStatus::applied;
  }
}

class Executor {
 public:
  Executor(const Scene& scene, const InteractionEvent& request, double hand_radius)
      : request_(request), hand_radius_(hand_radius) {
    result_.scene = scene;
    result_.params_used = request.params;
  }

  ExecutionResult run() {
    try {
      dispatch();
    } catch (const IllegalEventError& e) {
      result_.outcome = {OutcomeStatus::illegal, std::nullopt, std::nullopt, e.what()};
    } catch (const FaultError& e) {
      result_.hooks_fired.push_back(e.site());
      result_.outcome = {OutcomeStatus::fault, e.kind(), e.site(), e.what()};
    }
    return std::move(result_);
  }

 private:
  void apply(const InteractionEvent& e) {
    result_.scene = apply_event(result_.scene, e);
    result_.hooks_fired.insert(result_.hooks_fired.end(), result_.scene.hooks_fired.begin(),
                               result_.scene.hooks_fired.end());
  }

  // Teleports next to the target unless `ready` already holds. A recorded
  // approach point is replayed unconditionally.
  template <typename Ready>
  void approach(const std::string& id, Ready ready) {
    std::optional<Vec3> point = request_.params.approach;
    if (!point) {
      if (ready()) return;
      point = approach_point(result_.scene, live_target(result_.scene, id), hand_radius_);
      if (!point) throw IllegalEventError("no free approach point next to '" + id + "'");
    }
    InteractionEvent hop;
    hop.kind = InteractionKind::teleport;
    hop.actor = request_.actor;
    hop.params.destination = *point;
    hop.timestamp = request_.timestamp;
    hop.sequence_index = request_.sequence_index;
    apply(hop);
    result_.params_used.approach = point;
  }

  void grab(const std::string& id) {
    const double reach = request_.params.probe_radius.value_or(hand_radius_);
    approach(id, [&] { return in_reach(result_.scene, result_.scene.avatar.position, id, reach); });
    if (!in_reach(result_.scene, result_.scene.avatar.position, id, reach)) {
      throw IllegalEventError("'" + id + "' is out of reach");
    }
    InteractionEvent e = request_;
    e.kind = InteractionKind::grab;
    e.params.probe_radius = reach;
    apply(e);
  }

  void dispatch() {
    switch (request_.kind) {
      case InteractionKind::teleport:
      case InteractionKind::teleport_out_of_bounds:
      case InteractionKind::teleport_into_object:
        apply(request_);
        result_.outcome.status = status_of(result_.scene.teleport_resolution);
        return;
      case InteractionKind::select: {
        const std::string id = target_id(request_);
        const auto sees = [&] {
          return visible(result_.scene, result_.scene.avatar.position, live_target(result_.scene, id));
        };
        approach(id, sees);
        if (!sees()) throw IllegalEventError("'" + id + "' is not in line of sight");
        apply(request_);
        return;
      }
      case InteractionKind::grab:
        grab(target_id(request_));
        return;
      case InteractionKind::move: {
        const std::string id = target_id(request_);
        if (result_.scene.avatar.held_object != id) {
          grab(id);
          if (result_.scene.avatar.held_object != id) {
            throw IllegalEventError("grab of '" + id + "' did not take hold");
          }
        }
        apply(request_);
        return;
      }
      case InteractionKind::collide:
        apply(request_);
        return;
    }
  }

  const InteractionEvent& request_;
  double hand_radius_;
  ExecutionResult result_;
};

}  // namespace

std::string_view to_string(Behavior b) { return detail::name_of(kBehaviorNames, b); }
Behavior parse_behavior(std::string_view text) { return detail::value_of(kBehaviorNames, text, "agent behavior"); }
std::string_view to_string(StopReason r) { return detail::name_of(kStopNames, r); }
StopReason parse_stop_reason(std::string_view text) { return detail::value_of(kStopNames, text, "stop reason"); }

InteractionKind kind_of(Behavior b) {
  switch (b) {
    case Behavior::simple_teleportation: return InteractionKind::teleport;
    case Behavior::teleportation_outside_scene_bounds: return InteractionKind::teleport_out_of_bounds;
    case Behavior::teleportation_into_objects: return InteractionKind::teleport_into_object;
    case Behavior::object_selection: return InteractionKind::select;
    case Behavior::object_grabbing: return InteractionKind::grab;
    case Behavior::object_movement: return InteractionKind::move;
    case Behavior::collision: return InteractionKind::collide;
  }
  return InteractionKind::teleport;
}

std::string_view effector_of(Behavior b) {
  switch (b) {
    case Behavior::simple_teleportation: return "in_bounds";
    case Behavior::teleportation_outside_scene_bounds: return "out_of_bounds_handled";
    case Behavior::teleportation_into_objects: return "into_object_handled";
    case Behavior::object_selection: return "selected";
    case Behavior::object_grabbing: return "grabbed";
    case Behavior::object_movement: return "at_destination";
    case Behavior::collision: return "collided";
  }
  return "table1";
}

void validate_parameters(const AgentParameters& p) {
  if (p.teleport_attempts == 0) throw ConfigError("teleport_attempts must be positive");
  if (!std::isfinite(p.teleport_threshold) || p.teleport_threshold < 0.0) {
    throw ConfigError("teleport_threshold must be finite and >= 0");
  }
  if (!std::isfinite(p.hand_radius) || p.hand_radius <= 0.0) throw ConfigError("hand_radius must be > 0");
  if (!std::isfinite(p.delay) || p.delay < 0.0) throw ConfigError("delay must be finite and >= 0");
}

std::uint64_t Rng::next() {
  ++draws_;
  total_.fetch_add(1, std::memory_order_relaxed);
  return engine_();
}

double Rng::uniform() { return double(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::index requires n > 0");
  return std::size_t(uniform() * double(n)) % n;
}

std::uint64_t derive_seed(std::uint64_t campaign_seed, std::size_t agent_index) {
  std::seed_seq seq{std::uint32_t(campaign_seed), std::uint32_t(campaign_seed >> 32),
                    std::uint32_t(agent_index)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (std::uint64_t(words[1]) << 32) | words[0];
}

void validate_agent(const AgentConfig& config, const PetriNet& net, const OracleRegistry& registry) {
  if (config.id.empty()) throw ConfigError("agent id must not be empty");
  if (config.interactions.empty()) throw ConfigError("agent '" + config.id + "' has no interactions to perform");
  validate_parameters(config.params);
  try {
    validate_bindings(net, registry);
  } catch (const NetValidationError& e) {
    throw ConfigError("agent '" + config.id + "': " + e.what());
  }
  for (const auto kind : config.interactions) {
    if (kind != kind_of(config.behavior)) {
      throw ConfigError("agent '" + config.id + "' slot kind " + std::string(to_string(kind)) +
                        " does not match behavior " + std::string(to_string(config.behavior)));
    }
    InteractionEvent probe;
    probe.kind = kind;
    const bool accepted = std::any_of(net.transitions().begin(), net.transitions().end(),
                                      [&](const Transition& t) { return registry.accepts(t.sensor, probe); });
    if (!accepted) {
      throw ConfigError("agent '" + config.id + "': no sensor in its net accepts " +
                        std::string(to_string(kind)) + " events");
    }
  }
}

NetSpec default_net_spec(Behavior behavior) {
  const SensorSpec sensor{std::string(to_string(kind_of(behavior))), {}};
  const EffectorSpec effector{std::string(effector_of(behavior)), {}};
  NetSpec spec;
  spec.name = std::string(to_string(behavior));
  if (behavior == Behavior::simple_teleportation) {
    spec.places = {"P0", "P1", "P2"};
    spec.transitions = {{"T0", {"P0"}, {"P1"}, sensor, effector},
                        {"T1", {"P1"}, {"P2"}, sensor, effector},
                        {"T2", {"P2"}, {"P0"}, sensor, effector}};
  } else {
    spec.places = {"P0"};
    spec.transitions = {{"T0", {"P0"}, {"P0"}, sensor, effector}};
  }
  spec.initial_place = "P0";
  return spec;
}

std::vector<std::string> eligible_targets(Behavior behavior, const ObjectCatalog& catalog, const Scene& scene) {
  std::vector<std::string> ids;
  for (const auto& [id, entry] : catalog.entries) {
    const SceneObject* o = scene.find(id);
    if (!o) continue;
    const auto& f = o->interactive;
    bool ok = false;
    switch (behavior) {
      case Behavior::object_selection: ok = f.selectable; break;
      case Behavior::object_grabbing: ok = f.grabbable; break;
      case Behavior::object_movement: ok = f.grabbable && f.movable; break;
      case Behavior::collision: ok = f.movable && o->collider.has_value(); break;
      default: ok = o->collider.has_value(); break;
    }
    if (ok) ids.push_back(id);
  }
  return ids;
}

std::optional<InteractionRequest> generate_parameters(Behavior behavior, std::size_t slot,
                                                      const ObjectCatalog& catalog, const Scene& scene,
                                                      const AgentParameters& params, Rng& rng) {
  switch (behavior) {
    case Behavior::simple_teleportation: return sample_simple_teleport(scene, params, rng);
    case Behavior::teleportation_outside_scene_bounds: return sample_out_of_bounds(scene, rng);
    case Behavior::teleportation_into_objects: return sample_into_object(catalog, scene, rng);
    default: break;
  }
  const auto ids = eligible_targets(behavior, catalog, scene);
  if (ids.empty()) return std::nullopt;
  InteractionRequest req;
  req.kind = kind_of(behavior);
  req.target = ids[slot % ids.size()];
  switch (behavior) {
    case Behavior::object_grabbing:
      req.params.probe_radius = params.hand_radius;
      break;
    case Behavior::object_movement:
      req.params.probe_radius = params.hand_radius;
      req.params.destination = scene.bounds.center();
      break;
    case Behavior::collision: {
      const SceneObject& target = scene.objects.at(*req.target);
      const auto partner = collide_partner(scene, target);
      if (!partner) return std::nullopt;
      req.params.partner = partner;
      req.params.destination = scene.objects.at(*partner).position;
      break;
    }
    default:
      break;
  }
  return req;
}

std::optional<Vec3> approach_point(const Scene& scene, const SceneObject& target, double hand_radius) {
  const auto collider = target.world_collider();
  const Vec3 center = collider ? collider->center() : target.position;
  std::vector<Vec3> dirs;
  const Vec3 toward = scene.avatar.position - center;
  if (norm(toward) > 0.0) dirs.push_back(toward / norm(toward));
  for (const Vec3 d : {Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 0, 1}, Vec3{0, 0, -1}, Vec3{0, 1, 0},
                       Vec3{0, -1, 0}}) {
    dirs.push_back(d);
  }
  for (const auto& d : dirs) {
    const double exit = collider ? exit_distance(*collider, d) : 0.0;
    const Vec3 p = center + d * (exit + hand_radius * 0.5);
    if (scene.bounds.contains(p) && !collider_containing(scene, p)) return p;
  }
  return std::nullopt;
}

ExecutionResult execute_interaction(const Scene& scene, const InteractionEvent& request, double hand_radius) {
  return Executor(scene, request, hand_radius).run();
}

std::string origin_of(const std::string& agent_id, std::uint64_t sequence_index) {
  return agent_id + "#" + std::to_string(sequence_index);
}

StepExecution execute_step(const Scene& scene, const Marking& marking, InteractionEvent request,
                           const StepContext& ctx) {
  const SceneSnapshot before = snapshot(scene);
  ExecutionResult exec = execute_interaction(scene, request, ctx.params.hand_radius);
  request.params = exec.params_used;
  const SceneSnapshot after = snapshot(exec.scene);

  StepExecution out{std::move(exec.scene), marking, {}};
  out.step.request = request;
  out.step.outcome = std::move(exec.outcome);
  out.step.hooks_fired = std::move(exec.hooks_fired);

  if (auto detected = detect(before, after, ctx.expected_kinds, {ctx.params.teleport_threshold})) {
    detected->actor = ctx.agent_id;
    detected->sequence_index = request.sequence_index;
    detected->timestamp = request.timestamp;
    if (!detected->target) detected->target = request.target;
    detected->params = request.params;
    VerifyContext vctx{out.scene.expected, &before, {LocationScope::oracle, ctx.agent_id},
                       origin_of(ctx.agent_id, request.sequence_index)};
    StepResult sr = step(*ctx.net, marking, *detected, after, *ctx.registry, vctx);
    out.marking = std::move(sr.marking);
    out.step.fired = std::move(sr.fired);
    out.step.verdict = std::move(sr.verdict);
    out.step.detected = std::move(detected);
  }
  out.scene = advance_clock(out.scene, ctx.params.delay);
  return out;
}

AgentTrace run_agent(const Scene& scene, const AgentConfig& config, const ObjectCatalog& catalog,
                     const PetriNet& net, Rng& rng, const RunOptions& options) {
  const OracleRegistry& registry = options.registry ? *options.registry : OracleRegistry::builtin();
  StepContext ctx{&net, &registry, config.id, {}, config.params};
  for (const auto kind : config.interactions) {
    if (std::find(ctx.expected_kinds.begin(), ctx.expected_kinds.end(), kind) == ctx.expected_kinds.end()) {
      ctx.expected_kinds.push_back(kind);
    }
  }

  AgentTrace trace;
  trace.agent = config.id;
  trace.marking = net.initial_marking();
  trace.final_scene = scene;
  Scene& current = trace.final_scene;

  for (std::size_t slot = 0; slot < config.interactions.size(); ++slot) {
    if (current.clock >= options.deadline) {
      trace.stop = StopReason::budget;
      break;
    }
    const auto req = generate_parameters(config.behavior, slot, catalog, current, config.params, rng);
    if (!req) {
      trace.notes.push_back({slot, current.clock, "no target for " + std::string(to_string(config.behavior))});
      continue;
    }
    InteractionEvent request;
    request.kind = req->kind;
    request.actor = config.id;
    request.target = req->target;
    request.params = req->params;
    request.timestamp = current.clock;
    request.sequence_index = trace.steps.size();

    StepExecution exec = execute_step(current, trace.marking, std::move(request), ctx);
    current = std::move(exec.scene);
    trace.marking = std::move(exec.marking);
    trace.steps.push_back(std::move(exec.step));

    const RawOutcome& outcome = trace.steps.back().outcome;
    if (options.stop_on_crash && outcome.status == OutcomeStatus::fault && outcome.fault &&
        category_of(*outcome.fault) == FailureCategory::application_crash) {
      trace.stop = StopReason::crash;
      break;
    }
  }
  return trace;
}

}  // namespace scenetest
