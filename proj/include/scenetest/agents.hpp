#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "scenetest/oracle.hpp"
#include "scenetest/petri.hpp"
#include "scenetest/scanner.hpp"
#include "scenetest/scene.hpp"

namespace scenetest {

/// The seven built-in agent behaviors, one per interaction kind.
enum class Behavior {
  simple_teleportation,
  teleportation_outside_scene_bounds,
  teleportation_into_objects,
  object_selection,
  object_grabbing,
  object_movement,
  collision,
};

inline constexpr std::array<Behavior, 7> kAllBehaviors = {
    Behavior::simple_teleportation, Behavior::teleportation_outside_scene_bounds,
    Behavior::teleportation_into_objects, Behavior::object_selection,
    Behavior::object_grabbing, Behavior::object_movement, Behavior::collision,
};

std::string_view to_string(Behavior behavior);
Behavior parse_behavior(std::string_view text);
InteractionKind kind_of(Behavior behavior);
/// Built-in effector kind checking this behavior's interaction.
std::string_view effector_of(Behavior behavior);

struct AgentParameters {
  std::uint64_t teleport_attempts = 10;
  double teleport_threshold = 0.5;
  double hand_radius = 0.5;
  double delay = 1.0;
  std::uint64_t seed = 0;

  friend bool operator==(const AgentParameters&, const AgentParameters&) = default;
};

/// Throws ConfigError when a field is out of range.
void validate_parameters(const AgentParameters& params);

/// Seeded 64-bit generator. Counts every draw, per instance and process-wide,
/// so callers can prove a code path never consumed randomness.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform in [0, n). Requires n > 0.
  std::size_t index(std::size_t n);

  std::uint64_t draws() const { return draws_; }
  static std::uint64_t total_draws() { return total_.load(); }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
  static std::atomic<std::uint64_t> total_;
};

/// Per-agent seed derived from the campaign seed and the agent's position.
std::uint64_t derive_seed(std::uint64_t campaign_seed, std::size_t agent_index);

/// Cap on rejection-sampling draws before a SamplingError.
inline constexpr int kMaxSamplingDraws = 10000;

struct AgentConfig {
  std::string id;
  Behavior behavior = Behavior::simple_teleportation;
  std::vector<InteractionKind> interactions;  // planned slots
  AgentParameters params;

  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

/// Checks slots and parameters, and that the net accepts the behavior's events.
void validate_agent(const AgentConfig& config, const PetriNet& net, const OracleRegistry& registry);

/// Net used when a campaign names none: a 3-place cycle for simple
/// teleportation, a one-place self-loop for the others.
NetSpec default_net_spec(Behavior behavior);

/// Catalog objects a behavior may target, in id order.
std::vector<std::string> eligible_targets(Behavior behavior, const ObjectCatalog& catalog,
                                          const Scene& scene);

struct InteractionRequest {
  InteractionKind kind = InteractionKind::teleport;
  std::optional<std::string> target;
  InteractionParams params;

  friend bool operator==(const InteractionRequest&, const InteractionRequest&) = default;
};

/// Concrete parameters for one slot; empty when the behavior has no target
/// (recorded by the caller as a no-target note). Throws SamplingError when
/// rejection sampling exhausts its cap.
std::optional<InteractionRequest> generate_parameters(Behavior behavior, std::size_t slot,
                                                      const ObjectCatalog& catalog,
                                                      const Scene& scene,
                                                      const AgentParameters& params, Rng& rng);

struct ExecutionResult {
  Scene scene;
  RawOutcome outcome;
  InteractionParams params_used;  // request params plus any approach performed
  std::vector<HookSite> hooks_fired;
};

/// Runs a request through apply_event. Object interactions first reposition
/// the avatar next to the target when it is out of sight or reach; a recorded
/// approach point is reused as-is. Faults and illegal events become outcomes.
ExecutionResult execute_interaction(const Scene& scene, const InteractionEvent& request,
                                    double hand_radius);

/// Point outside the target's collider, hand_radius / 2 from its surface,
/// inside bounds and clear of every collider.
std::optional<Vec3> approach_point(const Scene& scene, const SceneObject& target, double hand_radius);

struct TraceStep {
  InteractionEvent request;
  RawOutcome outcome;
  std::optional<InteractionEvent> detected;
  std::optional<std::string> fired;
  std::optional<Verdict> verdict;
  std::vector<HookSite> hooks_fired;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct AgentNote {
  std::size_t slot = 0;
  double timestamp = 0.0;
  std::string message;

  friend bool operator==(const AgentNote&, const AgentNote&) = default;
};

enum class StopReason { completed, budget, crash };
std::string_view to_string(StopReason reason);
StopReason parse_stop_reason(std::string_view text);

struct AgentTrace {
  std::string agent;
  std::vector<TraceStep> steps;
  std::vector<AgentNote> notes;
  Marking marking;
  Scene final_scene;
  StopReason stop = StopReason::completed;
};

/// Everything execute_step needs besides the scene and marking.
struct StepContext {
  const PetriNet* net = nullptr;
  const OracleRegistry* registry = nullptr;
  std::string agent_id;
  std::vector<InteractionKind> expected_kinds;
  AgentParameters params;
};

struct StepExecution {
  Scene scene;
  Marking marking;
  TraceStep step;
};

/// One slot: execute, snapshot, detect, step the net, then wait `delay`.
StepExecution execute_step(const Scene& scene, const Marking& marking, InteractionEvent request,
                           const StepContext& context);

struct RunOptions {
  const OracleRegistry* registry = nullptr;  // default: builtin
  double deadline = std::numeric_limits<double>::infinity();  // simulated clock
  bool stop_on_crash = false;  // stop at the first application-crash outcome
};

AgentTrace run_agent(const Scene& scene, const AgentConfig& config, const ObjectCatalog& catalog,
                     const PetriNet& net, Rng& rng, const RunOptions& options = {});

std::string origin_of(const std::string& agent_id, std::uint64_t sequence_index);

}  // namespace scenetest
