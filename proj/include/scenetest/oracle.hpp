#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenetest/interaction.hpp"
#include "scenetest/scene.hpp"

namespace scenetest {

/// Closed set of failure categories used in unique-failure tables.
enum class FailureCategory { application_crash, dependency_crash, assertion_violation };

enum class LocationScope { object, hook, oracle, scanner };

/// Attribution site of a failure. (category, Location) is the dedup key.
struct Location {
  LocationScope scope = LocationScope::object;
  std::string id;

  friend bool operator==(const Location&, const Location&) = default;
  friend auto operator<=>(const Location&, const Location&) = default;
};

struct Failure {
  FailureCategory category = FailureCategory::assertion_violation;
  Location site;
  std::string detail;
  std::string origin;  // test-case reference of this occurrence, e.g. "grabber#3" or "scan"
  std::optional<FaultKind> fault;

  friend bool operator==(const Failure&, const Failure&) = default;
};

enum class VerdictStatus { pass, fail };

/// Invariant: status == fail iff failure is present.
struct Verdict {
  VerdictStatus status = VerdictStatus::pass;
  InteractionEvent interaction;
  std::string message;
  std::optional<Failure> failure;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

using OracleArgs = std::map<std::string, std::string>;

struct SensorSpec {
  std::string kind;
  OracleArgs args;

  friend bool operator==(const SensorSpec&, const SensorSpec&) = default;
};

struct EffectorSpec {
  std::string kind;
  OracleArgs args;

  friend bool operator==(const EffectorSpec&, const EffectorSpec&) = default;
};

/// Scene metadata an effector may need beyond the current snapshot.
struct VerifyContext {
  std::optional<ExpectedBehavior> expected;
  const SceneSnapshot* previous = nullptr;
  Location site{LocationScope::oracle, ""};
  std::string origin;
};

struct CheckResult {
  bool ok = true;
  std::string message;
};

/// Raised from inside an effector when it cannot evaluate its check.
class EffectorInternalError : public Error {
 public:
  using Error::Error;
};

using SensorFn = std::function<bool(const InteractionEvent&, const OracleArgs&)>;
using EffectorFn = std::function<CheckResult(const InteractionEvent&, const SceneSnapshot&,
                                             const VerifyContext&, const OracleArgs&)>;

/// Named sensor and effector implementations. Immutable once a campaign starts;
/// new kinds are added by recompiling.
class OracleRegistry {
 public:
  /// Registry holding every built-in kind.
  static const OracleRegistry& builtin();
  static OracleRegistry with_builtins();

  void add_sensor(std::string kind, SensorFn fn);
  void add_effector(std::string kind, EffectorFn fn);

  const SensorFn* sensor(std::string_view kind) const;
  const EffectorFn* effector(std::string_view kind) const;

  /// Throws ConfigError for unregistered kinds.
  bool accepts(const SensorSpec& spec, const InteractionEvent& event) const;

  std::vector<std::string> sensor_kinds() const;
  std::vector<std::string> effector_kinds() const;

 private:
  std::map<std::string, SensorFn, std::less<>> sensors_;
  std::map<std::string, EffectorFn, std::less<>> effectors_;
};

struct DetectOptions {
  double teleport_threshold = 0.5;
};

/// State-diff sensor: the first expected kind whose detection predicate holds
/// between the two snapshots, or empty.
std::optional<InteractionEvent> detect(const SceneSnapshot& previous, const SceneSnapshot& current,
                                       std::span<const InteractionKind> expected,
                                       const DetectOptions& options = {});

/// Runs the effector's check. Internal effector errors become a failing
/// verdict with category dependency_crash.
Verdict verify(const OracleRegistry& registry, const EffectorSpec& effector,
               const InteractionEvent& event, const SceneSnapshot& current,
               const VerifyContext& context);

FailureCategory category_of(FaultKind kind);

/// Failure for a fault outcome. Throws std::invalid_argument for outcomes
/// that are not failures.
Failure classify(const RawOutcome& outcome, std::string origin);
/// Failure carried by a failing verdict. Throws std::invalid_argument on pass.
Failure classify(const Verdict& verdict);

struct UniqueFailure {
  FailureCategory category = FailureCategory::assertion_violation;
  Location site;
  std::size_t count = 0;
  std::string first_origin;
  std::string detail;

  friend bool operator==(const UniqueFailure&, const UniqueFailure&) = default;
};

/// Groups failures by (category, site), sorted by key.
std::vector<UniqueFailure> dedup(std::span<const Failure> failures);
/// Merges already grouped failures; dedup(dedup(x)) == dedup(x).
std::vector<UniqueFailure> dedup(std::span<const UniqueFailure> groups);

std::string_view to_string(FailureCategory category);
std::string_view display_name(FailureCategory category);  // "Application crash" etc.
std::string_view to_string(LocationScope scope);
std::string_view to_string(VerdictStatus status);
FailureCategory parse_failure_category(std::string_view text);
LocationScope parse_location_scope(std::string_view text);
VerdictStatus parse_verdict_status(std::string_view text);

}  // namespace scenetest
