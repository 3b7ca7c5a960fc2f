#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenetest/agents.hpp"

namespace scenetest {

inline constexpr int kTestCaseFormatVersion = 1;

struct RecordedAgent {
  AgentConfig config;
  NetSpec net;
  std::size_t first_step = 0;
  std::size_t step_count = 0;
  StopReason stop = StopReason::completed;
  std::vector<AgentNote> notes;

  friend bool operator==(const RecordedAgent&, const RecordedAgent&) = default;
};

struct RecordedStep {
  std::string agent;
  InteractionEvent request;  // with the concrete params used
  RawOutcome outcome;
  std::optional<InteractionEvent> detected;
  std::optional<std::string> fired;
  std::string verdict_digest;  // empty when no transition fired

  friend bool operator==(const RecordedStep&, const RecordedStep&) = default;
};

struct AbortMarker {
  std::size_t at_step = 0;  // number of steps recorded before the abort
  std::string agent;
  std::string reason;

  friend bool operator==(const AbortMarker&, const AbortMarker&) = default;
};

struct TestCase {
  int format_version = kTestCaseFormatVersion;
  std::string scene_digest;
  std::string campaign_digest;
  std::uint64_t seed = 0;
  double start_clock = 0.0;  // scene clock when the first agent started
  bool reinitialize_scene = false;
  ExpectedBehavior expected;
  std::vector<RecordedAgent> agents;
  std::vector<RecordedStep> steps;
  std::optional<AbortMarker> aborted;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct RecordInput {
  std::string scene_digest;
  std::string campaign_digest;
  std::uint64_t seed = 0;
  double start_clock = 0.0;
  bool reinitialize_scene = false;
  ExpectedBehavior expected;
  struct Agent {
    AgentConfig config;
    NetSpec net;
    const AgentTrace* trace = nullptr;
  };
  std::vector<Agent> agents;
  std::optional<AbortMarker> aborted;
};

std::string verdict_digest(const std::optional<Verdict>& verdict);
RecordedStep record_step(const std::string& agent, const TraceStep& step);
TestCase record(const RecordInput& input);

nlohmann::json to_json(const AgentConfig& config);
AgentConfig agent_config_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json to_json(const RecordedStep& step);
RecordedStep recorded_step_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json to_json(const TestCase& tc);
/// Throws ParseError for malformed input or an unsupported format_version.
TestCase test_case_from_json(const nlohmann::json& j);

/// Canonical text of the test case (the .uitest file contents).
std::string serialize(const TestCase& tc);
TestCase parse_test_case(const std::string& text);

struct ReplayOptions {
  bool ignore_digest = false;  // replay against an edited scene on purpose
  const OracleRegistry* registry = nullptr;
};

struct ReplayResult {
  std::vector<RecordedStep> trace;
  std::optional<std::size_t> divergence;  // first step whose replay differs
  std::vector<Verdict> verdicts;
  std::vector<Failure> failures;
};

/// Re-executes the recorded requests without any random generator. Throws
/// DigestMismatchError (before executing anything) when the scene digest
/// differs, unless options.ignore_digest is set.
ReplayResult replay(const Scene& scene, const TestCase& tc, const ReplayOptions& options = {});

}  // namespace scenetest
