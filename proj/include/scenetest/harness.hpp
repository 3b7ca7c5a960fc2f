#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenetest/agents.hpp"
#include "scenetest/recorder.hpp"
#include "scenetest/scanner.hpp"

namespace scenetest {

enum class CrashPolicy { stop_campaign, skip_agent, continue_campaign };
std::string_view to_string(CrashPolicy policy);  // "stop_campaign" | "skip_agent" | "continue"
CrashPolicy parse_crash_policy(std::string_view text);

struct AgentSpec {
  std::string id;
  Behavior behavior = Behavior::simple_teleportation;
  std::optional<std::uint64_t> interactions;  // default: see resolve_agent
  AgentParameters params;
  bool explicit_seed = false;  // otherwise derived from the campaign seed
  NetSpec net;
};

struct CampaignConfig {
  std::filesystem::path scene_path;
  std::vector<AgentSpec> agents;
  ScanConfig scan;
  std::uint64_t seed = 0;
  double budget = 1200.0;  // simulated seconds after the scan
  CrashPolicy crash_policy = CrashPolicy::skip_agent;
  std::optional<ExpectedBehavior> expected;  // overrides the scene's flags
  bool reinitialize_scene = false;
  std::string digest;  // of the canonical campaign document
};

/// Parses a campaign document; relative scene and net paths resolve against
/// base_dir. seed_override replaces the document's seed before digesting.
/// Throws ParseError / ConfigError / NetValidationError.
CampaignConfig parse_campaign(nlohmann::json doc, const std::filesystem::path& base_dir,
                              std::optional<std::uint64_t> seed_override = std::nullopt);
CampaignConfig load_campaign(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override = std::nullopt);

/// Concrete agent configuration: slot count defaults to teleport_attempts for
/// teleport behaviors and to the catalog size (at least 1) otherwise.
AgentConfig resolve_agent(const AgentSpec& spec, std::size_t index, std::uint64_t campaign_seed,
                          const ObjectCatalog& catalog);

/// Warnings for agent orders that deviate from teleports, select, grab, move,
/// collide.
std::vector<std::string> order_warnings(std::span<const AgentSpec> agents);

struct CoverageEvent {
  InteractionKind kind = InteractionKind::teleport;
  std::optional<std::string> target;
  bool success = true;
};

struct CoverageReport {
  double interaction_coverage = 1.0;
  std::size_t catalog_size = 0;
  std::size_t interacted = 0;
  // Catalog object -> kinds with at least one successful event on it.
  std::map<std::string, std::vector<InteractionKind>> matrix;
  double hook_coverage = 1.0;
  std::size_t hooks_declared = 0;
  std::size_t hooks_fired = 0;

  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

/// |catalog objects with a successful event| / |catalog|, 0/0 = 1. Hook
/// fields are left at their defaults.
CoverageReport interaction_coverage(const std::vector<std::string>& catalog,
                                    std::span<const CoverageEvent> events);
CoverageReport interaction_coverage(const ObjectCatalog& catalog, std::span<const AgentTrace> traces);

struct VerdictSummary {
  std::size_t steps = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t undetected = 0;  // executed, but no transition fired
  std::size_t illegal = 0;
  std::size_t faults = 0;
  std::size_t no_target = 0;

  friend bool operator==(const VerdictSummary&, const VerdictSummary&) = default;
};

struct AgentSummary {
  std::string id;
  Behavior behavior = Behavior::simple_teleportation;
  std::size_t steps = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  StopReason stop = StopReason::completed;
  std::size_t first_step = 0;  // range in the test case's step list

  friend bool operator==(const AgentSummary&, const AgentSummary&) = default;
};

inline constexpr int kReportFormatVersion = 1;

struct CampaignReport {
  int format_version = kReportFormatVersion;
  std::string scene_digest;
  std::string campaign_digest;
  std::uint64_t seed = 0;
  StopReason stop = StopReason::completed;
  CoverageReport coverage;
  VerdictSummary verdicts;
  std::vector<UniqueFailure> unique_failures;
  std::size_t total_failures = 0;
  double scan_seconds = 0.0;
  double simulated_seconds = 0.0;  // scan plus agents
  double wall_seconds = 0.0;       // human format only
  std::vector<AgentSummary> agents;
  std::vector<std::string> warnings;
  int exit_status = 0;  // 0 no failures, 1 failures found

  friend bool operator==(const CampaignReport&, const CampaignReport&) = default;
};

struct CampaignResult {
  CampaignReport report;
  TestCase test_case;
  ObjectCatalog catalog;
  std::vector<AgentTrace> traces;
  std::vector<Failure> failures;  // every occurrence, scan first
};

CampaignResult run_campaign(const CampaignConfig& config);
/// Same, against an already loaded scene (config.scene_path is ignored).
CampaignResult run_campaign(const CampaignConfig& config, const Scene& scene);

enum class ReportFormat { human, machine };
ReportFormat parse_report_format(std::string_view text);

/// Machine output is canonical JSON without the wall-clock time, so equal
/// campaigns give byte-identical reports.
std::string emit_report(const CampaignReport& report, ReportFormat format);
nlohmann::json to_json(const CampaignReport& report);
CampaignReport report_from_json(const nlohmann::json& j);
CampaignReport parse_report(const std::string& text);

/// Environment variable naming the default output directory of `run`.
inline constexpr const char* kOutDirEnv = "SCENETEST_OUT_DIR";

}  // namespace scenetest
