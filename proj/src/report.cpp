#include <cstdio>
#include <sstream>

#include "scenetest/canonical.hpp"
#include "scenetest/harness.hpp"
#include "scenetest/json_io.hpp"

namespace scenetest {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string percent(double ratio) { return fixed(ratio * 100.0, 1) + "%"; }

template <typename T, typename F>
std::vector<T> list_from(const json& j, const std::string& where, F convert) {
  if (!j.is_array()) throw ParseError(where + " must be an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(convert(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

json coverage_json(const CoverageReport& c) {
  json matrix = json::object();
  for (const auto& [id, kinds] : c.matrix) {
    json list = json::array();
    for (const auto k : kinds) list.push_back(to_string(k));
    matrix[id] = list;
  }
  return json{{"interaction_coverage", c.interaction_coverage},
              {"catalog_size", c.catalog_size},
              {"interacted", c.interacted},
              {"matrix", matrix},
              {"hook_coverage", c.hook_coverage},
              {"hooks_declared", c.hooks_declared},
              {"hooks_fired", c.hooks_fired}};
}

CoverageReport coverage_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  CoverageReport c;
  c.interaction_coverage = obj.number("interaction_coverage");
  c.catalog_size = obj.uint("catalog_size");
  c.interacted = obj.uint("interacted");
  StrictObject matrix(obj.required("matrix"), obj.at("matrix"));
  for (const auto& [id, kinds] : obj.required("matrix").items()) {
    c.matrix[id] = list_from<InteractionKind>(matrix.required(id), matrix.at(id), [](const json& k, const std::string& w) {
      return parse_interaction_kind(as_string(k, w));
    });
  }
  matrix.finish();
  c.hook_coverage = obj.number("hook_coverage");
  c.hooks_declared = obj.uint("hooks_declared");
  c.hooks_fired = obj.uint("hooks_fired");
  obj.finish();
  return c;
}

json verdicts_json(const VerdictSummary& v) {
  return json{{"steps", v.steps}, {"pass", v.pass}, {"fail", v.fail}, {"undetected", v.undetected},
              {"illegal", v.illegal}, {"faults", v.faults}, {"no_target", v.no_target}};
}

VerdictSummary verdicts_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  VerdictSummary v{obj.uint("steps"), obj.uint("pass"), obj.uint("fail"), obj.uint("undetected"),
                   obj.uint("illegal"), obj.uint("faults"), obj.uint("no_target")};
  obj.finish();
  return v;
}

json agent_json(const AgentSummary& a) {
  return json{{"id", a.id}, {"behavior", to_string(a.behavior)}, {"steps", a.steps}, {"pass", a.pass},
              {"fail", a.fail}, {"stop", to_string(a.stop)}, {"first_step", a.first_step}};
}

AgentSummary agent_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  AgentSummary a;
  a.id = obj.string("id");
  a.behavior = parse_behavior(obj.string("behavior"));
  a.steps = obj.uint("steps");
  a.pass = obj.uint("pass");
  a.fail = obj.uint("fail");
  a.stop = parse_stop_reason(obj.string("stop"));
  a.first_step = obj.uint("first_step");
  obj.finish();
  return a;
}

std::string human(const CampaignReport& r) {
  std::ostringstream out;
  const auto& c = r.coverage;
  out << "Campaign report\n"
      << "  scene digest:    " << r.scene_digest << "\n"
      << "  campaign digest: " << r.campaign_digest << "\n"
      << "  seed: " << r.seed << "\n"
      << "  stop reason: " << to_string(r.stop) << "\n"
      << "  simulated time: " << fixed(r.simulated_seconds, 3) << " s (scan " << fixed(r.scan_seconds, 3) << " s)\n"
      << "  wall time: " << fixed(r.wall_seconds, 3) << " s\n"
      << "Coverage\n"
      << "  Interaction coverage: " << percent(c.interaction_coverage) << " (" << c.interacted << "/"
      << c.catalog_size << " objects)\n"
      << "  Hook coverage: " << percent(c.hook_coverage) << " (" << c.hooks_fired << "/" << c.hooks_declared
      << " hooks)\n"
      << "Verdicts\n"
      << "  steps " << r.verdicts.steps << ", pass " << r.verdicts.pass << ", fail " << r.verdicts.fail
      << ", undetected " << r.verdicts.undetected << ", illegal " << r.verdicts.illegal << ", faults "
      << r.verdicts.faults << ", no-target " << r.verdicts.no_target << "\n"
      << "Agents\n";
  for (const auto& a : r.agents) {
    out << "  " << a.id << " [" << to_string(a.behavior) << "] steps " << a.steps << ", pass " << a.pass
        << ", fail " << a.fail << ", " << to_string(a.stop) << "\n";
  }
  out << "Unique failures\n";
  for (const auto category : {FailureCategory::application_crash, FailureCategory::dependency_crash,
                              FailureCategory::assertion_violation}) {
    std::size_t unique = 0;
    std::size_t occurrences = 0;
    for (const auto& u : r.unique_failures) {
      if (u.category != category) continue;
      ++unique;
      occurrences += u.count;
    }
    out << "  " << display_name(category) << ": " << unique << " (" << occurrences << " occurrences)\n";
  }
  out << "  Total: " << r.unique_failures.size() << " (" << r.total_failures << " occurrences)\n";
  for (const auto& u : r.unique_failures) {
    out << "  - " << display_name(u.category) << " at " << to_string(u.site.scope) << " '" << u.site.id
        << "' x" << u.count << ", first " << u.first_origin << ": " << u.detail << "\n";
  }
  if (!r.warnings.empty()) {
    out << "Warnings\n";
    for (const auto& w : r.warnings) out << "  " << w << "\n";
  }
  out << "Exit status: " << r.exit_status << "\n";
  return out.str();
}

}  // namespace

json to_json(const CampaignReport& r) {
  json failures = json::array();
  for (const auto& u : r.unique_failures) failures.push_back(to_json(u));
  json agents = json::array();
  for (const auto& a : r.agents) agents.push_back(agent_json(a));
  return json{{"format_version", r.format_version},
              {"scene_digest", r.scene_digest},
              {"campaign_digest", r.campaign_digest},
              {"seed", r.seed},
              {"stop", to_string(r.stop)},
              {"coverage", coverage_json(r.coverage)},
              {"verdicts", verdicts_json(r.verdicts)},
              {"unique_failures", failures},
              {"total_failures", r.total_failures},
              {"timing", {{"scan_seconds", r.scan_seconds}, {"simulated_seconds", r.simulated_seconds}}},
              {"agents", agents},
              {"warnings", r.warnings},
              {"exit_status", r.exit_status}};
}

CampaignReport report_from_json(const json& j) {
  StrictObject obj(j, "report");
  CampaignReport r;
  if (obj.uint("format_version") != std::uint64_t(kReportFormatVersion)) {
    throw ParseError("unsupported report format_version");
  }
  r.scene_digest = obj.string("scene_digest");
  r.campaign_digest = obj.string("campaign_digest");
  r.seed = obj.uint("seed");
  r.stop = parse_stop_reason(obj.string("stop"));
  r.coverage = coverage_from_json(obj.required("coverage"), "report.coverage");
  r.verdicts = verdicts_from_json(obj.required("verdicts"), "report.verdicts");
  r.unique_failures = list_from<UniqueFailure>(obj.required("unique_failures"), "report.unique_failures",
                                               unique_failure_from_json);
  r.total_failures = obj.uint("total_failures");
  StrictObject timing(obj.required("timing"), "report.timing");
  r.scan_seconds = timing.number("scan_seconds");
  r.simulated_seconds = timing.number("simulated_seconds");
  timing.finish();
  r.agents = list_from<AgentSummary>(obj.required("agents"), "report.agents", agent_from_json);
  r.warnings = list_from<std::string>(obj.required("warnings"), "report.warnings", as_string);
  const auto status = obj.uint("exit_status");
  if (status > 1) throw ParseError("report.exit_status must be 0 or 1");
  r.exit_status = int(status);
  obj.finish();
  return r;
}

std::string emit_report(const CampaignReport& report, ReportFormat format) {
  if (format == ReportFormat::machine) return canonical_dump(to_json(report)) + "\n";
  return human(report);
}

CampaignReport parse_report(const std::string& text) { return report_from_json(parse_json(text, "report")); }

}  // namespace scenetest
