#include "scenetest/harness.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "enum_names.hpp"
#include "scenetest/canonical.hpp"
#include "scenetest/json_io.hpp"
#include "scenetest/scene_io.hpp"

namespace scenetest {

namespace {

constexpr std::pair<CrashPolicy, std::string_view> kPolicyNames[] = {
    {CrashPolicy::stop_campaign, "stop_campaign"},
    {CrashPolicy::skip_agent, "skip_agent"},
    {CrashPolicy::continue_campaign, "continue"},
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

ScanConfig scan_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  ScanConfig c;
  c.angular_resolution = obj.optional_number("angular_resolution").value_or(c.angular_resolution);
  c.rays_per_window = obj.optional_uint("rays_per_window");
  c.window = obj.optional_number("window").value_or(c.window);
  if (const json* origins = obj.optional("origins")) {
    if (!origins->is_array()) throw ParseError(obj.at("origins") + " must be an array");
    for (std::size_t i = 0; i < origins->size(); ++i) {
      c.origins.push_back(vec3_from_json((*origins)[i], obj.at("origins") + "[" + std::to_string(i) + "]"));
    }
  }
  obj.finish();
  validate_scan_config(c);
  return c;
}

NetSpec net_from_json(const json& j, const std::filesystem::path& base, const std::string& where) {
  try {
    if (j.is_string()) {
      const auto path = resolve(base, j.get<std::string>());
      return parse_net_spec(parse_json(read_file(path.string()), "net file " + path.string()));
    }
    return parse_net_spec(j);
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

AgentSpec agent_from_json(const json& j, const std::filesystem::path& base, const std::string& where) {
  StrictObject obj(j, where);
  AgentSpec a;
  a.behavior = parse_behavior(obj.string("behavior"));
  a.id = obj.optional_string("id").value_or(std::string(to_string(a.behavior)));
  a.interactions = obj.optional_uint("interactions");
  if (a.interactions && *a.interactions == 0) throw ConfigError(obj.at("interactions") + " must be positive");
  if (const json* p = obj.optional("params")) {
    StrictObject po(*p, obj.at("params"));
    a.params.teleport_attempts = po.optional_uint("teleport_attempts").value_or(a.params.teleport_attempts);
    a.params.teleport_threshold = po.optional_number("teleport_threshold").value_or(a.params.teleport_threshold);
    a.params.hand_radius = po.optional_number("hand_radius").value_or(a.params.hand_radius);
    a.params.delay = po.optional_number("delay").value_or(a.params.delay);
    if (const auto seed = po.optional_uint("seed")) {
      a.params.seed = *seed;
      a.explicit_seed = true;
    }
    po.finish();
  }
  try {
    validate_parameters(a.params);
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  const json* net = obj.optional("net");
  a.net = net ? net_from_json(*net, base, obj.at("net")) : default_net_spec(a.behavior);
  obj.finish();
  try {
    validate_bindings(build_net(a.net), OracleRegistry::builtin());
  } catch (const NetValidationError& e) {
    throw ConfigError(where + ".net: " + e.what());
  }
  return a;
}

int order_rank(Behavior b) {
  switch (kind_of(b)) {
    case InteractionKind::select: return 1;
    case InteractionKind::grab: return 2;
    case InteractionKind::move: return 3;
    case InteractionKind::collide: return 4;
    default: return 0;
  }
}

void tally(const AgentTrace& trace, VerdictSummary& v, AgentSummary& a) {
  for (const auto& s : trace.steps) {
    ++v.steps;
    ++a.steps;
    if (s.outcome.status == OutcomeStatus::illegal) ++v.illegal;
    if (s.outcome.status == OutcomeStatus::fault) ++v.faults;
    if (s.verdict) {
      if (s.verdict->status == VerdictStatus::pass) {
        ++v.pass;
        ++a.pass;
      } else {
        ++v.fail;
        ++a.fail;
      }
    } else if (s.outcome.executed()) {
      ++v.undetected;
    }
  }
  v.no_target += trace.notes.size();
}

}  // namespace

std::string_view to_string(CrashPolicy p) { return detail::name_of(kPolicyNames, p); }
CrashPolicy parse_crash_policy(std::string_view text) { return detail::value_of(kPolicyNames, text, "crash policy"); }

ReportFormat parse_report_format(std::string_view text) {
  if (text == "human") return ReportFormat::human;
  if (text == "machine") return ReportFormat::machine;
  throw ConfigError("unknown report format '" + std::string(text) + "'");
}

CampaignConfig parse_campaign(json doc, const std::filesystem::path& base_dir,
                              std::optional<std::uint64_t> seed_override) {
  if (seed_override && doc.is_object()) doc["seed"] = *seed_override;
  StrictObject root(doc, "campaign");
  CampaignConfig c;
  c.scene_path = resolve(base_dir, root.string("scene"));
  c.seed = root.optional_uint("seed").value_or(0);
  c.budget = root.optional_number("budget").value_or(c.budget);
  if (!(c.budget > 0.0)) throw ConfigError("campaign budget must be > 0");
  if (auto p = root.optional_string("crash_policy")) c.crash_policy = parse_crash_policy(*p);
  c.reinitialize_scene = root.optional_boolean("reinitialize_scene").value_or(false);
  if (const json* e = root.optional("expected")) c.expected = expected_from_json(*e, "campaign.expected");
  if (const json* s = root.optional("scan")) c.scan = scan_from_json(*s, "campaign.scan");
  const json& agents = root.required("agents");
  if (!agents.is_array()) throw ParseError("campaign.agents must be an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    AgentSpec a = agent_from_json(agents[i], base_dir, "campaign.agents[" + std::to_string(i) + "]");
    if (!ids.insert(a.id).second) throw ConfigError("duplicate agent id '" + a.id + "'");
    c.agents.push_back(std::move(a));
  }
  root.finish();
  c.digest = digest_of(doc);
  return c;
}

CampaignConfig load_campaign(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  const json doc = parse_json(read_file(path.string()), "campaign file " + path.string());
  return parse_campaign(doc, path.parent_path(), seed_override);
}

AgentConfig resolve_agent(const AgentSpec& spec, std::size_t index, std::uint64_t campaign_seed,
                          const ObjectCatalog& catalog) {
  AgentConfig c;
  c.id = spec.id;
  c.behavior = spec.behavior;
  c.params = spec.params;
  if (!spec.explicit_seed) c.params.seed = derive_seed(campaign_seed, index);
  std::uint64_t slots = 0;
  if (spec.interactions) {
    slots = *spec.interactions;
  } else if (is_teleport(kind_of(spec.behavior))) {
    slots = spec.params.teleport_attempts;
  } else {
    slots = std::max<std::uint64_t>(1, catalog.size());
  }
  c.interactions.assign(slots, kind_of(spec.behavior));
  return c;
}

std::vector<std::string> order_warnings(std::span<const AgentSpec> agents) {
  std::vector<std::string> warnings;
  for (std::size_t i = 1; i < agents.size(); ++i) {
    if (order_rank(agents[i].behavior) < order_rank(agents[i - 1].behavior)) {
      warnings.push_back("agent '" + agents[i].id + "' (" + std::string(to_string(agents[i].behavior)) +
                         ") runs after '" + agents[i - 1].id + "' (" +
                         std::string(to_string(agents[i - 1].behavior)) +
                         "); recommended order is teleports, select, grab, move, collide");
    }
  }
  return warnings;
}

CoverageReport interaction_coverage(const std::vector<std::string>& catalog,
                                    std::span<const CoverageEvent> events) {
  CoverageReport r;
  std::map<std::string, std::set<InteractionKind>> hits;
  for (const auto& id : catalog) hits[id];
  for (const auto& e : events) {
    if (!e.success || !e.target) continue;
    const auto it = hits.find(*e.target);
    if (it != hits.end()) it->second.insert(e.kind);
  }
  r.catalog_size = hits.size();
  for (const auto& [id, kinds] : hits) {
    r.matrix[id] = std::vector<InteractionKind>(kinds.begin(), kinds.end());
    if (!kinds.empty()) ++r.interacted;
  }
  r.interaction_coverage = r.catalog_size == 0 ? 1.0 : double(r.interacted) / double(r.catalog_size);
  return r;
}

CoverageReport interaction_coverage(const ObjectCatalog& catalog, std::span<const AgentTrace> traces) {
  std::vector<std::string> ids;
  for (const auto& [id, entry] : catalog.entries) ids.push_back(id);
  std::vector<CoverageEvent> events;
  for (const auto& t : traces) {
    for (const auto& s : t.steps) events.push_back({s.request.kind, s.request.target, s.outcome.executed()});
  }
  return interaction_coverage(ids, events);
}

CampaignResult run_campaign(const CampaignConfig& config) {
  return run_campaign(config, load_scene_file(config.scene_path.string()));
}

CampaignResult run_campaign(const CampaignConfig& config, const Scene& scene) {
  const auto wall_start = std::chrono::steady_clock::now();
  const OracleRegistry& registry = OracleRegistry::builtin();
  CampaignResult result;
  CampaignReport& report = result.report;
  report.scene_digest = scene.digest;
  report.campaign_digest = config.digest;
  report.seed = config.seed;
  report.warnings = order_warnings(config.agents);
  if (!(config.budget > 0.0)) throw ConfigError("campaign budget must be > 0");

  Scene base = scene;
  if (config.expected) base.expected = *config.expected;
  validate_scene(base);

  result.catalog = scan(base, config.scan);
  report.scan_seconds = result.catalog.duration;
  result.failures = result.catalog.scan_failures;

  Scene current = advance_clock(base, result.catalog.duration);
  const Scene initial = current;
  const double deadline = current.clock + config.budget;

  // Everything is resolved and validated before the first interaction runs.
  std::vector<PetriNet> nets;
  std::vector<AgentConfig> configs;
  for (std::size_t i = 0; i < config.agents.size(); ++i) {
    nets.push_back(build_net(config.agents[i].net));
    configs.push_back(resolve_agent(config.agents[i], i, config.seed, result.catalog));
    validate_agent(configs.back(), nets.back(), registry);
  }

  RecordInput rec{scene.digest, config.digest, config.seed, initial.clock, config.reinitialize_scene,
                  base.expected, {}, std::nullopt};
  result.traces.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (config.reinitialize_scene && i > 0) {
      const double clock = current.clock;
      current = initial;
      current.clock = clock;
    }
    Rng rng(configs[i].params.seed);
    const RunOptions options{&registry, deadline, config.crash_policy != CrashPolicy::continue_campaign};
    result.traces.push_back(run_agent(current, configs[i], result.catalog, nets[i], rng, options));
    const AgentTrace& trace = result.traces.back();
    current = trace.final_scene;

    for (const auto& s : trace.steps) {
      if (s.outcome.status == OutcomeStatus::fault && s.outcome.fault) {
        result.failures.push_back(classify(s.outcome, origin_of(trace.agent, s.request.sequence_index)));
      }
      if (s.verdict && s.verdict->failure) result.failures.push_back(classify(*s.verdict));
    }
    rec.agents.push_back({configs[i], config.agents[i].net, &trace});

    if (trace.stop == StopReason::crash && config.crash_policy == CrashPolicy::stop_campaign) {
      report.stop = StopReason::crash;
      std::size_t steps = 0;
      for (const auto& t : result.traces) steps += t.steps.size();
      rec.aborted = AbortMarker{steps, trace.agent, "application_crash"};
      break;
    }
    if (trace.stop == StopReason::budget) {
      report.stop = StopReason::budget;
      break;
    }
  }
  result.test_case = record(rec);

  report.coverage = interaction_coverage(result.catalog, result.traces);
  std::set<std::pair<std::string, std::size_t>> fired;
  for (const auto& h : result.catalog.hooks_fired) fired.insert({h.object, h.index});
  for (const auto& t : result.traces) {
    for (const auto& s : t.steps) {
      for (const auto& h : s.hooks_fired) fired.insert({h.object, h.index});
    }
  }
  report.coverage.hooks_declared = base.declared_hooks();
  report.coverage.hooks_fired = fired.size();
  report.coverage.hook_coverage = report.coverage.hooks_declared == 0
                                      ? 1.0
                                      : double(fired.size()) / double(report.coverage.hooks_declared);

  for (std::size_t i = 0; i < result.traces.size(); ++i) {
    const auto& trace = result.traces[i];
    AgentSummary a;
    a.id = trace.agent;
    a.behavior = configs[i].behavior;
    a.stop = trace.stop;
    a.first_step = result.test_case.agents[i].first_step;
    tally(trace, report.verdicts, a);
    report.agents.push_back(std::move(a));
  }
  report.unique_failures = dedup(std::span<const Failure>(result.failures));
  report.total_failures = result.failures.size();
  report.simulated_seconds = current.clock - scene.clock;
  report.exit_status = report.unique_failures.empty() ? 0 : 1;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

}  // namespace scenetest
