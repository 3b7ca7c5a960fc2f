#include "scenetest/recorder.hpp"

#include "scenetest/canonical.hpp"
#include "scenetest/json_io.hpp"

namespace scenetest {

namespace {

json params_json(const AgentParameters& p) {
  return json{{"teleport_attempts", p.teleport_attempts},
              {"teleport_threshold", p.teleport_threshold},
              {"hand_radius", p.hand_radius},
              {"delay", p.delay},
              {"seed", p.seed}};
}

AgentParameters params_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  AgentParameters p;
  p.teleport_attempts = obj.uint("teleport_attempts");
  p.teleport_threshold = obj.number("teleport_threshold");
  p.hand_radius = obj.number("hand_radius");
  p.delay = obj.number("delay");
  p.seed = obj.uint("seed");
  obj.finish();
  return p;
}

json note_json(const AgentNote& n) {
  return json{{"slot", n.slot}, {"timestamp", n.timestamp}, {"message", n.message}};
}

AgentNote note_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  AgentNote n{obj.uint("slot"), obj.number("timestamp"), obj.string("message")};
  obj.finish();
  return n;
}

template <typename T, typename F>
std::vector<T> list_from_json(const json& j, const std::string& where, F convert) {
  if (!j.is_array()) throw ParseError(where + " must be an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(convert(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

std::string verdict_digest(const std::optional<Verdict>& verdict) {
  return verdict ? digest_of(to_json(*verdict)) : std::string();
}

RecordedStep record_step(const std::string& agent, const TraceStep& step) {
  return {agent, step.request, step.outcome, step.detected, step.fired, verdict_digest(step.verdict)};
}

TestCase record(const RecordInput& input) {
  TestCase tc;
  tc.scene_digest = input.scene_digest;
  tc.campaign_digest = input.campaign_digest;
  tc.seed = input.seed;
  tc.start_clock = input.start_clock;
  tc.reinitialize_scene = input.reinitialize_scene;
  tc.expected = input.expected;
  tc.aborted = input.aborted;
  for (const auto& a : input.agents) {
    RecordedAgent ra;
    ra.config = a.config;
    ra.net = a.net;
    ra.first_step = tc.steps.size();
    if (a.trace) {
      for (const auto& s : a.trace->steps) tc.steps.push_back(record_step(a.config.id, s));
      ra.stop = a.trace->stop;
      ra.notes = a.trace->notes;
    }
    ra.step_count = tc.steps.size() - ra.first_step;
    tc.agents.push_back(std::move(ra));
  }
  return tc;
}

json to_json(const AgentConfig& c) {
  json kinds = json::array();
  for (const auto k : c.interactions) kinds.push_back(to_string(k));
  return json{{"id", c.id}, {"behavior", to_string(c.behavior)}, {"interactions", kinds},
              {"params", params_json(c.params)}};
}

AgentConfig agent_config_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  AgentConfig c;
  c.id = obj.string("id");
  c.behavior = parse_behavior(obj.string("behavior"));
  c.interactions = list_from_json<InteractionKind>(obj.required("interactions"), obj.at("interactions"),
                                                   [](const json& k, const std::string& w) {
                                                     return parse_interaction_kind(as_string(k, w));
                                                   });
  c.params = params_from_json(obj.required("params"), obj.at("params"));
  obj.finish();
  return c;
}

json to_json(const RecordedStep& s) {
  json j{{"agent", s.agent}, {"request", to_json(s.request)}, {"outcome", to_json(s.outcome)},
         {"verdict_digest", s.verdict_digest}};
  if (s.detected) j["detected"] = to_json(*s.detected);
  if (s.fired) j["fired"] = *s.fired;
  return j;
}

RecordedStep recorded_step_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  RecordedStep s;
  s.agent = obj.string("agent");
  s.request = event_from_json(obj.required("request"), obj.at("request"));
  s.outcome = outcome_from_json(obj.required("outcome"), obj.at("outcome"));
  if (const json* d = obj.optional("detected")) s.detected = event_from_json(*d, obj.at("detected"));
  s.fired = obj.optional_string("fired");
  s.verdict_digest = obj.string("verdict_digest");
  obj.finish();
  return s;
}

json to_json(const TestCase& tc) {
  json agents = json::array();
  for (const auto& a : tc.agents) {
    json notes = json::array();
    for (const auto& n : a.notes) notes.push_back(note_json(n));
    agents.push_back({{"config", to_json(a.config)},
                      {"net", to_json(a.net)},
                      {"first_step", a.first_step},
                      {"step_count", a.step_count},
                      {"stop", to_string(a.stop)},
                      {"notes", notes}});
  }
  json steps = json::array();
  for (const auto& s : tc.steps) steps.push_back(to_json(s));
  json j{{"format_version", tc.format_version},
         {"scene_digest", tc.scene_digest},
         {"campaign_digest", tc.campaign_digest},
         {"seed", tc.seed},
         {"start_clock", tc.start_clock},
         {"reinitialize_scene", tc.reinitialize_scene},
         {"expected", to_json(tc.expected)},
         {"agents", agents},
         {"steps", steps}};
  if (tc.aborted) {
    j["aborted"] = {{"at_step", tc.aborted->at_step}, {"agent", tc.aborted->agent}, {"reason", tc.aborted->reason}};
  }
  return j;
}

TestCase test_case_from_json(const json& j) {
  StrictObject obj(j, "test case");
  TestCase tc;
  const auto version = obj.uint("format_version");
  if (version != std::uint64_t(kTestCaseFormatVersion)) {
    throw ParseError("unsupported test case format_version " + std::to_string(version));
  }
  tc.scene_digest = obj.string("scene_digest");
  tc.campaign_digest = obj.string("campaign_digest");
  tc.seed = obj.uint("seed");
  tc.start_clock = obj.number("start_clock");
  tc.reinitialize_scene = obj.boolean("reinitialize_scene");
  tc.expected = expected_from_json(obj.required("expected"), obj.at("expected"));
  tc.agents = list_from_json<RecordedAgent>(obj.required("agents"), obj.at("agents"), [](const json& a, const std::string& w) {
    StrictObject ao(a, w);
    RecordedAgent ra;
    ra.config = agent_config_from_json(ao.required("config"), ao.at("config"));
    try {
      ra.net = parse_net_spec(ao.required("net"));
    } catch (const ParseError& e) {
      throw ParseError(ao.at("net") + ": " + e.what());
    }
    ra.first_step = ao.uint("first_step");
    ra.step_count = ao.uint("step_count");
    ra.stop = parse_stop_reason(ao.string("stop"));
    ra.notes = list_from_json<AgentNote>(ao.required("notes"), ao.at("notes"), note_from_json);
    ao.finish();
    return ra;
  });
  tc.steps = list_from_json<RecordedStep>(obj.required("steps"), obj.at("steps"), recorded_step_from_json);
  if (const json* a = obj.optional("aborted")) {
    StrictObject ao(*a, obj.at("aborted"));
    tc.aborted = AbortMarker{ao.uint("at_step"), ao.string("agent"), ao.string("reason")};
    ao.finish();
  }
  obj.finish();

  std::size_t expected_first = 0;
  for (const auto& a : tc.agents) {
    if (a.first_step != expected_first || a.first_step + a.step_count > tc.steps.size()) {
      throw ParseError("test case agent '" + a.config.id + "' has an inconsistent step range");
    }
    for (std::size_t i = a.first_step; i < a.first_step + a.step_count; ++i) {
      if (tc.steps[i].agent != a.config.id) throw ParseError("test case step " + std::to_string(i) + " belongs to another agent");
    }
    expected_first += a.step_count;
  }
  if (expected_first != tc.steps.size()) throw ParseError("test case has steps outside every agent section");
  return tc;
}

std::string serialize(const TestCase& tc) { return canonical_dump(to_json(tc)) + "\n"; }

TestCase parse_test_case(const std::string& text) { return test_case_from_json(parse_json(text, "test case")); }

ReplayResult replay(const Scene& scene, const TestCase& tc, const ReplayOptions& options) {
  if (!options.ignore_digest && scene.digest != tc.scene_digest) {
    throw DigestMismatchError("scene digest " + scene.digest + " does not match the recorded " + tc.scene_digest);
  }
  if (tc.start_clock < scene.clock) throw ParseError("test case start_clock precedes the scene clock");
  const OracleRegistry& registry = options.registry ? *options.registry : OracleRegistry::builtin();

  Scene initial = scene;
  initial.expected = tc.expected;
  initial = advance_clock(initial, tc.start_clock - scene.clock);

  // Build every net up front so a malformed test case executes nothing.
  std::vector<PetriNet> nets;
  for (const auto& a : tc.agents) {
    try {
      nets.push_back(build_net(a.net));
    } catch (const NetValidationError& e) {
      throw ParseError("test case net for agent '" + a.config.id + "': " + e.what());
    }
  }

  ReplayResult result;
  Scene current = initial;
  for (std::size_t ai = 0; ai < tc.agents.size(); ++ai) {
    const auto& agent = tc.agents[ai];
    if (tc.reinitialize_scene && ai > 0) {
      const double clock = current.clock;
      current = initial;
      current.clock = clock;
    }
    StepContext ctx{&nets[ai], &registry, agent.config.id, {}, agent.config.params};
    for (const auto kind : agent.config.interactions) {
      if (std::find(ctx.expected_kinds.begin(), ctx.expected_kinds.end(), kind) == ctx.expected_kinds.end()) {
        ctx.expected_kinds.push_back(kind);
      }
    }
    Marking marking = nets[ai].initial_marking();
    for (std::size_t i = agent.first_step; i < agent.first_step + agent.step_count; ++i) {
      const RecordedStep& recorded = tc.steps[i];
      InteractionEvent request = recorded.request;
      request.timestamp = current.clock;
      StepExecution exec = execute_step(current, marking, std::move(request), ctx);
      current = std::move(exec.scene);
      marking = std::move(exec.marking);
      RecordedStep produced = record_step(agent.config.id, exec.step);
      if (!result.divergence && canonical_dump(to_json(produced)) != canonical_dump(to_json(recorded))) {
        result.divergence = i;
      }
      if (exec.step.outcome.status == OutcomeStatus::fault && exec.step.outcome.fault) {
        result.failures.push_back(classify(exec.step.outcome, origin_of(agent.config.id, produced.request.sequence_index)));
      }
      if (exec.step.verdict) {
        if (exec.step.verdict->failure) result.failures.push_back(*exec.step.verdict->failure);
        result.verdicts.push_back(*exec.step.verdict);
      }
      result.trace.push_back(std::move(produced));
    }
  }
  return result;
}

}  // namespace scenetest
