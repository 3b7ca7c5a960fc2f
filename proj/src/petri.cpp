#include "scenetest/petri.hpp"

#include <numeric>
#include <set>
#include <stdexcept>

namespace scenetest {

namespace {

using nlohmann::json;

std::vector<std::string> place_list(const json& j, const std::string& where) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) throw ParseError(where + " must be a place id or an array of place ids");
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw ParseError(where + " entries must be strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

template <typename Spec>
Spec binding(const json& j, const std::string& where) {
  Spec spec;
  if (j.is_string()) {
    spec.kind = j.get<std::string>();
    return spec;
  }
  if (!j.is_object()) throw ParseError(where + " must be a kind string or an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      if (!value.is_string()) throw ParseError(where + ".kind must be a string");
      spec.kind = value.template get<std::string>();
    } else if (key == "args") {
      if (!value.is_object()) throw ParseError(where + ".args must be an object");
      for (const auto& [k, v] : value.items()) {
        if (!v.is_string()) throw ParseError(where + ".args." + k + " must be a string");
        spec.args[k] = v.template get<std::string>();
      }
    } else {
      throw ParseError("unknown key '" + key + "' in " + where);
    }
  }
  if (spec.kind.empty()) throw ParseError(where + " requires a kind");
  return spec;
}

template <typename Spec>
json binding_json(const Spec& spec) {
  if (spec.args.empty()) return spec.kind;
  return json{{"kind", spec.kind}, {"args", spec.args}};
}

json place_json(const std::vector<std::string>& places) {
  if (places.size() == 1) return places.front();
  return places;
}

const std::string& required_string(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(where + " requires string '" + key + "'");
  }
  return it->get_ref<const std::string&>();
}

}  // namespace

unsigned Marking::total() const { return std::accumulate(tokens.begin(), tokens.end(), 0u); }

Marking PetriNet::initial_marking() const {
  Marking m;
  m.tokens.assign(places_.size(), 0);
  m.tokens[initial_] = 1;
  return m;
}

std::size_t PetriNet::place_index(const std::string& id) const {
  for (std::size_t i = 0; i < places_.size(); ++i) {
    if (places_[i] == id) return i;
  }
  throw std::out_of_range("unknown place '" + id + "'");
}

const Transition* PetriNet::find(const std::string& transition_id) const {
  for (const auto& t : transitions_) {
    if (t.id == transition_id) return &t;
  }
  return nullptr;
}

PetriNet build_net(const NetSpec& spec) {
  PetriNet net;
  net.name_ = spec.name;
  net.spec_ = spec;

  if (spec.places.empty()) throw NetValidationError("places", "net has no places");
  std::map<std::string, std::size_t> index;
  for (const auto& p : spec.places) {
    if (p.empty()) throw NetValidationError("places", "empty place id");
    if (!index.emplace(p, index.size()).second) throw NetValidationError(p, "duplicate place id");
  }
  net.places_ = spec.places;

  if (spec.transitions.empty()) throw NetValidationError("transitions", "net has no transitions");
  std::set<std::string> seen;
  const auto lookup = [&](const std::string& place, const std::string& t) {
    const auto it = index.find(place);
    if (it == index.end()) throw NetValidationError(t, "unknown place '" + place + "'");
    return it->second;
  };
  for (const auto& t : spec.transitions) {
    if (t.id.empty()) throw NetValidationError("transitions", "empty transition id");
    if (index.count(t.id) || !seen.insert(t.id).second) {
      throw NetValidationError(t.id, "duplicate element id");
    }
    if (t.from.size() != 1) throw NetValidationError(t.id, "transition needs exactly one input place");
    if (t.to.size() != 1) throw NetValidationError(t.id, "transition needs exactly one output place");
    if (t.sensor.kind.empty()) throw NetValidationError(t.id, "transition has no sensor");
    if (t.effector.kind.empty()) throw NetValidationError(t.id, "transition has no effector");
    net.transitions_.push_back({t.id, lookup(t.from[0], t.id), lookup(t.to[0], t.id), t.sensor, t.effector});
  }

  const auto init = index.find(spec.initial_place);
  if (init == index.end()) {
    throw NetValidationError(spec.initial_place.empty() ? "initial_place" : spec.initial_place,
                             "initial place is not a declared place");
  }
  net.initial_ = init->second;

  // Every place must be reachable from the initial place along arcs. In a
  // state machine that also implies the net graph is connected.
  std::vector<bool> reached(net.places_.size(), false);
  std::vector<std::size_t> frontier{net.initial_};
  reached[net.initial_] = true;
  while (!frontier.empty()) {
    const std::size_t p = frontier.back();
    frontier.pop_back();
    for (const auto& t : net.transitions_) {
      if (t.input == p && !reached[t.output]) {
        reached[t.output] = true;
        frontier.push_back(t.output);
      }
    }
  }
  for (std::size_t i = 0; i < reached.size(); ++i) {
    if (!reached[i]) throw NetValidationError(net.places_[i], "place unreachable from initial place");
  }
  return net;
}

void validate_bindings(const PetriNet& net, const OracleRegistry& registry) {
  for (const auto& t : net.transitions()) {
    if (!registry.sensor(t.sensor.kind)) {
      throw NetValidationError(t.id, "unregistered sensor kind '" + t.sensor.kind + "'");
    }
    if (!registry.effector(t.effector.kind)) {
      throw NetValidationError(t.id, "unregistered effector kind '" + t.effector.kind + "'");
    }
  }
}

NetSpec parse_net_spec(const json& j) {
  if (!j.is_object()) throw ParseError("net description must be an object");
  NetSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") {
      if (!value.is_string()) throw ParseError("net name must be a string");
      spec.name = value.get<std::string>();
    } else if (key == "places") {
      if (!value.is_array()) throw ParseError("places must be an array");
      spec.places = place_list(value, "places");
    } else if (key == "initial_place") {
      if (!value.is_string()) throw ParseError("initial_place must be a string");
      spec.initial_place = value.get<std::string>();
    } else if (key == "transitions") {
      if (!value.is_array()) throw ParseError("transitions must be an array");
      for (const auto& tj : value) {
        if (!tj.is_object()) throw ParseError("transition entries must be objects");
        NetSpec::TransitionSpec t;
        t.id = required_string(tj, "id", "transition");
        const std::string where = "transition '" + t.id + "'";
        for (const auto& [tk, tv] : tj.items()) {
          if (tk == "id") continue;
          if (tk == "from") t.from = place_list(tv, where + ".from");
          else if (tk == "to") t.to = place_list(tv, where + ".to");
          else if (tk == "sensor") t.sensor = binding<SensorSpec>(tv, where + ".sensor");
          else if (tk == "effector") t.effector = binding<EffectorSpec>(tv, where + ".effector");
          else throw ParseError("unknown key '" + tk + "' in " + where);
        }
        spec.transitions.push_back(std::move(t));
      }
    } else {
      throw ParseError("unknown key '" + key + "' in net description");
    }
  }
  return spec;
}

NetSpec parse_net_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed net description: ") + e.what());
  }
  return parse_net_spec(j);
}

json to_json(const NetSpec& spec) {
  json transitions = json::array();
  for (const auto& t : spec.transitions) {
    transitions.push_back({{"id", t.id},
                           {"from", place_json(t.from)},
                           {"to", place_json(t.to)},
                           {"sensor", binding_json(t.sensor)},
                           {"effector", binding_json(t.effector)}});
  }
  json j{{"places", spec.places}, {"transitions", transitions}, {"initial_place", spec.initial_place}};
  if (!spec.name.empty()) j["name"] = spec.name;
  return j;
}

std::vector<std::string> enabled(const PetriNet& net, const Marking& marking) {
  std::vector<std::string> out;
  if (marking.tokens.size() != net.places().size()) return out;
  for (const auto& t : net.transitions()) {
    if (marking.tokens[t.input] >= 1) out.push_back(t.id);
  }
  return out;
}

Marking fire(const PetriNet& net, const Marking& marking, const std::string& t) {
  if (marking.tokens.size() != net.places().size()) {
    throw std::invalid_argument("marking does not match the net's places");
  }
  const Transition* tr = net.find(t);
  if (!tr) throw std::invalid_argument("unknown transition '" + t + "'");
  if (marking.tokens[tr->input] == 0) throw NotEnabledError("transition '" + t + "' is not enabled");
  Marking next = marking;
  next.tokens[tr->input] -= 1;
  next.tokens[tr->output] += 1;
  return next;
}

StepResult step(const PetriNet& net, const Marking& marking, const InteractionEvent& event,
                const SceneSnapshot& scene, const OracleRegistry& registry,
                const VerifyContext& context) {
  StepResult result{marking, std::nullopt, std::nullopt};
  if (marking.tokens.size() != net.places().size()) {
    throw std::invalid_argument("marking does not match the net's places");
  }
  for (const auto& t : net.transitions()) {
    if (marking.tokens[t.input] == 0) continue;
    if (!registry.accepts(t.sensor, event)) continue;
    result.marking = fire(net, marking, t.id);
    result.fired = t.id;
    VerifyContext ctx = context;
    ctx.site = Location{LocationScope::oracle,
                        context.site.id.empty() ? t.id : context.site.id + "/" + t.id};
    result.verdict = verify(registry, t.effector, event, scene, ctx);
    break;
  }
  return result;
}

}  // namespace scenetest
