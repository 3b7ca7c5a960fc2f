#include "scenetest/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace scenetest {

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed " + what + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

StrictObject::StrictObject(const json& j, std::string where) : j_(j), where_(std::move(where)) {
  if (!j_.is_object()) throw ParseError(where_ + " must be an object");
}

const json* StrictObject::optional(const std::string& key) {
  read_.insert(key);
  const auto it = j_.find(key);
  if (it == j_.end() || it->is_null()) return nullptr;
  return &*it;
}

const json& StrictObject::required(const std::string& key) {
  const json* v = optional(key);
  if (!v) throw ParseError(where_ + " is missing '" + key + "'");
  return *v;
}

std::string StrictObject::string(const std::string& key) { return as_string(required(key), at(key)); }

std::optional<std::string> StrictObject::optional_string(const std::string& key) {
  const json* v = optional(key);
  if (!v) return std::nullopt;
  return as_string(*v, at(key));
}

double StrictObject::number(const std::string& key) { return as_number(required(key), at(key)); }

std::optional<double> StrictObject::optional_number(const std::string& key) {
  const json* v = optional(key);
  if (!v) return std::nullopt;
  return as_number(*v, at(key));
}

std::uint64_t StrictObject::uint(const std::string& key) { return as_uint(required(key), at(key)); }

std::optional<std::uint64_t> StrictObject::optional_uint(const std::string& key) {
  const json* v = optional(key);
  if (!v) return std::nullopt;
  return as_uint(*v, at(key));
}

bool StrictObject::boolean(const std::string& key) {
  const json& v = required(key);
  if (!v.is_boolean()) throw ParseError(at(key) + " must be a boolean");
  return v.get<bool>();
}

std::optional<bool> StrictObject::optional_boolean(const std::string& key) {
  const json* v = optional(key);
  if (!v) return std::nullopt;
  if (!v->is_boolean()) throw ParseError(at(key) + " must be a boolean");
  return v->get<bool>();
}

void StrictObject::finish() const {
  for (const auto& [key, value] : j_.items()) {
    if (!read_.count(key)) throw ParseError("unknown key '" + key + "' in " + where_);
  }
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(where + " must be finite");
  return v;
}

std::uint64_t as_uint(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
  throw ParseError(where + " must be a non-negative integer");
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + " must be a string");
  return j.get<std::string>();
}

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ParseError(where + " must be an array of 3 numbers");
  return {as_number(j[0], where + "[0]"), as_number(j[1], where + "[1]"), as_number(j[2], where + "[2]")};
}

json to_json(const Collider& c) {
  if (const auto* b = std::get_if<Aabb>(&c.shape)) {
    return json{{"box", {{"min", to_json(b->min)}, {"max", to_json(b->max)}}}};
  }
  const auto& s = std::get<Sphere>(c.shape);
  return json{{"sphere", {{"center", to_json(s.center)}, {"radius", s.radius}}}};
}

Collider collider_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  const json* box = obj.optional("box");
  const json* sphere = obj.optional("sphere");
  obj.finish();
  if ((box != nullptr) == (sphere != nullptr)) {
    throw ParseError(where + " must hold exactly one of 'box' or 'sphere'");
  }
  if (box) {
    StrictObject b(*box, where + ".box");
    Collider c = Collider::box(vec3_from_json(b.required("min"), b.at("min")),
                               vec3_from_json(b.required("max"), b.at("max")));
    b.finish();
    return c;
  }
  StrictObject s(*sphere, where + ".sphere");
  const json* center = s.optional("center");
  Collider c = Collider::sphere(center ? vec3_from_json(*center, s.at("center")) : Vec3{},
                                s.number("radius"));
  s.finish();
  return c;
}

json to_json(const InteractionEvent& e) {
  json params = json::object();
  if (e.params.destination) params["destination"] = to_json(*e.params.destination);
  if (e.params.probe_radius) params["probe_radius"] = *e.params.probe_radius;
  if (e.params.approach) params["approach"] = to_json(*e.params.approach);
  if (e.params.partner) params["partner"] = *e.params.partner;
  json j{{"kind", to_string(e.kind)},
         {"actor", e.actor},
         {"params", params},
         {"timestamp", e.timestamp},
         {"sequence_index", e.sequence_index}};
  if (e.target) j["target"] = *e.target;
  return j;
}

InteractionEvent event_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  InteractionEvent e;
  e.kind = parse_interaction_kind(obj.string("kind"));
  e.actor = obj.string("actor");
  e.target = obj.optional_string("target");
  e.timestamp = obj.number("timestamp");
  e.sequence_index = obj.uint("sequence_index");
  if (const json* p = obj.optional("params")) {
    StrictObject params(*p, obj.at("params"));
    if (const json* d = params.optional("destination")) e.params.destination = vec3_from_json(*d, params.at("destination"));
    e.params.probe_radius = params.optional_number("probe_radius");
    if (const json* a = params.optional("approach")) e.params.approach = vec3_from_json(*a, params.at("approach"));
    e.params.partner = params.optional_string("partner");
    params.finish();
  }
  obj.finish();
  return e;
}

json to_json(const HookSite& s) {
  return json{{"object", s.object}, {"trigger", to_string(s.trigger)}, {"index", s.index}};
}

HookSite hook_site_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  HookSite s{obj.string("object"), parse_hook_trigger(obj.string("trigger")), obj.uint("index")};
  obj.finish();
  return s;
}

json to_json(const RawOutcome& o) {
  json j{{"status", to_string(o.status)}, {"message", o.message}};
  if (o.fault) j["fault"] = to_string(*o.fault);
  if (o.site) j["site"] = to_json(*o.site);
  return j;
}

RawOutcome outcome_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  RawOutcome o;
  o.status = parse_outcome_status(obj.string("status"));
  o.message = obj.optional_string("message").value_or("");
  if (auto f = obj.optional_string("fault")) o.fault = parse_fault_kind(*f);
  if (const json* s = obj.optional("site")) o.site = hook_site_from_json(*s, obj.at("site"));
  obj.finish();
  return o;
}

json to_json(const Location& l) { return json{{"scope", to_string(l.scope)}, {"id", l.id}}; }

Location location_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  Location l{parse_location_scope(obj.string("scope")), obj.string("id")};
  obj.finish();
  return l;
}

json to_json(const Failure& f) {
  json j{{"category", to_string(f.category)},
         {"site", to_json(f.site)},
         {"detail", f.detail},
         {"origin", f.origin}};
  if (f.fault) j["fault"] = to_string(*f.fault);
  return j;
}

Failure failure_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  Failure f;
  f.category = parse_failure_category(obj.string("category"));
  f.site = location_from_json(obj.required("site"), obj.at("site"));
  f.detail = obj.string("detail");
  f.origin = obj.string("origin");
  if (auto k = obj.optional_string("fault")) f.fault = parse_fault_kind(*k);
  obj.finish();
  return f;
}

json to_json(const Verdict& v) {
  json j{{"status", to_string(v.status)}, {"interaction", to_json(v.interaction)}, {"message", v.message}};
  if (v.failure) j["failure"] = to_json(*v.failure);
  return j;
}

Verdict verdict_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  Verdict v;
  v.status = parse_verdict_status(obj.string("status"));
  v.interaction = event_from_json(obj.required("interaction"), obj.at("interaction"));
  v.message = obj.string("message");
  if (const json* f = obj.optional("failure")) v.failure = failure_from_json(*f, obj.at("failure"));
  obj.finish();
  if ((v.status == VerdictStatus::fail) != v.failure.has_value()) {
    throw ParseError(where + ": failure must be present exactly when status is fail");
  }
  return v;
}

json to_json(const UniqueFailure& u) {
  return json{{"category", to_string(u.category)},
              {"location", to_json(u.site)},
              {"count", u.count},
              {"first_occurrence", u.first_origin},
              {"detail", u.detail}};
}

UniqueFailure unique_failure_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  UniqueFailure u;
  u.category = parse_failure_category(obj.string("category"));
  u.site = location_from_json(obj.required("location"), obj.at("location"));
  u.count = obj.uint("count");
  u.first_origin = obj.string("first_occurrence");
  u.detail = obj.string("detail");
  obj.finish();
  return u;
}

json to_json(const ExpectedBehavior& e) {
  return json{{"out_of_bounds", to_string(e.out_of_bounds)}, {"into_object", to_string(e.into_object)}};
}

ExpectedBehavior expected_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  ExpectedBehavior e;
  if (auto v = obj.optional_string("out_of_bounds")) e.out_of_bounds = parse_out_of_bounds(*v);
  if (auto v = obj.optional_string("into_object")) e.into_object = parse_into_object(*v);
  obj.finish();
  if (e.out_of_bounds == OutOfBoundsHandling::accept || e.into_object == IntoObjectHandling::accept) {
    throw ValidationError(where + ": 'accept' is not a valid expected behavior");
  }
  return e;
}

}  // namespace scenetest
