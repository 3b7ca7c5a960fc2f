#include "scenetest/scene_io.hpp"

#include "scenetest/canonical.hpp"
#include "scenetest/json_io.hpp"

namespace scenetest {

namespace {

BehaviorHook hook_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  BehaviorHook hook;
  hook.trigger = parse_hook_trigger(obj.string("trigger"));
  const auto set_state = obj.optional_string("set_state");
  const auto marker = obj.optional_string("emit_marker");
  const auto fault = obj.optional_string("fault");
  obj.finish();
  const int reactions = int(set_state.has_value()) + int(marker.has_value()) + int(fault.has_value());
  if (reactions != 1) {
    throw ParseError(where + " needs exactly one of 'set_state', 'emit_marker' or 'fault'");
  }
  if (set_state) hook.reaction = SetState{parse_object_state(*set_state)};
  if (marker) hook.reaction = EmitMarker{*marker};
  if (fault) hook.reaction = RaiseFault{parse_fault_kind(*fault)};
  return hook;
}

json hook_to_json(const BehaviorHook& h) {
  json j{{"trigger", to_string(h.trigger)}};
  if (const auto* s = std::get_if<SetState>(&h.reaction)) j["set_state"] = to_string(s->state);
  if (const auto* m = std::get_if<EmitMarker>(&h.reaction)) j["emit_marker"] = m->label;
  if (const auto* f = std::get_if<RaiseFault>(&h.reaction)) j["fault"] = to_string(f->kind);
  return j;
}

std::vector<std::string> string_list(const json* j, const std::string& where) {
  std::vector<std::string> out;
  if (!j) return out;
  if (!j->is_array()) throw ParseError(where + " must be an array");
  for (std::size_t i = 0; i < j->size(); ++i) {
    out.push_back(as_string((*j)[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

SceneObject object_from_json(const json& j, const std::string& where) {
  StrictObject obj(j, where);
  SceneObject o;
  o.id = obj.string("id");
  o.position = vec3_from_json(obj.required("position"), obj.at("position"));
  if (const json* c = obj.optional("collider")) o.collider = collider_from_json(*c, obj.at("collider"));
  for (const auto& flag : string_list(obj.optional("interactive"), obj.at("interactive"))) {
    if (flag == "selectable") o.interactive.selectable = true;
    else if (flag == "grabbable") o.interactive.grabbable = true;
    else if (flag == "movable") o.interactive.movable = true;
    else throw ParseError(obj.at("interactive") + ": unknown flag '" + flag + "'");
  }
  if (const json* hooks = obj.optional("hooks")) {
    if (!hooks->is_array()) throw ParseError(obj.at("hooks") + " must be an array");
    for (std::size_t i = 0; i < hooks->size(); ++i) {
      o.hooks.push_back(hook_from_json((*hooks)[i], obj.at("hooks") + "[" + std::to_string(i) + "]"));
    }
  }
  o.refs = string_list(obj.optional("refs"), obj.at("refs"));
  obj.finish();
  return o;
}

}  // namespace

Scene load_scene(const std::string& text) {
  const json doc = parse_json(text, "scene file");
  StrictObject root(doc, "scene");
  Scene scene;
  root.optional_string("name");

  {
    StrictObject b(root.required("bounds"), "scene.bounds");
    scene.bounds.min = vec3_from_json(b.required("min"), b.at("min"));
    scene.bounds.max = vec3_from_json(b.required("max"), b.at("max"));
    b.finish();
  }
  {
    StrictObject a(root.required("avatar"), "scene.avatar");
    scene.avatar.position = vec3_from_json(a.required("position"), a.at("position"));
    scene.avatar.hand_radius = a.optional_number("hand_radius").value_or(scene.avatar.hand_radius);
    a.finish();
  }
  if (const json* behavior = root.optional("behavior")) {
    StrictObject b(*behavior, "scene.behavior");
    if (auto v = b.optional_string("out_of_bounds")) scene.behavior.out_of_bounds = parse_out_of_bounds(*v);
    if (auto v = b.optional_string("into_object")) scene.behavior.into_object = parse_into_object(*v);
    if (const json* off = b.optional("teleport_offset")) {
      scene.behavior.teleport_offset = vec3_from_json(*off, b.at("teleport_offset"));
    }
    if (auto v = b.optional_string("release")) scene.behavior.release = parse_release(*v);
    b.finish();
  }
  if (const json* expected = root.optional("expected")) {
    scene.expected = expected_from_json(*expected, "scene.expected");
  }

  const json& objects = root.required("objects");
  if (!objects.is_array()) throw ParseError("scene.objects must be an array");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    SceneObject o = object_from_json(objects[i], "scene.objects[" + std::to_string(i) + "]");
    if (o.id.empty()) throw ValidationError("scene.objects[" + std::to_string(i) + "] has an empty id");
    const std::string id = o.id;
    if (!scene.objects.emplace(id, std::move(o)).second) {
      throw ValidationError("duplicate object id '" + id + "'");
    }
  }
  root.finish();

  validate_scene(scene);
  scene.digest = digest_of(doc);
  return scene;
}

Scene load_scene_file(const std::string& path) { return load_scene(read_file(path)); }

json scene_to_json(const Scene& scene) {
  json objects = json::array();
  for (const auto& [id, o] : scene.objects) {
    json flags = json::array();
    if (o.interactive.selectable) flags.push_back("selectable");
    if (o.interactive.grabbable) flags.push_back("grabbable");
    if (o.interactive.movable) flags.push_back("movable");
    json hooks = json::array();
    for (const auto& h : o.hooks) hooks.push_back(hook_to_json(h));
    json jo{{"id", id}, {"position", to_json(o.position)}, {"interactive", flags}, {"hooks", hooks}, {"refs", o.refs}};
    if (o.collider) jo["collider"] = to_json(*o.collider);
    objects.push_back(std::move(jo));
  }
  return json{
      {"bounds", {{"min", to_json(scene.bounds.min)}, {"max", to_json(scene.bounds.max)}}},
      {"avatar", {{"position", to_json(scene.avatar.position)}, {"hand_radius", scene.avatar.hand_radius}}},
      {"behavior",
       {{"out_of_bounds", to_string(scene.behavior.out_of_bounds)},
        {"into_object", to_string(scene.behavior.into_object)},
        {"teleport_offset", to_json(scene.behavior.teleport_offset)},
        {"release", to_string(scene.behavior.release)}}},
      {"expected", to_json(scene.expected)},
      {"objects", objects},
  };
}

}  // namespace scenetest
