#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "scenetest/interaction.hpp"
#include "scenetest/oracle.hpp"
#include "scenetest/scene.hpp"

namespace scenetest {

using nlohmann::json;

/// Parses JSON text, converting library errors into ParseError.
json parse_json(const std::string& text, const std::string& what);
std::string read_file(const std::string& path);

/// Reads an object field by field and rejects keys that were never asked for.
class StrictObject {
 public:
  StrictObject(const json& j, std::string where);

  const json* optional(const std::string& key);
  const json& required(const std::string& key);

  std::string string(const std::string& key);
  std::optional<std::string> optional_string(const std::string& key);
  double number(const std::string& key);
  std::optional<double> optional_number(const std::string& key);
  std::uint64_t uint(const std::string& key);
  std::optional<std::uint64_t> optional_uint(const std::string& key);
  bool boolean(const std::string& key);
  std::optional<bool> optional_boolean(const std::string& key);

  const std::string& where() const { return where_; }
  std::string at(const std::string& key) const { return where_ + "." + key; }

  /// Throws ParseError naming the first unread key.
  void finish() const;

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> read_;
};

double as_number(const json& j, const std::string& where);  // finite
std::uint64_t as_uint(const json& j, const std::string& where);
std::string as_string(const json& j, const std::string& where);

json to_json(const Vec3& v);
Vec3 vec3_from_json(const json& j, const std::string& where);

json to_json(const Collider& c);
Collider collider_from_json(const json& j, const std::string& where);

json to_json(const InteractionEvent& e);
InteractionEvent event_from_json(const json& j, const std::string& where);

json to_json(const HookSite& s);
HookSite hook_site_from_json(const json& j, const std::string& where);

json to_json(const RawOutcome& o);
RawOutcome outcome_from_json(const json& j, const std::string& where);

json to_json(const Location& l);
Location location_from_json(const json& j, const std::string& where);

json to_json(const Failure& f);
Failure failure_from_json(const json& j, const std::string& where);

json to_json(const Verdict& v);
Verdict verdict_from_json(const json& j, const std::string& where);

json to_json(const UniqueFailure& u);
UniqueFailure unique_failure_from_json(const json& j, const std::string& where);

json to_json(const ExpectedBehavior& e);
ExpectedBehavior expected_from_json(const json& j, const std::string& where);

}  // namespace scenetest
