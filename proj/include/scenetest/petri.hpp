#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenetest/oracle.hpp"

namespace scenetest {

/// Unvalidated net description, as read from a net file.
struct NetSpec {
  struct TransitionSpec {
    std::string id;
    std::vector<std::string> from;
    std::vector<std::string> to;
    SensorSpec sensor;
    EffectorSpec effector;

    friend bool operator==(const TransitionSpec&, const TransitionSpec&) = default;
  };

  std::string name;
  std::vector<std::string> places;
  std::vector<TransitionSpec> transitions;
  std::string initial_place;

  friend bool operator==(const NetSpec&, const NetSpec&) = default;
};

struct Transition {
  std::string id;
  std::size_t input = 0;   // place index
  std::size_t output = 0;  // place index
  SensorSpec sensor;
  EffectorSpec effector;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Token count per place, indexed like PetriNet::places().
struct Marking {
  std::vector<unsigned> tokens;

  friend bool operator==(const Marking&, const Marking&) = default;

  unsigned total() const;
};

/// Validated one-token state-machine net. Immutable after build_net.
class PetriNet {
 public:
  const std::string& name() const { return name_; }
  const std::vector<std::string>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  std::size_t initial_place() const { return initial_; }
  Marking initial_marking() const;

  std::size_t place_index(const std::string& id) const;  // throws std::out_of_range
  const Transition* find(const std::string& transition_id) const;
  const NetSpec& spec() const { return spec_; }

 private:
  friend PetriNet build_net(const NetSpec& spec);

  std::string name_;
  std::vector<std::string> places_;
  std::vector<Transition> transitions_;
  std::size_t initial_ = 0;
  NetSpec spec_;
};

/// Throws NetValidationError naming the offending element.
PetriNet build_net(const NetSpec& spec);

/// Throws NetValidationError for sensor/effector kinds absent from the registry.
void validate_bindings(const PetriNet& net, const OracleRegistry& registry);

/// Throws ParseError for malformed descriptions. "from"/"to" may be a string
/// or an array of strings; sensor/effector may be a kind string or
/// {"kind": ..., "args": {...}}.
NetSpec parse_net_spec(const nlohmann::json& j);
NetSpec parse_net_spec(const std::string& text);
nlohmann::json to_json(const NetSpec& spec);

/// Transitions whose input place holds a token, in declaration order.
std::vector<std::string> enabled(const PetriNet& net, const Marking& marking);

/// Throws NotEnabledError when t is not enabled, std::invalid_argument for an
/// unknown id or a marking of the wrong shape.
Marking fire(const PetriNet& net, const Marking& marking, const std::string& t);

struct StepResult {
  Marking marking;
  std::optional<std::string> fired;
  std::optional<Verdict> verdict;
};

/// Fires the first enabled transition whose sensor accepts the event and runs
/// its effector. context.site.id is used as a prefix of the oracle location
/// ("<prefix>/<transition>").
StepResult step(const PetriNet& net, const Marking& marking, const InteractionEvent& event,
                const SceneSnapshot& scene, const OracleRegistry& registry,
                const VerifyContext& context);

}  // namespace scenetest
