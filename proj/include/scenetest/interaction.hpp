#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "scenetest/geometry.hpp"

namespace scenetest {

/// One row of the built-in interaction table. Closed set.
enum class InteractionKind {
  teleport,
  teleport_out_of_bounds,
  teleport_into_object,
  select,
  grab,
  move,
  collide,
};

inline constexpr std::array<InteractionKind, 7> kAllInteractionKinds = {
    InteractionKind::teleport,       InteractionKind::teleport_out_of_bounds,
    InteractionKind::teleport_into_object, InteractionKind::select,
    InteractionKind::grab,           InteractionKind::move,
    InteractionKind::collide,
};

std::string_view to_string(InteractionKind kind);
InteractionKind parse_interaction_kind(std::string_view text);

/// Teleport kinds carry a destination; the rest carry a target object.
bool is_teleport(InteractionKind kind);

/// Concrete values an interaction was performed with. Everything needed to
/// re-execute the interaction without consulting a random generator.
struct InteractionParams {
  std::optional<Vec3> destination;
  std::optional<double> probe_radius;
  std::optional<Vec3> approach;         // avatar repositioning performed before acting
  std::optional<std::string> partner;   // object a collide sweep was aimed at

  friend bool operator==(const InteractionParams&, const InteractionParams&) = default;
};

struct InteractionEvent {
  InteractionKind kind = InteractionKind::teleport;
  std::string actor;
  std::optional<std::string> target;
  InteractionParams params;
  double timestamp = 0.0;
  std::uint64_t sequence_index = 0;

  friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

}  // namespace scenetest
