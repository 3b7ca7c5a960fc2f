#include "scenetest/interaction.hpp"

#include "enum_names.hpp"

namespace scenetest {

namespace {

constexpr std::pair<InteractionKind, std::string_view> kKindNames[] = {
    {InteractionKind::teleport, "teleport"},
    {InteractionKind::teleport_out_of_bounds, "teleport_out_of_bounds"},
    {InteractionKind::teleport_into_object, "teleport_into_object"},
    {InteractionKind::select, "select"},
    {InteractionKind::grab, "grab"},
    {InteractionKind::move, "move"},
    {InteractionKind::collide, "collide"},
};

}  // namespace

std::string_view to_string(InteractionKind kind) { return detail::name_of(kKindNames, kind); }

InteractionKind parse_interaction_kind(std::string_view text) {
  return detail::value_of(kKindNames, text, "interaction kind");
}

bool is_teleport(InteractionKind kind) {
  return kind == InteractionKind::teleport || kind == InteractionKind::teleport_out_of_bounds ||
         kind == InteractionKind::teleport_into_object;
}

}  // namespace scenetest
