#include "scenetest/oracle.hpp"

#include <map>
#include <stdexcept>

#include "enum_names.hpp"

namespace scenetest {

namespace {

constexpr std::pair<FailureCategory, std::string_view> kCategoryNames[] = {
    {FailureCategory::application_crash, "application_crash"},
    {FailureCategory::dependency_crash, "dependency_crash"},
    {FailureCategory::assertion_violation, "assertion_violation"},
};

constexpr std::pair<FailureCategory, std::string_view> kCategoryDisplay[] = {
    {FailureCategory::application_crash, "Application crash"},
    {FailureCategory::dependency_crash, "Dependency crash"},
    {FailureCategory::assertion_violation, "Assertion violation"},
};

constexpr std::pair<LocationScope, std::string_view> kScopeNames[] = {
    {LocationScope::object, "object"},
    {LocationScope::hook, "hook"},
    {LocationScope::oracle, "oracle"},
    {LocationScope::scanner, "scanner"},
};

constexpr std::pair<VerdictStatus, std::string_view> kStatusNames[] = {
    {VerdictStatus::pass, "pass"},
    {VerdictStatus::fail, "fail"},
};

bool fresh_input(const SceneSnapshot& prev, const SceneSnapshot& curr, InteractionKind kind) {
  const auto& input = curr.avatar.last_input;
  return input.serial != prev.avatar.last_input.serial && input.kind == kind;
}

InteractionEvent make_event(InteractionKind kind, const SceneSnapshot& curr,
                            std::optional<std::string> target) {
  InteractionEvent e;
  e.kind = kind;
  e.target = std::move(target);
  e.timestamp = curr.clock;
  return e;
}

std::optional<InteractionEvent> detect_kind(InteractionKind kind, const SceneSnapshot& prev,
                                            const SceneSnapshot& curr, const DetectOptions& opt) {
  const auto& input = curr.avatar.last_input;
  switch (kind) {
    case InteractionKind::teleport: {
      if (distance(prev.avatar.position, curr.avatar.position) < opt.teleport_threshold) break;
      auto e = make_event(kind, curr, std::nullopt);
      e.params.destination = fresh_input(prev, curr, InteractionKind::teleport) && input.destination
                                 ? *input.destination
                                 : curr.avatar.position;
      return e;
    }
    case InteractionKind::teleport_out_of_bounds: {
      if (!fresh_input(prev, curr, InteractionKind::teleport) || !input.destination) break;
      if (curr.bounds.contains(*input.destination)) break;
      auto e = make_event(kind, curr, std::nullopt);
      e.params.destination = input.destination;
      return e;
    }
    case InteractionKind::teleport_into_object: {
      if (!fresh_input(prev, curr, InteractionKind::teleport) || !input.destination) break;
      const auto inside = prev.collider_containing(*input.destination);
      if (!inside) break;
      auto e = make_event(kind, curr, inside);
      e.params.destination = input.destination;
      return e;
    }
    case InteractionKind::select: {
      for (const auto& o : curr.objects) {
        const auto* before = prev.find(o.id);
        if (before && before->state == ObjectState::idle && o.state == ObjectState::selected) {
          return make_event(kind, curr, o.id);
        }
      }
      if (fresh_input(prev, curr, kind)) return make_event(kind, curr, input.target);
      break;
    }
    case InteractionKind::grab: {
      for (const auto& o : curr.objects) {
        const auto* before = prev.find(o.id);
        if (before && before->state != ObjectState::grabbed && o.state == ObjectState::grabbed &&
            curr.avatar.held_object == o.id) {
          return make_event(kind, curr, o.id);
        }
      }
      if (fresh_input(prev, curr, kind)) return make_event(kind, curr, input.target);
      break;
    }
    case InteractionKind::move: {
      if (const auto& held = prev.avatar.held_object) {
        const auto* before = prev.find(*held);
        const auto* after = curr.find(*held);
        if (before && after && before->position != after->position) {
          auto e = make_event(kind, curr, *held);
          e.params.destination = after->position;
          return e;
        }
      }
      if (fresh_input(prev, curr, kind)) {
        auto e = make_event(kind, curr, input.target);
        e.params.destination = input.destination;
        return e;
      }
      break;
    }
    case InteractionKind::collide: {
      if (!curr.contacts.empty()) {
        auto e = make_event(kind, curr, curr.contacts.front().moved);
        e.params.partner = curr.contacts.front().other;
        return e;
      }
      if (fresh_input(prev, curr, kind)) {
        auto e = make_event(kind, curr, input.target);
        e.params.destination = input.destination;
        return e;
      }
      break;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<InteractionEvent> detect(const SceneSnapshot& previous, const SceneSnapshot& current,
                                       std::span<const InteractionKind> expected,
                                       const DetectOptions& options) {
  for (const auto kind : expected) {
    if (auto e = detect_kind(kind, previous, current, options)) return e;
  }
  return std::nullopt;
}

Verdict verify(const OracleRegistry& registry, const EffectorSpec& effector,
               const InteractionEvent& event, const SceneSnapshot& current,
               const VerifyContext& context) {
  Verdict v;
  v.interaction = event;
  auto fail = [&](FailureCategory category, std::string message) {
    v.status = VerdictStatus::fail;
    v.message = message;
    v.failure = Failure{category, context.site, std::move(message), context.origin, std::nullopt};
    return v;
  };

  const auto* fn = registry.effector(effector.kind);
  if (!fn) return fail(FailureCategory::dependency_crash, "unregistered effector '" + effector.kind + "'");
  try {
    const CheckResult result = (*fn)(event, current, context, effector.args);
    if (!result.ok) return fail(FailureCategory::assertion_violation, result.message);
    v.message = result.message;
    return v;
  } catch (const EffectorInternalError& e) {
    return fail(FailureCategory::dependency_crash, std::string("effector error: ") + e.what());
  }
}

FailureCategory category_of(FaultKind kind) {
  return kind == FaultKind::dependency_error ? FailureCategory::dependency_crash
                                             : FailureCategory::application_crash;
}

Failure classify(const RawOutcome& outcome, std::string origin) {
  if (outcome.status != OutcomeStatus::fault || !outcome.fault) {
    throw std::invalid_argument("classify: outcome '" + std::string(to_string(outcome.status)) +
                                "' is not a failure");
  }
  Failure f;
  f.category = category_of(*outcome.fault);
  f.site = Location{LocationScope::object, outcome.site ? outcome.site->object : std::string()};
  f.detail = outcome.message.empty() ? std::string(to_string(*outcome.fault)) : outcome.message;
  f.origin = std::move(origin);
  f.fault = outcome.fault;
  return f;
}

Failure classify(const Verdict& verdict) {
  if (verdict.status != VerdictStatus::fail || !verdict.failure) {
    throw std::invalid_argument("classify: verdict is not a failure");
  }
  return *verdict.failure;
}

std::vector<UniqueFailure> dedup(std::span<const Failure> failures) {
  std::vector<UniqueFailure> groups;
  groups.reserve(failures.size());
  for (const auto& f : failures) groups.push_back({f.category, f.site, 1, f.origin, f.detail});
  return dedup(std::span<const UniqueFailure>(groups));
}

std::vector<UniqueFailure> dedup(std::span<const UniqueFailure> groups) {
  std::map<std::pair<FailureCategory, Location>, UniqueFailure> merged;
  for (const auto& g : groups) {
    auto [it, inserted] = merged.try_emplace({g.category, g.site}, g);
    if (!inserted) it->second.count += g.count;
  }
  std::vector<UniqueFailure> out;
  out.reserve(merged.size());
  for (auto& [key, g] : merged) out.push_back(std::move(g));
  return out;
}

std::string_view to_string(FailureCategory c) { return detail::name_of(kCategoryNames, c); }
std::string_view display_name(FailureCategory c) { return detail::name_of(kCategoryDisplay, c); }
std::string_view to_string(LocationScope s) { return detail::name_of(kScopeNames, s); }
std::string_view to_string(VerdictStatus s) { return detail::name_of(kStatusNames, s); }

FailureCategory parse_failure_category(std::string_view text) {
  return detail::value_of(kCategoryNames, text, "failure category");
}
LocationScope parse_location_scope(std::string_view text) {
  return detail::value_of(kScopeNames, text, "location scope");
}
VerdictStatus parse_verdict_status(std::string_view text) {
  return detail::value_of(kStatusNames, text, "verdict status");
}

}  // namespace scenetest
