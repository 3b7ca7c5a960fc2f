#include <gtest/gtest.h>

#include "scenetest/oracle.hpp"

using namespace scenetest;

namespace {

Scene box_room() {
  Scene s;
  s.bounds = {{0, 0, 0}, {10, 3, 10}};
  s.avatar.position = {5, 0, 5};
  SceneObject cube;
  cube.id = "cube";
  cube.position = {8, 1, 8};
  cube.collider = Collider::box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
  cube.interactive = {true, true, true};
  s.objects.emplace("cube", cube);
  return s;
}

const InteractionKind kTeleport[] = {InteractionKind::teleport};
const InteractionKind kGrab[] = {InteractionKind::grab};

InteractionEvent event(InteractionKind kind) {
  InteractionEvent e;
  e.kind = kind;
  e.actor = "a";
  return e;
}

}  // namespace

TEST(Detect, TeleportThreshold) {
  Scene a = box_room();
  Scene b = a;
  b.avatar.position = {5, 0, 0};  // moved 5.0
  const auto e = detect(snapshot(a), snapshot(b), kTeleport);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->kind, InteractionKind::teleport);
  b.avatar.position = {5.1, 0, 5};  // moved 0.1
  EXPECT_FALSE(detect(snapshot(a), snapshot(b), kTeleport));
  EXPECT_TRUE(detect(snapshot(a), snapshot(b), kTeleport, DetectOptions{0.05}));
}

TEST(Detect, IdleToGrabbed) {
  Scene a = box_room();
  Scene b = a;
  b.objects["cube"].state = ObjectState::grabbed;
  b.avatar.held_object = "cube";
  const auto e = detect(snapshot(a), snapshot(b), kGrab);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->kind, InteractionKind::grab);
  EXPECT_EQ(e->target, "cube");
  EXPECT_FALSE(detect(snapshot(a), snapshot(a), kGrab));
}

TEST(Detect, FirstExpectedKindWins) {
  Scene a = box_room();
  Scene b = a;
  b.avatar.position = {1, 0, 1};
  b.objects["cube"].state = ObjectState::grabbed;
  b.avatar.held_object = "cube";
  const InteractionKind order[] = {InteractionKind::grab, InteractionKind::teleport};
  EXPECT_EQ(detect(snapshot(a), snapshot(b), order)->kind, InteractionKind::grab);
}

TEST(Verify, TeleportInBounds) {
  Scene s = box_room();
  s.avatar.position = {2, 0, 2};
  const auto prev = snapshot(box_room());
  auto v = verify(OracleRegistry::builtin(), {"in_bounds", {}}, event(InteractionKind::teleport), snapshot(s),
                  {s.expected, &prev, {LocationScope::oracle, "tp/T0"}, "tp#0"});
  EXPECT_EQ(v.status, VerdictStatus::pass);
  EXPECT_FALSE(v.failure);

  s.avatar.position = {8, 1, 8};  // inside the cube
  v = verify(OracleRegistry::builtin(), {"in_bounds", {}}, event(InteractionKind::teleport), snapshot(s),
             {s.expected, &prev, {LocationScope::oracle, "tp/T0"}, "tp#0"});
  EXPECT_EQ(v.status, VerdictStatus::fail);
}

TEST(Verify, MissingClampIsAssertionAtOracle) {
  const Scene before = box_room();
  Scene s = before;
  s.avatar.position = {-1, 0, 2};
  auto e = event(InteractionKind::teleport_out_of_bounds);
  e.params.destination = Vec3{-1, 0, 2};
  const auto prev = snapshot(before);
  const auto v = verify(OracleRegistry::builtin(), {"out_of_bounds_handled", {}}, e, snapshot(s),
                        {ExpectedBehavior{}, &prev, {LocationScope::oracle, "oob/T0"}, "oob#3"});
  ASSERT_EQ(v.status, VerdictStatus::fail);
  ASSERT_TRUE(v.failure);
  EXPECT_EQ(v.failure->category, FailureCategory::assertion_violation);
  EXPECT_EQ(v.failure->site, (Location{LocationScope::oracle, "oob/T0"}));
  EXPECT_EQ(v.failure->origin, "oob#3");

  s.avatar.position = {0, 0, 2};
  EXPECT_EQ(verify(OracleRegistry::builtin(), {"out_of_bounds_handled", {}}, e, snapshot(s),
                   {ExpectedBehavior{}, &prev, {LocationScope::oracle, "oob/T0"}, "oob#3"})
                .status,
            VerdictStatus::pass);
}

TEST(Verify, MoveTolerance) {
  Scene s = box_room();
  const Vec3 mid = s.bounds.center();
  auto e = event(InteractionKind::move);
  e.target = "cube";
  e.params.destination = mid;
  s.objects["cube"].position = mid + Vec3{1e-9, 0, 0};
  const VerifyContext ctx{s.expected, nullptr, {LocationScope::oracle, "mv/T0"}, "mv#0"};
  EXPECT_EQ(verify(OracleRegistry::builtin(), {"at_destination", {}}, e, snapshot(s), ctx).status, VerdictStatus::pass);
  s.objects["cube"].position = mid + Vec3{1e-3, 0, 0};
  EXPECT_EQ(verify(OracleRegistry::builtin(), {"at_destination", {}}, e, snapshot(s), ctx).status, VerdictStatus::fail);
}

TEST(Verify, EffectorInternalErrorIsDependencyCrash) {
  const Scene s = box_room();
  auto e = event(InteractionKind::teleport_out_of_bounds);  // no destination, no previous snapshot
  const VerifyContext ctx{s.expected, nullptr, {LocationScope::oracle, "oob/T0"}, "oob#0"};
  const auto v = verify(OracleRegistry::builtin(), {"out_of_bounds_handled", {}}, e, snapshot(s), ctx);
  ASSERT_TRUE(v.failure);
  EXPECT_EQ(v.failure->category, FailureCategory::dependency_crash);
  EXPECT_EQ(v.failure->site, ctx.site);

  const auto unknown = verify(OracleRegistry::builtin(), {"no_such_effector", {}}, e, snapshot(s), ctx);
  EXPECT_EQ(unknown.failure->category, FailureCategory::dependency_crash);
}

TEST(Registry, CustomKindsAndUnknownSensor) {
  OracleRegistry r = OracleRegistry::with_builtins();
  r.add_effector("always_fails", [](const InteractionEvent&, const SceneSnapshot&, const VerifyContext&,
                                    const OracleArgs&) { return CheckResult{false, "nope"}; });
  EXPECT_TRUE(r.effector("always_fails"));
  EXPECT_FALSE(OracleRegistry::builtin().effector("always_fails"));
  EXPECT_THROW(r.accepts({"bogus", {}}, event(InteractionKind::grab)), ConfigError);
  EXPECT_TRUE(r.accepts({"interaction", {{"kinds", "select,grab"}}}, event(InteractionKind::grab)));
  EXPECT_FALSE(r.accepts({"interaction", {{"kinds", "select"}}}, event(InteractionKind::grab)));
  EXPECT_TRUE(r.accepts({"any", {}}, event(InteractionKind::collide)));
}

TEST(Classify, Table) {
  RawOutcome o;
  o.status = OutcomeStatus::fault;
  o.fault = FaultKind::null_reference;
  o.site = HookSite{"lamp", HookTrigger::on_grab, 0};
  const Failure f = classify(o, "grabber#2");
  EXPECT_EQ(f.category, FailureCategory::application_crash);
  EXPECT_EQ(f.site, (Location{LocationScope::object, "lamp"}));
  EXPECT_EQ(f.origin, "grabber#2");

  EXPECT_EQ(category_of(FaultKind::object_not_found), FailureCategory::application_crash);
  EXPECT_EQ(category_of(FaultKind::dependency_error), FailureCategory::dependency_crash);

  RawOutcome ok;
  EXPECT_THROW(classify(ok, "x"), std::invalid_argument);
  Verdict pass;
  EXPECT_THROW(classify(pass), std::invalid_argument);
}

TEST(Dedup, SameFaultSevenTimes) {
  std::vector<Failure> fs;
  for (int i = 0; i < 7; ++i) {
    fs.push_back({FailureCategory::application_crash, {LocationScope::object, "lamp"}, "npe", "g#" + std::to_string(i), {}});
  }
  const auto u = dedup(fs);
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(u[0].count, 7u);
  EXPECT_EQ(u[0].first_origin, "g#0");
}

TEST(Dedup, TwoObjectsAndMergeIdempotent) {
  const std::vector<Failure> fs = {
      {FailureCategory::application_crash, {LocationScope::object, "lamp"}, "a", "x#0", {}},
      {FailureCategory::application_crash, {LocationScope::object, "mug"}, "b", "x#1", {}},
      {FailureCategory::assertion_violation, {LocationScope::object, "lamp"}, "c", "x#2", {}},
      {FailureCategory::application_crash, {LocationScope::object, "lamp"}, "d", "x#3", {}},
  };
  const auto u = dedup(fs);
  ASSERT_EQ(u.size(), 3u);
  EXPECT_EQ(dedup(std::span<const UniqueFailure>(u)), u);
  std::size_t total = 0;
  for (const auto& g : u) total += g.count;
  EXPECT_EQ(total, fs.size());
}

TEST(Names, RoundTrip) {
  for (const auto c : {FailureCategory::application_crash, FailureCategory::dependency_crash,
                       FailureCategory::assertion_violation}) {
    EXPECT_EQ(parse_failure_category(to_string(c)), c);
  }
  EXPECT_EQ(display_name(FailureCategory::dependency_crash), "Dependency crash");
  EXPECT_EQ(parse_location_scope("scanner"), LocationScope::scanner);
  EXPECT_THROW(parse_failure_category("meltdown"), ParseError);
}
