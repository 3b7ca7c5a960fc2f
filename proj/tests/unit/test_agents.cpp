#include <gtest/gtest.h>

#include "scenetest/agents.hpp"
#include "scenetest/scene_io.hpp"

using namespace scenetest;

namespace {

Scene golden() { return load_scene_file(SCENETEST_FIXTURES "/scenes/golden.json"); }

AgentConfig config_for(Behavior b, std::size_t slots) {
  return AgentConfig{std::string(to_string(b)), b, std::vector<InteractionKind>(slots, kind_of(b)), {}};
}

}  // namespace

TEST(Rng, MatchesStandardEngine) {
  // The C++ standard fixes the 10000th output of a default-seeded mt19937_64.
  Rng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next();
  EXPECT_EQ(v, 9981545732273789042ull);
  EXPECT_EQ(rng.draws(), 10000u);
}

TEST(Rng, UniformRangesAndCounters) {
  Rng rng(1);
  const auto before = Rng::total_draws();
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.index(7), 7u);
  }
  EXPECT_EQ(Rng::total_draws() - before, 2000u);
  EXPECT_NE(derive_seed(7, 0), derive_seed(7, 1));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
  EXPECT_NE(derive_seed(7, 0), derive_seed(8, 0));
}

TEST(Agents, ParameterValidation) {
  AgentParameters p;
  EXPECT_NO_THROW(validate_parameters(p));
  p.hand_radius = 0;
  EXPECT_THROW(validate_parameters(p), ConfigError);
  p = {};
  p.teleport_attempts = 0;
  EXPECT_THROW(validate_parameters(p), ConfigError);
  p = {};
  p.delay = -1;
  EXPECT_THROW(validate_parameters(p), ConfigError);
}

TEST(Agents, ValidateAgentChecksNetAgainstBehavior) {
  const PetriNet tp = build_net(default_net_spec(Behavior::simple_teleportation));
  EXPECT_NO_THROW(validate_agent(config_for(Behavior::simple_teleportation, 3), tp, OracleRegistry::builtin()));
  EXPECT_THROW(validate_agent(config_for(Behavior::object_grabbing, 3), tp, OracleRegistry::builtin()), ConfigError);
  EXPECT_THROW(validate_agent(config_for(Behavior::simple_teleportation, 0), tp, OracleRegistry::builtin()),
               ConfigError);
}

TEST(Agents, DefaultNets) {
  const auto tp = default_net_spec(Behavior::simple_teleportation);
  EXPECT_EQ(tp.places.size(), 3u);
  EXPECT_EQ(tp.transitions.size(), 3u);
  for (const auto b : kAllBehaviors) {
    const auto spec = default_net_spec(b);
    EXPECT_NO_THROW(validate_bindings(build_net(spec), OracleRegistry::builtin()));
    EXPECT_EQ(spec.transitions[0].effector.kind, effector_of(b));
  }
}

TEST(Agents, EligibleTargetsFollowCapabilities) {
  Scene s = golden();
  s.objects["book"].interactive.movable = false;
  s.objects["cup"].collider.reset();
  const auto cat = scan(s, ScanConfig{});
  const auto movers = eligible_targets(Behavior::object_movement, cat, s);
  EXPECT_EQ(std::count(movers.begin(), movers.end(), "book"), 0);
  EXPECT_TRUE(std::is_sorted(movers.begin(), movers.end()));
  const auto colliders = eligible_targets(Behavior::collision, cat, s);
  EXPECT_EQ(std::count(colliders.begin(), colliders.end(), "book"), 0);
  const auto selectable = eligible_targets(Behavior::object_selection, cat, s);
  EXPECT_EQ(std::count(selectable.begin(), selectable.end(), "book"), 1);
}

TEST(Agents, ObjectBehaviorsRoundRobin) {
  const Scene s = golden();
  const auto cat = scan(s, ScanConfig{});
  Rng rng(3);
  const auto first = generate_parameters(Behavior::object_selection, 0, cat, s, {}, rng);
  const auto wrap = generate_parameters(Behavior::object_selection, cat.size(), cat, s, {}, rng);
  ASSERT_TRUE(first && wrap);
  EXPECT_EQ(first->target, "book");
  EXPECT_EQ(wrap->target, "book");
  EXPECT_EQ(rng.draws(), 0u);

  const auto mv = generate_parameters(Behavior::object_movement, 1, cat, s, {}, rng);
  EXPECT_EQ(mv->params.destination, s.bounds.center());
  const auto col = generate_parameters(Behavior::collision, 0, cat, s, {}, rng);
  ASSERT_TRUE(col);
  EXPECT_TRUE(col->params.partner);
  EXPECT_EQ(col->params.destination, s.objects.at(*col->params.partner).position);

  ObjectCatalog empty;
  EXPECT_FALSE(generate_parameters(Behavior::object_grabbing, 0, empty, s, {}, rng));
  EXPECT_FALSE(generate_parameters(Behavior::teleportation_into_objects, 0, empty, s, {}, rng));
}

TEST(Agents, TeleportSamplesRespectTheirRegion) {
  const Scene s = golden();
  const auto cat = scan(s, ScanConfig{});
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto simple = generate_parameters(Behavior::simple_teleportation, 0, cat, s, {}, rng);
    ASSERT_TRUE(simple);
    const Vec3 d = *simple->params.destination;
    EXPECT_TRUE(s.bounds.contains(d));
    EXPECT_GE(distance(d, s.avatar.position), 0.5);
    EXPECT_FALSE(collider_containing(s, d));

    const auto oob = generate_parameters(Behavior::teleportation_outside_scene_bounds, 0, cat, s, {}, rng);
    EXPECT_FALSE(s.bounds.contains(*oob->params.destination));

    const auto into = generate_parameters(Behavior::teleportation_into_objects, 0, cat, s, {}, rng);
    ASSERT_TRUE(into);
    EXPECT_TRUE(collider_containing(s, *into->params.destination));
    EXPECT_TRUE(s.bounds.contains(*into->params.destination));
  }
}

TEST(Agents, ImpossibleTeleportThresholdIsSamplingError) {
  const Scene s = golden();
  const auto cat = scan(s, ScanConfig{});
  AgentParameters p;
  p.teleport_threshold = 1000;
  Rng rng(1);
  EXPECT_THROW(generate_parameters(Behavior::simple_teleportation, 0, cat, s, p, rng), SamplingError);
}

TEST(Agents, ExecuteApproachesOutOfReachTargets) {
  const Scene s = golden();
  InteractionEvent grab;
  grab.kind = InteractionKind::grab;
  grab.actor = "g";
  grab.target = "lamp";
  grab.params.probe_radius = 0.5;
  const auto r = execute_interaction(s, grab, 0.5);
  EXPECT_EQ(r.outcome.status, OutcomeStatus::applied);
  ASSERT_TRUE(r.params_used.approach);
  EXPECT_EQ(r.scene.avatar.held_object, "lamp");
  // Replaying the recorded approach reproduces the same scene.
  InteractionEvent again = grab;
  again.params = r.params_used;
  EXPECT_EQ(snapshot(execute_interaction(s, again, 0.5).scene), snapshot(r.scene));
}

TEST(Agents, FaultsAndIllegalEventsBecomeOutcomes) {
  Scene s = golden();
  s.objects["lamp"].hooks.push_back({HookTrigger::on_grab, RaiseFault{FaultKind::null_reference}});
  InteractionEvent grab;
  grab.kind = InteractionKind::grab;
  grab.actor = "g";
  grab.target = "lamp";
  const auto r = execute_interaction(s, grab, 0.5);
  EXPECT_EQ(r.outcome.status, OutcomeStatus::fault);
  EXPECT_EQ(r.outcome.fault, FaultKind::null_reference);
  EXPECT_EQ(r.outcome.site->object, "lamp");

  InteractionEvent bogus = grab;
  bogus.target = "wall";  // scenery: not grabbable
  EXPECT_EQ(execute_interaction(s, bogus, 0.5).outcome.status, OutcomeStatus::illegal);
}

TEST(Agents, RunAgentHonoursDeadlineAndNotes) {
  const Scene s = golden();
  const auto cat = scan(s, ScanConfig{});
  const PetriNet net = build_net(default_net_spec(Behavior::object_selection));
  Rng rng(1);
  RunOptions opt;
  opt.deadline = 3.5;
  const auto trace = run_agent(s, config_for(Behavior::object_selection, 10), cat, net, rng, opt);
  EXPECT_EQ(trace.steps.size(), 4u);
  EXPECT_EQ(trace.stop, StopReason::budget);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) EXPECT_EQ(trace.steps[i].request.sequence_index, i);

  ObjectCatalog empty;
  Rng rng2(1);
  const auto idle = run_agent(s, config_for(Behavior::object_grabbing, 3), empty,
                              build_net(default_net_spec(Behavior::object_grabbing)), rng2);
  EXPECT_TRUE(idle.steps.empty());
  EXPECT_EQ(idle.notes.size(), 3u);
  EXPECT_EQ(idle.final_scene.clock, s.clock);
  EXPECT_EQ(idle.stop, StopReason::completed);
}

TEST(Agents, StopOnCrash) {
  Scene s = golden();
  s.objects["book"].hooks.push_back({HookTrigger::on_select, RaiseFault{FaultKind::null_reference}});
  const auto cat = scan(s, ScanConfig{});
  const PetriNet net = build_net(default_net_spec(Behavior::object_selection));
  Rng rng(1);
  RunOptions opt;
  opt.stop_on_crash = true;
  const auto trace = run_agent(s, config_for(Behavior::object_selection, 5), cat, net, rng, opt);
  EXPECT_EQ(trace.stop, StopReason::crash);
  EXPECT_EQ(trace.steps.size(), 1u);
  EXPECT_EQ(origin_of("sel", 4), "sel#4");
}
