#include <gtest/gtest.h>

#include "gen.hpp"
#include "scenetest/harness.hpp"
#include "scenetest/scene_io.hpp"

using namespace scenetest;

namespace {

// Random scene with every hook flavour except faults, plus random behaviour.
Scene random_scene(gen::Gen& g) {
  Scene s;
  s.bounds = {{0, 0, 0}, {16, 4, 16}};
  s.avatar.position = {8, 1.5, 8};
  const int n = g.integer(0, 14);
  for (int i = 0; i < n; ++i) {
    SceneObject o;
    o.id = "o" + std::to_string(i);
    o.collider = gen::collider(g, 0.5);
    o.position = g.point({{1, 1, 1}, {15, 3, 15}});
    if (contains_point(o.collider->translated(o.position), s.avatar.position)) continue;
    o.interactive = {g.coin(0.8), g.coin(0.8), g.coin(0.8)};
    if (g.coin(0.3)) o.hooks.push_back({HookTrigger::on_grab, EmitMarker{"m"}});
    if (g.coin(0.1)) o.hooks.push_back({HookTrigger::on_select, RaiseFault{FaultKind::null_reference}});
    s.objects.emplace(o.id, o);
  }
  s.behavior.out_of_bounds = g.coin() ? OutOfBoundsHandling::clamp : OutOfBoundsHandling::reject;
  s.expected.out_of_bounds = g.coin() ? OutOfBoundsHandling::clamp : OutOfBoundsHandling::reject;
  s.behavior.into_object = g.coin() ? IntoObjectHandling::reject : IntoObjectHandling::relocate;
  s.digest = "random";
  return s;
}

CampaignConfig all_agents(std::uint64_t seed) {
  CampaignConfig c;
  c.seed = seed;
  c.crash_policy = CrashPolicy::continue_campaign;
  for (const auto b : kAllBehaviors) {
    AgentSpec a;
    a.id = std::string(to_string(b));
    a.behavior = b;
    a.net = default_net_spec(b);
    a.params.teleport_attempts = 4;
    c.agents.push_back(a);
  }
  return c;
}

}  // namespace

TEST(CampaignProperty, ReplayNeverDivergesOnRandomScenes) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    gen::Gen g(seed);
    const Scene s = random_scene(g);
    const auto r = run_campaign(all_agents(seed), s);
    const auto rep = replay(s, r.test_case);
    EXPECT_FALSE(rep.divergence) << "seed " << seed;
    EXPECT_EQ(parse_test_case(serialize(r.test_case)), r.test_case);
  }
}

TEST(CampaignProperty, ReportInvariants) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    gen::Gen g(seed + 1000);
    const Scene s = random_scene(g);
    const auto r = run_campaign(all_agents(seed), s);
    const auto& rep = r.report;
    EXPECT_EQ(rep.unique_failures, dedup(r.failures));
    std::size_t sum = 0;
    for (const auto& u : rep.unique_failures) sum += u.count;
    EXPECT_EQ(sum, rep.total_failures);
    EXPECT_EQ(rep.exit_status, rep.total_failures > 0 ? 1 : 0);
    const auto& v = rep.verdicts;
    EXPECT_EQ(v.steps, r.test_case.steps.size());
    EXPECT_EQ(v.pass + v.fail + v.undetected + v.illegal + v.faults, v.steps);
    std::size_t agent_steps = 0;
    for (const auto& a : rep.agents) agent_steps += a.steps;
    EXPECT_EQ(agent_steps, v.steps);
    EXPECT_EQ(rep.coverage.catalog_size, r.catalog.size());
    EXPECT_GE(rep.coverage.interaction_coverage, 0.0);
    EXPECT_LE(rep.coverage.interaction_coverage, 1.0);
    EXPECT_LE(rep.coverage.hooks_fired, rep.coverage.hooks_declared);
    EXPECT_EQ(parse_report(emit_report(rep, ReportFormat::machine)).unique_failures, rep.unique_failures);
  }
}

TEST(CampaignProperty, SameSeedSameBytes) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    gen::Gen g(seed);
    const Scene s = random_scene(g);
    const auto a = run_campaign(all_agents(seed), s);
    const auto b = run_campaign(all_agents(seed), s);
    EXPECT_EQ(emit_report(a.report, ReportFormat::machine), emit_report(b.report, ReportFormat::machine));
    EXPECT_EQ(serialize(a.test_case), serialize(b.test_case));
  }
}
