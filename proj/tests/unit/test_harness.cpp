#include <gtest/gtest.h>

#include "scenetest/harness.hpp"
#include "scenetest/json_io.hpp"
#include "scenetest/scene_io.hpp"

using namespace scenetest;

namespace {

const std::filesystem::path kCampaigns = SCENETEST_FIXTURES "/campaigns";

json golden_doc() { return parse_json(read_file((kCampaigns / "golden.json").string()), "campaign"); }

CampaignConfig parse(const json& doc) { return parse_campaign(doc, kCampaigns); }

}  // namespace

TEST(Campaign, ParsesFixture) {
  const auto c = parse(golden_doc());
  EXPECT_EQ(c.agents.size(), 7u);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.crash_policy, CrashPolicy::continue_campaign);
  EXPECT_EQ(c.agents[0].id, "simple_teleportation");
  EXPECT_EQ(c.agents[6].net, default_net_spec(Behavior::collision));
  EXPECT_EQ(c.scan.origins.size(), 1u);
}

TEST(Campaign, StrictErrors) {
  json doc = golden_doc();
  doc["agents"][0]["behaviour"] = "x";
  EXPECT_THROW(parse(doc), ParseError);

  doc = golden_doc();
  doc["agents"][1]["id"] = "simple_teleportation";
  EXPECT_THROW(parse(doc), ConfigError);

  doc = golden_doc();
  doc["agents"][3]["interactions"] = 0;
  EXPECT_THROW(parse(doc), ConfigError);

  doc = golden_doc();
  doc["agents"][0]["net"] = "../nets/missing.json";
  EXPECT_THROW(parse(doc), ConfigError);

  doc = golden_doc();
  doc["crash_policy"] = "panic";
  EXPECT_THROW(parse(doc), ParseError);

  doc = golden_doc();
  doc["agents"][0]["params"] = {{"hand_radius", -1}};
  EXPECT_THROW(parse(doc), ConfigError);
}

TEST(Campaign, SeedOverrideChangesDigest) {
  const auto a = parse_campaign(golden_doc(), kCampaigns);
  const auto b = parse_campaign(golden_doc(), kCampaigns, 8);
  EXPECT_EQ(b.seed, 8u);
  EXPECT_NE(a.digest, b.digest);
  EXPECT_EQ(a.digest, parse_campaign(golden_doc(), kCampaigns, 7).digest);
}

TEST(Campaign, ResolveAgentDefaults) {
  const auto c = parse(golden_doc());
  const Scene s = load_scene_file(c.scene_path.string());
  const auto cat = scan(s, c.scan);
  EXPECT_EQ(resolve_agent(c.agents[0], 0, 7, cat).interactions.size(), 10u);
  EXPECT_EQ(resolve_agent(c.agents[3], 3, 7, cat).interactions.size(), cat.size());
  EXPECT_EQ(resolve_agent(c.agents[3], 3, 7, cat).params.seed, derive_seed(7, 3));
  AgentSpec pinned = c.agents[3];
  pinned.params.seed = 99;
  pinned.explicit_seed = true;
  EXPECT_EQ(resolve_agent(pinned, 3, 7, cat).params.seed, 99u);
  EXPECT_EQ(resolve_agent(c.agents[4], 4, 7, ObjectCatalog{}).interactions.size(), 1u);
}

TEST(Campaign, OrderWarnings) {
  auto c = parse(golden_doc());
  EXPECT_TRUE(order_warnings(c.agents).empty());
  std::swap(c.agents[3], c.agents[5]);
  EXPECT_FALSE(order_warnings(c.agents).empty());
}

TEST(Campaign, GoldenIsClean) {
  const auto r = run_campaign(parse(golden_doc()));
  EXPECT_EQ(r.report.exit_status, 0);
  EXPECT_TRUE(r.report.unique_failures.empty());
  EXPECT_DOUBLE_EQ(r.report.coverage.interaction_coverage, 1.0);
  EXPECT_EQ(r.report.coverage.catalog_size, 10u);
  EXPECT_DOUBLE_EQ(r.report.coverage.hook_coverage, 1.0);
  EXPECT_EQ(r.report.verdicts.fail, 0u);
  EXPECT_EQ(r.report.stop, StopReason::completed);
  EXPECT_EQ(r.test_case.steps.size(), r.report.verdicts.steps);
}

TEST(Campaign, BudgetStopsBetweenInteractions) {
  json doc = golden_doc();
  doc["budget"] = 15.5;
  const auto r = run_campaign(parse(doc));
  EXPECT_EQ(r.report.stop, StopReason::budget);
  EXPECT_EQ(r.report.verdicts.steps, 16u);
  EXPECT_LE(r.report.simulated_seconds, r.report.scan_seconds + 16.0);
}

TEST(Campaign, CrashPolicies) {
  const auto base = parse_json(read_file((kCampaigns / "null_reference.json").string()), "campaign");
  auto with_policy = [&](const char* policy) {
    json doc = base;
    doc["crash_policy"] = policy;
    return run_campaign(parse(doc));
  };
  const auto stop = with_policy("stop_campaign");
  ASSERT_TRUE(stop.test_case.aborted);
  EXPECT_EQ(stop.test_case.aborted->agent, "object_grabbing");
  EXPECT_EQ(stop.report.stop, StopReason::crash);
  EXPECT_EQ(stop.traces.size(), 5u);

  const auto skip = with_policy("skip_agent");
  EXPECT_FALSE(skip.test_case.aborted);
  EXPECT_EQ(skip.traces.size(), 7u);
  EXPECT_EQ(skip.traces[4].stop, StopReason::crash);

  const auto cont = with_policy("continue");
  EXPECT_EQ(cont.traces[4].stop, StopReason::completed);
  EXPECT_GT(cont.traces[4].steps.size(), skip.traces[4].steps.size());
}

TEST(Campaign, ExpectedOverride) {
  json doc = parse_json(read_file((kCampaigns / "out_of_bounds.json").string()), "campaign");
  doc["expected"] = {{"out_of_bounds", "reject"}};
  const auto r = run_campaign(parse(doc));
  EXPECT_EQ(r.test_case.expected.out_of_bounds, OutOfBoundsHandling::reject);
  EXPECT_EQ(r.report.unique_failures.size(), 1u);
}

TEST(Coverage, ZeroOverZeroIsOne) {
  const auto r = interaction_coverage(std::vector<std::string>{}, std::vector<CoverageEvent>{});
  EXPECT_DOUBLE_EQ(r.interaction_coverage, 1.0);
  const std::vector<CoverageEvent> events = {{InteractionKind::grab, "a", true},
                                             {InteractionKind::select, "b", false},
                                             {InteractionKind::select, "zzz", true}};
  const auto half = interaction_coverage(std::vector<std::string>{"a", "b"}, events);
  EXPECT_DOUBLE_EQ(half.interaction_coverage, 0.5);
  EXPECT_EQ(half.matrix.at("a"), std::vector<InteractionKind>{InteractionKind::grab});
  EXPECT_TRUE(half.matrix.at("b").empty());
}

TEST(Report, MachineRoundTripAndHumanTable) {
  const auto r = run_campaign(load_campaign((kCampaigns / "two_faults.json").string()));
  ASSERT_EQ(r.report.unique_failures.size(), 2u);
  const std::string machine = emit_report(r.report, ReportFormat::machine);
  CampaignReport back = parse_report(machine);
  back.wall_seconds = r.report.wall_seconds;
  EXPECT_EQ(back, r.report);
  EXPECT_EQ(emit_report(back, ReportFormat::machine), machine);

  const std::string human = emit_report(r.report, ReportFormat::human);
  EXPECT_NE(human.find("Application crash: 1 (2 occurrences)"), std::string::npos);
  EXPECT_NE(human.find("Dependency crash: 1 (1 occurrences)"), std::string::npos);
  EXPECT_NE(human.find("Assertion violation: 0 (0 occurrences)"), std::string::npos);
  EXPECT_NE(human.find("Exit status: 1"), std::string::npos);
  EXPECT_THROW(parse_report_format("xml"), ConfigError);
}
