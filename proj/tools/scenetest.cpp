#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scenetest/canonical.hpp"
#include "scenetest/error.hpp"
#include "scenetest/harness.hpp"
#include "scenetest/json_io.hpp"
#include "scenetest/scene_io.hpp"

namespace fs = std::filesystem;
using namespace scenetest;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFailures = 1;
constexpr int kExitConfig = 2;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

ScanConfig load_scan_config(const std::string& path) {
  const json doc = parse_json(read_file(path), path);
  StrictObject obj(doc, "scan config");
  ScanConfig c;
  c.angular_resolution = obj.optional_number("angular_resolution").value_or(c.angular_resolution);
  c.rays_per_window = obj.optional_uint("rays_per_window");
  c.window = obj.optional_number("window").value_or(c.window);
  if (const json* origins = obj.optional("origins")) {
    if (!origins->is_array()) throw ParseError("scan config origins must be an array");
    for (std::size_t i = 0; i < origins->size(); ++i) {
      c.origins.push_back(vec3_from_json((*origins)[i], "origins[" + std::to_string(i) + "]"));
    }
  }
  obj.finish();
  validate_scan_config(c);
  return c;
}

json catalog_json(const ObjectCatalog& catalog) {
  json entries = json::array();
  for (const auto& [id, e] : catalog.entries) {
    json flags = json::array();
    if (e.interactive.selectable) flags.push_back("selectable");
    if (e.interactive.grabbable) flags.push_back("grabbable");
    if (e.interactive.movable) flags.push_back("movable");
    entries.push_back({{"id", id}, {"position", to_json(e.position)}, {"interactive", flags}, {"window", e.window}});
  }
  json failures = json::array();
  for (const auto& f : catalog.scan_failures) failures.push_back(to_json(f));
  return {{"objects", entries},
          {"failures", failures},
          {"history", catalog.history},
          {"rays_cast", catalog.rays_cast},
          {"duration", catalog.duration}};
}

int cmd_scan(const std::string& scene_path, const std::string& config_path, const std::string& out_path) {
  const Scene scene = load_scene_file(scene_path);
  const ScanConfig config = config_path.empty() ? ScanConfig{} : load_scan_config(config_path);
  const ObjectCatalog catalog = scan(scene, config);
  const std::string text = canonical_dump(catalog_json(catalog)) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
    std::cout << "catalog: " << catalog.size() << " objects, " << catalog.scan_failures.size()
              << " scan failures -> " << out_path << "\n";
  }
  return catalog.scan_failures.empty() ? kExitClean : kExitFailures;
}

int cmd_run(const std::vector<std::string>& campaigns, std::string out_dir, std::optional<std::uint64_t> seed) {
  if (out_dir.empty()) {
    if (const char* env = std::getenv(kOutDirEnv)) out_dir = env;
  }
  if (out_dir.empty()) out_dir = ".";
  fs::create_directories(out_dir);

  // Parse everything first so a bad file fails before any campaign runs.
  std::vector<CampaignConfig> configs;
  for (const auto& path : campaigns) configs.push_back(load_campaign(path, seed));

  int status = kExitClean;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const CampaignResult result = run_campaign(configs[i]);
    const std::string stem = fs::path(campaigns[i]).stem().string();
    const fs::path report_path = fs::path(out_dir) / (stem + ".report.json");
    const fs::path case_path = fs::path(out_dir) / (stem + ".uitest");
    write_file(report_path, emit_report(result.report, ReportFormat::machine));
    write_file(case_path, serialize(result.test_case));
    if (configs.size() > 1) std::cout << "== " << campaigns[i] << "\n";
    std::cout << emit_report(result.report, ReportFormat::human);
    std::cout << "Wrote " << report_path.string() << " and " << case_path.string() << "\n";
    if (result.report.exit_status != 0) status = kExitFailures;
  }
  return status;
}

int cmd_replay(const std::string& scene_path, const std::string& case_path, bool ignore_digest) {
  const Scene scene = load_scene_file(scene_path);
  const TestCase tc = parse_test_case(read_file(case_path));
  const ReplayResult result = replay(scene, tc, ReplayOptions{ignore_digest, nullptr});
  std::cout << "replayed " << result.trace.size() << " steps, " << result.verdicts.size() << " verdicts, "
            << result.failures.size() << " failures\n";
  if (result.divergence) {
    const auto& step = tc.steps[*result.divergence];
    std::cout << "diverged at step " << *result.divergence << " (agent " << step.agent << ")\n";
    return kExitFailures;
  }
  std::cout << "no divergence\n";
  return result.failures.empty() ? kExitClean : kExitFailures;
}

int cmd_report(const std::string& path, const std::string& format) {
  const CampaignReport report = parse_report(read_file(path));
  std::cout << emit_report(report, parse_report_format(format));
  return report.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automated interaction testing for simulated 3D scenes"};
  app.require_subcommand(1);

  std::string scene_path, config_path, out_path;
  auto* scan_cmd = app.add_subcommand("scan", "Sweep a scene and print its object catalog");
  scan_cmd->add_option("scene", scene_path, "Scene file")->required();
  scan_cmd->add_option("--config", config_path, "Scan configuration file");
  scan_cmd->add_option("--out", out_path, "Write the catalog here instead of stdout");

  std::vector<std::string> campaigns;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  auto* run_cmd = app.add_subcommand("run", "Run campaigns, writing reports and test cases");
  run_cmd->add_option("campaign", campaigns, "Campaign files")->required();
  run_cmd->add_option("--out", out_dir, std::string("Output directory (default: $") + kOutDirEnv + " or .)");
  run_cmd->add_option("--seed", seed, "Override the campaign seed");

  std::string case_path;
  bool ignore_digest = false;
  auto* replay_cmd = app.add_subcommand("replay", "Re-execute a recorded test case");
  replay_cmd->add_option("scene", scene_path, "Scene file")->required();
  replay_cmd->add_option("testcase", case_path, "Recorded .uitest file")->required();
  replay_cmd->add_flag("--ignore-digest", ignore_digest, "Replay against a scene with a different digest");

  std::string report_path, format = "human";
  auto* report_cmd = app.add_subcommand("report", "Render a machine report");
  report_cmd->add_option("file", report_path, "Report file")->required();
  report_cmd->add_option("--format", format, "human or machine")->check(CLI::IsMember({"human", "machine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitConfig;
  }

  try {
    if (*scan_cmd) return cmd_scan(scene_path, config_path, out_path);
    if (*run_cmd) return cmd_run(campaigns, out_dir, seed);
    if (*replay_cmd) return cmd_replay(scene_path, case_path, ignore_digest);
    if (*report_cmd) return cmd_report(report_path, format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
