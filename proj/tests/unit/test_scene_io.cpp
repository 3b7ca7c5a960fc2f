#include <gtest/gtest.h>

#include "scenetest/canonical.hpp"
#include "scenetest/json_io.hpp"
#include "scenetest/scene_io.hpp"

using namespace scenetest;

namespace {
const std::string kMinimal = R"({
  "bounds": {"min": [0, 0, 0], "max": [10, 3, 10]},
  "avatar": {"position": [5, 1, 5]},
  "objects": [
    {"id": "door", "position": [2, 1, 2], "collider": {"box": {"min": [-0.5, -1, -0.1], "max": [0.5, 1, 0.1]}},
     "interactive": ["selectable"], "refs": ["missing_key"]},
    {"id": "ball", "position": [8, 1, 8], "collider": {"sphere": {"radius": 0.3}},
     "hooks": [{"trigger": "on_grab", "fault": "null_reference"}]}
  ]
})";
}  // namespace

TEST(SceneIo, LoadsAndKeepsDanglingRefs) {
  const Scene s = load_scene(kMinimal);
  ASSERT_EQ(s.objects.size(), 2u);
  EXPECT_EQ(s.objects.at("door").refs, std::vector<std::string>{"missing_key"});
  EXPECT_TRUE(s.objects.at("ball").scenery());
  ASSERT_EQ(s.objects.at("ball").hooks.size(), 1u);
  EXPECT_EQ(s.digest, digest_of(parse_json(kMinimal, "scene")));
}

TEST(SceneIo, GoldenDigestFrozen) {
  // sha256 of the canonical text, computed by an independent script.
  const Scene s = load_scene_file(SCENETEST_FIXTURES "/scenes/golden.json");
  EXPECT_EQ(s.digest, "ebc60cae277b6b290827efad6a69781efde47addce11e355111c864d1fb5a438");
  EXPECT_EQ(s.objects.size(), 13u);
}

TEST(SceneIo, StrictParsing) {
  auto doc = json::parse(kMinimal);
  doc["objects"][0]["colider"] = doc["objects"][0]["collider"];
  EXPECT_THROW(load_scene(doc.dump()), ParseError);

  doc = json::parse(kMinimal);
  doc["objects"][1]["id"] = "door";
  EXPECT_THROW(load_scene(doc.dump()), ValidationError);

  doc = json::parse(kMinimal);
  doc["objects"][1]["hooks"][0]["emit_marker"] = "x";
  EXPECT_THROW(load_scene(doc.dump()), ParseError);

  doc = json::parse(kMinimal);
  doc["avatar"]["position"] = json::array({50, 1, 5});
  EXPECT_THROW(load_scene(doc.dump()), ValidationError);

  EXPECT_THROW(load_scene("not json"), ParseError);
  EXPECT_THROW(load_scene_file("/nonexistent.json"), ConfigError);
}

TEST(SceneIo, RoundTripThroughJson) {
  const Scene s = load_scene(kMinimal);
  Scene back = load_scene(scene_to_json(s).dump());
  back.digest = s.digest;
  EXPECT_EQ(back.objects, s.objects);
  EXPECT_EQ(back.bounds, s.bounds);
  EXPECT_EQ(back.avatar, s.avatar);
  EXPECT_EQ(back.behavior, s.behavior);
}
