// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/batch/script.hpp"
#include "d3/nl/provider.hpp"
#include "d3/sdl/parser.hpp"
#include "support/random_events.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace d3::batch {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

class BatchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("d3_batch_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_script(const json& j) {
    const auto p = dir_ / "script.json";
    std::ofstream(p) << j.dump(2);
    return p.string();
  }

  std::string write_fixtures(const std::map<std::string, std::string>& f) {
    const auto p = dir_ / "fixtures.json";
    std::ofstream(p) << json(f).dump(2);
    return p.string();
  }

  json events(const std::string& out) { return json::parse(slurp(fs::path(out) / "events.json")); }

  fs::path dir_;
};

const fs::path kSource = D3_SOURCE_DIR;

TEST_F(BatchTest, TableFlowsReplay) {
  const auto before = nl::outbound_request_count();
  const auto out = (dir_ / "out").string();
  ASSERT_EQ(run_script((kSource / "scripts/table_flows.json").string(), out, {}), kExitOk);
  EXPECT_EQ(nl::outbound_request_count(), before);

  const auto ev = events(out);
  EXPECT_TRUE(ev["ok"].get<bool>());
  EXPECT_EQ(ev["outbound_requests"], 0);
  const auto& steps = ev["steps"];
  ASSERT_EQ(steps.size(), 10u);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    EXPECT_EQ(steps[i]["index"], i);
    EXPECT_EQ(steps[i]["revision"], i + 1);
    EXPECT_TRUE(steps[i]["ok"].get<bool>()) << steps[i]["message"];
  }

  const auto program_at = [&](std::size_t i) {
    return *sdl::parse_program(steps[i]["sdl"].get<std::string>()).program;
  };
  EXPECT_TRUE(std::holds_alternative<geom::RectProfile>(program_at(3).find("petal")->profile));
  const auto& ref = std::get<geom::RefProfile>(program_at(6).find("petal")->profile);
  EXPECT_EQ(ref.name, "rose_petal");
  EXPECT_EQ(program_at(7).find("petal")->attach->angle_deg, 47.0);
  EXPECT_GT(program_at(8).find("petal")->attach->angle_deg, 47.0);
  EXPECT_EQ(sdl::to_hex(program_at(9).find("petal")->color), "#00FFFF");

  EXPECT_EQ(slurp(fs::path(out) / "final.sdl"), steps[9]["sdl"].get<std::string>());
  EXPECT_TRUE(fs::exists(fs::path(out) / "final.obj"));
  EXPECT_TRUE(fs::exists(fs::path(out) / "final.gltf"));
  EXPECT_FALSE(fs::exists(fs::path(out) / "FAILED"));
}

TEST_F(BatchTest, RerunsAreBitStable) {
  const auto a = (dir_ / "a").string();
  const auto b = (dir_ / "b").string();
  const auto script = (kSource / "scripts/segmentation.json").string();
  ASSERT_EQ(run_script(script, a, {}), kExitOk);
  ASSERT_EQ(run_script(script, b, {}), kExitOk);
  for (const char* name : {"final.sdl", "final.obj", "final.gltf", "events.json"})
    EXPECT_EQ(slurp(fs::path(a) / name), slurp(fs::path(b) / name)) << name;
}

TEST_F(BatchTest, FailingStepStopsWithPartialOutput) {
  const auto fixtures = write_fixtures(test::session_fixtures());
  const auto script = write_script({{"fixtures", fixtures},
                                    {"steps",
                                     {{{"kind", "transcript"}, {"text", "stem"}},
                                      {{"kind", "transcript"}, {"text", "something unrecorded"}},
                                      {{"kind", "undo"}}}}});
  const auto out = (dir_ / "out").string();
  EXPECT_EQ(run_script(script, out, {}), kExitStepFailed);
  const auto ev = events(out);
  EXPECT_FALSE(ev["ok"].get<bool>());
  EXPECT_EQ(ev["failed_step"], 1);
  ASSERT_EQ(ev["steps"].size(), 2u);
  EXPECT_TRUE(ev["steps"][0]["ok"].get<bool>());
  EXPECT_EQ(ev["steps"][1]["code"], "missing_fixture");
  EXPECT_TRUE(fs::exists(fs::path(out) / "FAILED"));
  EXPECT_NE(slurp(fs::path(out) / "FAILED").find("step 1"), std::string::npos);
  // the partial scene is the last good state
  EXPECT_EQ(slurp(fs::path(out) / "final.sdl"), ev["steps"][0]["sdl"].get<std::string>());
}

TEST_F(BatchTest, UnknownKindIsBadScript) {
  const auto script =
      write_script({{"steps", {{{"kind", "undo"}}, {{"kind", "teleport"}}}}});
  try {
    load_script(script);
    FAIL();
  } catch (const ScriptError& e) {
    EXPECT_EQ(e.step(), 1);
  }
  const auto out = (dir_ / "out").string();
  EXPECT_EQ(run_script(script, out, {}), kExitBadScript);
  EXPECT_EQ(events(out)["failed_step"], 1);
  EXPECT_TRUE(fs::exists(fs::path(out) / "FAILED"));
}

TEST_F(BatchTest, MalformedScripts) {
  EXPECT_THROW(parse_script(json::array(), "."), ScriptError);
  EXPECT_THROW(parse_script({{"steps", json::object()}}, "."), ScriptError);
  EXPECT_THROW(parse_script({{"steps", {{{"kind", "stage"}, {"stage", "sculpting"}}}}}, "."), ScriptError);
  EXPECT_THROW(parse_script({{"steps", {{{"kind", "transcript"}}}}}, "."), ScriptError);
  EXPECT_THROW(load_script((dir_ / "missing.json").string()), ScriptError);
  const auto p = dir_ / "garbage.json";
  std::ofstream(p) << "{ not json";
  EXPECT_EQ(run_script(p.string(), (dir_ / "out").string(), {}), kExitBadScript);
}

TEST_F(BatchTest, FixturesResolveAgainstScriptDirectory) {
  const auto s = parse_script({{"fixtures", "f.json"}, {"steps", json::array()}}, "/some/where");
  EXPECT_EQ(fs::path(s.fixtures), fs::path("/some/where/f.json"));
  EXPECT_TRUE(s.steps.empty());
}

TEST_F(BatchTest, ProviderOverrideAndEmptyScene) {
  auto provider = std::make_shared<nl::MockProvider>(test::session_fixtures());
  const auto script = write_script({{"steps", {{{"kind", "undo"}}}}});
  RunOptions options;
  options.provider = provider;
  const auto out = (dir_ / "out").string();
  // undo on a fresh session fails, leaving an empty program
  EXPECT_EQ(run_script(script, out, options), kExitStepFailed);
  EXPECT_EQ(slurp(fs::path(out) / "final.sdl"), "");
  EXPECT_FALSE(fs::exists(fs::path(out) / "final.obj"));
}

TEST_F(BatchTest, GestureScript) {
  const auto out = (dir_ / "out").string();
  ASSERT_EQ(run_script((kSource / "scripts/gestures.json").string(), out, {}), kExitOk);
  for (const auto& st : events(out)["steps"]) EXPECT_TRUE(st["ok"].get<bool>()) << st["message"];
}

}  // namespace
}  // namespace d3::batch
