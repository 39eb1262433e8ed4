// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/error.hpp"
#include "d3/sdl/parser.hpp"
#include "d3/session/session.hpp"
#include "support/frames.hpp"
#include "support/random_events.hpp"
#include "support/scenes.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

namespace d3::session {
namespace {

nl::ProviderConfig mock_cfg() {
  nl::ProviderConfig cfg;
  cfg.fixture_path = "(in memory)";
  return cfg;
}

std::shared_ptr<nl::MockProvider> mock(std::map<std::string, std::string> extra = {}) {
  auto fixtures = test::session_fixtures();
  fixtures.merge(extra);
  fixtures["generation|rectangle"] =
      test::fenced_reply("component \"petal\" {\n  profile: rect 0.2 0.5\n  extrude: 0.02\n}\n");
  return std::make_shared<nl::MockProvider>(std::move(fixtures));
}

SessionState fresh() { return new_session(mock_cfg(), mock()); }

/// Session already holding the flower program, in modification stage.
SessionState flower_session() {
  auto s = fresh();
  s.program_text = test::kFlower;
  s.history = {"", test::kFlower};
  s.cursor = 1;
  s.stage = Stage::modification;
  return s;
}

SessionState step(const SessionState& s, const Event& e) {
  auto [next, u] = handle_event(s, e);
  EXPECT_TRUE(u.ok) << u.message;
  return next;
}

const sdl::ComponentBlock& block(const SessionState& s, const std::string& id) {
  static sdl::SceneProgram keep;
  keep = *sdl::parse_program(s.program_text).program;
  return *keep.find(id);
}

TEST(NewSession, Defaults) {
  const auto s = fresh();
  EXPECT_EQ(s.program_text, "");
  EXPECT_EQ(s.stage, Stage::generation);
  EXPECT_EQ(s.history, std::vector<std::string>{""});
  EXPECT_EQ(s.cursor, 0u);
  EXPECT_EQ(s.meters_per_unit, 1.0);
  EXPECT_NE(fresh().id, s.id);

  nl::ProviderConfig live;
  live.mode = nl::ProviderMode::live;
  live.chat_endpoint = live.transcription_endpoint = "https://example.invalid/v1";
  EXPECT_THROW(new_session(live), Error);
}

TEST(Transcript, FirstGenerationAddsRootAndAdvances) {
  auto [s, u] = handle_event(fresh(), Transcript{"Rectangle."});
  ASSERT_TRUE(u.ok) << u.message;
  EXPECT_EQ(s.history.size(), 2u);
  EXPECT_EQ(s.cursor, 1u);
  EXPECT_TRUE(std::holds_alternative<geom::RectProfile>(block(s, "petal").profile));
  EXPECT_EQ(s.stage, Stage::segmentation);
  EXPECT_EQ(u.mesh.entries.size(), 1u);
  EXPECT_EQ(u.transcript, "Rectangle.");
  EXPECT_TRUE(u.changed);
}

TEST(Transcript, FailureLeavesStateIdentical) {
  const auto s = flower_session();
  for (const Event& e : std::vector<Event>{Transcript{"nobody knows"}, Select{"ghost"}, Audio{""},
                                           SetUnitScale{0.0}, Transcript{"200 degrees"}}) {
    const auto [next, u] = handle_event(s, e);
    EXPECT_FALSE(u.ok);
    EXPECT_EQ(next, s);
  }
  EXPECT_EQ(handle_event(s, Select{"ghost"}).second.code, Errc::unknown_component);
}

TEST(Transcript, ReplaceBlockKeepsOtherTextByteIdentical) {
  auto s = step(flower_session(), Select{"petal"});
  // A hand-written comment elsewhere in the program survives the splice.
  const std::string commented = std::string(test::kFlower).replace(
      std::string(test::kFlower).find("  component \"stem\""), 0, "  // keep me\n");
  s.program_text = commented;
  s.history.back() = commented;
  auto fixtures = std::map<std::string, std::string>{
      {"modification|wider", test::fenced_reply("component \"petal\" {\n  profile: ellipse 0.3 0.4 24\n  extrude: 0.02\n"
                                                  "  color: #FFC0CB\n  count: 5\n  attach: \"receptacle\" angle 60 radial\n}\n")}};
  s.provider = mock(fixtures);
  const auto next = step(s, Transcript{"wider"});
  EXPECT_NE(next.program_text.find("// keep me"), std::string::npos);
  EXPECT_EQ(std::get<geom::EllipseProfile>(block(next, "petal").profile).rx, 0.3);
}

TEST(Gesture, OpeningAngleStabilizedAndDeadbandHoldsHistory) {
  auto s = step(flower_session(), Select{"petal"});
  GestureFrames g{{}, GestureMode::opening_angle};
  for (int i = 0; i < 10; ++i) g.frames.push_back(test::angle_frame(47.0, 5.0 * i, i));
  auto [a, ua] = handle_event(s, g);
  ASSERT_TRUE(ua.ok) << ua.message;
  EXPECT_EQ(block(a, "petal").attach->angle_deg, 47.0);
  EXPECT_EQ(a.history.size(), 3u);
  GestureFrames jitter{{}, GestureMode::opening_angle};
  for (int i = 0; i < 10; ++i) jitter.frames.push_back(test::angle_frame(47.0 + (i % 2 ? 0.9 : -0.9), 0, 20 + i));
  auto [b, ub] = handle_event(a, jitter);
  ASSERT_TRUE(ub.ok);
  EXPECT_FALSE(ub.changed);
  EXPECT_EQ(b.history, a.history);
  EXPECT_EQ(b.program_text, a.program_text);
}

TEST(Gesture, RequiresSelection) {
  GestureFrames g{{test::pinch_frame(0.1)}, GestureMode::pinch_length};
  const auto s = flower_session();
  const auto [next, u] = handle_event(s, g);
  EXPECT_EQ(u.code, Errc::missing_selection);
  EXPECT_EQ(next, s);
}

TEST(Gesture, PinchTargetsExtrudeThenScale) {
  auto s = step(flower_session(), Select{"petal"});
  s = step(s, SetUnitScale{0.5});
  s = step(s, GestureFrames{{test::pinch_frame(0.1)}, GestureMode::pinch_length});
  EXPECT_EQ(block(s, "petal").extrude_depth, 0.05);
  auto [t, u] = handle_event(s, Transcript{"Scale."});
  ASSERT_TRUE(u.ok);
  EXPECT_FALSE(u.changed);
  EXPECT_EQ(t.pinch_target, PinchTarget::scale);
  t = step(t, GestureFrames{{test::pinch_frame(0.4)}, GestureMode::pinch_length});
  EXPECT_EQ(block(t, "petal").scale.factors, geom::Vec3(0.2, 0.2, 0.2));
  EXPECT_EQ(block(t, "petal").extrude_depth, 0.05);
}

TEST(Gesture, TraceReplacesProfileOrFallsBackToProvider) {
  auto s = step(flower_session(), Select{"petal"});
  s = step(s, GestureFrames{test::trace_frames(test::rect_path(0.5, 0.5, 0.3, 0.3, 10)), GestureMode::trace});
  const auto& poly = std::get<geom::PolygonProfile>(block(s, "petal").profile);
  EXPECT_EQ(poly.vertices.size(), 32u);

  std::vector<Eigen::Vector2d> eight;
  for (int i = 0; i < 40; ++i) {
    const double t = 2 * M_PI * i / 40;
    eight.emplace_back(0.5 + 0.3 * std::sin(t), 0.5 + 0.2 * std::sin(2 * t));
  }
  auto s2 = step(s, Select{"petal"});
  s2.program_text = test::kFlower;
  s2.history = {"", test::kFlower};
  s2.cursor = 1;
  // Re-route the fallback fixture to the flower's petal.
  const auto frames = test::trace_frames(eight);
  const auto description = gesture::describe_frames(frames);
  s2.provider = mock({{nl::MockProvider::chat_key("modification", description),
                       test::fenced_reply("component \"petal\" {\n  profile: ref \"star\"\n  extrude: 0.02\n  count: 5\n"
                                          "  attach: \"receptacle\" angle 60 radial\n}\n")}});
  const auto [next, u] = handle_event(s2, GestureFrames{frames, GestureMode::trace});
  ASSERT_TRUE(u.ok) << u.message;
  EXPECT_EQ(u.transcript, description);
  EXPECT_EQ(std::get<geom::RefProfile>(block(next, "petal").profile).name, "star");
}

TEST(History, UndoRedoAndTruncation) {
  auto s0 = step(flower_session(), Select{"petal"});
  auto s1 = step(s0, Transcript{"47 degrees."});
  auto [u1, upd] = undo(s1);
  ASSERT_TRUE(upd.ok);
  EXPECT_EQ(u1.program_text, s0.program_text);
  auto [r1, updr] = redo(u1);
  ASSERT_TRUE(updr.ok);
  EXPECT_EQ(r1.program_text, s1.program_text);
  auto branched = step(u1, Transcript{"30 degrees"});
  EXPECT_EQ(redo(branched).second.code, Errc::nothing_to_redo);
  EXPECT_EQ(undo(fresh()).second.code, Errc::nothing_to_undo);
  const auto f = fresh();
  EXPECT_EQ(undo(f).first, f);
}

TEST(History, UndoClearsStaleSelection) {
  auto s = step(fresh(), Transcript{"stem"});
  s = step(s, SetStage{Stage::generation});
  s = step(s, Transcript{"petals"});
  s = step(s, Select{"petal"});
  auto [u, upd] = undo(s);
  ASSERT_TRUE(upd.ok);
  EXPECT_FALSE(u.selection.has_value());
}

TEST(Stage, TransitionsNeedAModel) {
  const auto s = fresh();
  EXPECT_EQ(handle_event(s, SetStage{Stage::modification}).second.code, Errc::stage_error);
  EXPECT_TRUE(handle_event(s, SetStage{Stage::generation}).second.ok);
  EXPECT_EQ(handle_event(s, Transcript{"rounder"}).second.code, Errc::missing_fixture);
  auto m = step(step(s, Transcript{"stem"}), SetStage{Stage::modification});
  EXPECT_EQ(handle_event(m, Transcript{"rounder"}).second.code, Errc::missing_selection);
}

TEST(Audio, TranscribedThroughFixture) {
  auto [s, u] = handle_event(fresh(), Audio{test::kSessionWav});
  ASSERT_TRUE(u.ok) << u.message;
  EXPECT_EQ(u.transcript, "stem");
  EXPECT_EQ(block(s, "stem").color, (sdl::Rgb{0, 128, 0}));
}

class SessionFile : public ::testing::Test {
 protected:
  std::string path = (std::filesystem::temp_directory_path() / ("d3_session_" + std::to_string(::getpid()) + ".json")).string();
  void TearDown() override { std::filesystem::remove(path); }
};

TEST_F(SessionFile, RoundTripAndUndoEquivalence) {
  auto s = step(fresh(), Transcript{"stem"});
  s = step(s, SetStage{Stage::generation});
  s = step(s, Transcript{"petals"});
  s = step(s, Select{"petal"});
  s = step(s, Transcript{"47 degrees"});
  s = step(s, SetUnitScale{0.25});
  s.cfg.api_key = "sk-do-not-write";
  save_session(s, path);
  std::ifstream in(path);
  const std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(raw.find("sk-do-not-write"), std::string::npos);

  const auto loaded = load_session(path, mock_cfg(), s.provider);
  EXPECT_EQ(loaded.id, s.id);
  EXPECT_EQ(loaded.history, s.history);
  EXPECT_EQ(loaded.cursor, s.cursor);
  EXPECT_EQ(loaded.program_text, s.program_text);
  EXPECT_EQ(loaded.selection, s.selection);
  EXPECT_EQ(loaded.stage, s.stage);
  EXPECT_EQ(loaded.meters_per_unit, 0.25);

  auto a = s;
  auto b = loaded;
  for (int i = 0; i < 4; ++i) {
    auto [na, ua] = undo(a);
    auto [nb, ub] = undo(b);
    EXPECT_EQ(ua.ok, ub.ok);
    EXPECT_EQ(na.program_text, nb.program_text);
    EXPECT_EQ(na.selection, nb.selection);
    a = na;
    b = nb;
  }
}

TEST_F(SessionFile, Errors) {
  auto s = step(fresh(), Transcript{"stem"});
  save_session(s, path);
  auto j = nlohmann::json::parse(std::ifstream(path));
  j["version"] = 99;
  std::ofstream(path) << j.dump();
  try {
    load_session(path, mock_cfg(), s.provider);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::version_mismatch);
  }
  std::ofstream(path) << "{ not json";
  try {
    load_session(path, mock_cfg(), s.provider);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::corrupt_file);
  }
  j["version"] = 1;
  j["cursor"] = 7;
  std::ofstream(path) << j.dump();
  EXPECT_THROW(load_session(path, mock_cfg(), s.provider), Error);
  try {
    load_session(path + ".missing", mock_cfg(), s.provider);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io_error);
  }
}

TEST(Property, RandomSequencesAreAtomicAndUndoable) {
  int failures = 0;
  int edits = 0;
  for (std::uint64_t seq = 0; seq < 200; ++seq) {
    auto provider = std::make_shared<test::FlakyProvider>(mock(), 0.1, seq);
    auto s = new_session(mock_cfg(), provider);
    test::EventGenerator gen(seq);
    for (int i = 0; i < 30; ++i) {
      const auto e = gen.next();
      const auto [next, u] = handle_event(s, e);
      if (!u.ok) {
        ++failures;
        ASSERT_EQ(next, s) << "seq " << seq << " step " << i << ": " << u.message;
      } else if (test::is_edit(e) && u.changed) {
        ++edits;
        auto [back, ub] = undo(next);
        ASSERT_TRUE(ub.ok);
        ASSERT_EQ(back.program_text, s.program_text);
        ASSERT_EQ(redo(next).second.code, Errc::nothing_to_redo);
      }
      ASSERT_LT(next.cursor, next.history.size());
      ASSERT_EQ(next.history[next.cursor], next.program_text);
      if (!next.program_text.empty()) ASSERT_TRUE(sdl::parse_program(next.program_text).ok());
      s = next;
    }
  }
  EXPECT_GT(failures, 500);
  EXPECT_GT(edits, 200);
}

}  // namespace
}  // namespace d3::session
