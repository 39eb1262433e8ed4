// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/error.hpp"
#include "d3/nl/interpret.hpp"
#include "d3/nl/provider.hpp"
#include "d3/sdl/parser.hpp"
#include "support/scenes.hpp"

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <deque>
#include <random>
#include <thread>

namespace d3::nl {
namespace {

using sdl::SceneProgram;

SceneProgram flower() { return *sdl::parse_program(test::kFlower).program; }

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::bad_request;
}

/// Replies from a queue and records every request.
class ScriptedProvider : public Provider {
 public:
  explicit ScriptedProvider(std::deque<std::string> replies) : replies_(std::move(replies)) {}
  ChatResponse chat(const ChatRequest& r) override {
    requests.push_back(r);
    if (replies_.empty()) throw Error(Errc::provider_error, "script exhausted");
    auto text = replies_.front();
    replies_.pop_front();
    return {text, 3};
  }
  std::string transcribe(std::string_view) override { return "unused"; }
  std::vector<ChatRequest> requests;

 private:
  std::deque<std::string> replies_;
};

// split_blocks slices end at the closing brace.
std::string chomp(const std::string& s) { return s.substr(0, s.find_last_not_of('\n') + 1); }

std::string fence(const std::string& body) { return "Here you go:\n```sdl\n" + body + "```\nEnjoy.\n"; }

TEST(Prompt, GenerationEmbedsUtteranceAndScaffold) {
  const auto p = build_prompt(Stage::generation, "an open pink flower with a green stem", {}, std::nullopt);
  EXPECT_NE(p.find("Request: an open pink flower with a green stem\n"), std::string::npos);
  EXPECT_NE(p.find("```sdl\nscene \"model\" {\n}\n```"), std::string::npos);
  EXPECT_NE(p.find("rose_petal"), std::string::npos);
  EXPECT_EQ(p, build_prompt(Stage::generation, "an open pink flower with a green stem", {}, std::nullopt));
}

TEST(Prompt, ModificationEmbedsSelectedBlock) {
  const auto prog = flower();
  const auto p = build_prompt(Stage::modification, "Blooms a little bit.", prog, "petal");
  EXPECT_NE(p.find("Selected component:\n```sdl\n" + sdl::print_block(*prog.find("petal")) + "\n```"),
            std::string::npos);
  EXPECT_NE(p.find("Blooms a little bit."), std::string::npos);
  EXPECT_NE(p.find(sdl::print_program(prog)), std::string::npos);
  EXPECT_EQ(code_of([&] { build_prompt(Stage::modification, "x", prog, std::nullopt); }), Errc::missing_selection);
  EXPECT_EQ(code_of([&] { build_prompt(Stage::modification, "x", prog, "ghost"); }), Errc::unknown_component);
}

TEST(Prompt, StagesDiffer) {
  const auto prog = flower();
  const auto g = build_prompt(Stage::generation, "x", prog, "stamen");
  const auto s = build_prompt(Stage::segmentation, "x", prog, "stamen");
  const auto m = build_prompt(Stage::modification, "x", prog, "stamen");
  EXPECT_NE(g, s);
  EXPECT_NE(s, m);
  EXPECT_NE(s.find("one fenced sdl code block per part"), std::string::npos);
}

TEST(Extract, SingleMultipleAndErrors) {
  const std::string petal = "component \"petal\" {\n  profile: rect 1 1\n  extrude: 1\n}\n";
  EXPECT_EQ(extract_block(fence(petal)), std::vector<std::string>{petal});
  const std::string anther = "component \"anther\" {\n  profile: rect 1 1\n  extrude: 1\n}\n";
  const auto two = extract_block(fence(anther) + "\nand\n" + fence(petal));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0], anther);
  EXPECT_EQ(two[1], petal);
  EXPECT_EQ(code_of([] { extract_block("Sure, I made the petal rounder."); }), Errc::no_block);
  EXPECT_EQ(code_of([] { extract_block("```\nprint('hi')\n```\n"); }), Errc::no_block);
  EXPECT_EQ(code_of([&] { extract_block("```sdl\n" + petal); }), Errc::unbalanced_fence);
  // No trailing newline after the closing fence.
  EXPECT_EQ(extract_block("```\n" + petal + "```").size(), 1u);
}

TEST(Analogy, ShapesColorsAndMisses) {
  const auto rose = resolve_analogy("rose petal");
  ASSERT_TRUE(std::holds_alternative<ShapeMatch>(rose));
  EXPECT_EQ(std::get<ShapeMatch>(rose).name, "rose_petal");
  EXPECT_TRUE(std::holds_alternative<ShapeMatch>(resolve_analogy("Similar to rose petal.")));
  EXPECT_TRUE(std::holds_alternative<ShapeMatch>(resolve_analogy("LOTUS PETAL")));
  const auto aqua = resolve_analogy("aqua");
  ASSERT_TRUE(std::holds_alternative<ColorMatch>(aqua));
  EXPECT_EQ(sdl::to_hex(std::get<ColorMatch>(aqua).rgb), "#00FFFF");
  const auto eggplant = resolve_analogy("Eggplant skin");
  ASSERT_TRUE(std::holds_alternative<ColorMatch>(eggplant));
  EXPECT_EQ(sdl::to_hex(std::get<ColorMatch>(eggplant).rgb), "#614051");
  EXPECT_TRUE(std::holds_alternative<ColorMatch>(resolve_analogy("sky blue")));
  EXPECT_TRUE(std::holds_alternative<std::monostate>(resolve_analogy("my soul")));
  EXPECT_TRUE(std::holds_alternative<std::monostate>(resolve_analogy("")));
}

TEST(FastPath, Degrees) {
  auto op = angle_fast_path("47 degrees.", "petal");
  ASSERT_TRUE(op);
  EXPECT_EQ(*op, (sdl::SetParam{"petal", sdl::FieldPath::attach_angle, "47"}));
  EXPECT_EQ(angle_fast_path("  12.5 Degree", "x")->value, "12.5");
  EXPECT_FALSE(angle_fast_path("about 47 degrees", "x"));
  EXPECT_FALSE(angle_fast_path("47 degreesish", "x"));
  EXPECT_FALSE(angle_fast_path("47", "x"));
}

TEST(FastPath, Colors) {
  EXPECT_EQ(color_fast_path("Standard HTML aqua.", "petal")->value, "#00FFFF");
  EXPECT_EQ(color_fast_path("make it light green", "petal")->value, "#90EE90");
  EXPECT_EQ(color_fast_path("eggplant skin color", "petal")->value, "#614051");
  EXPECT_FALSE(color_fast_path("make it darker blue", "petal"));
  EXPECT_FALSE(color_fast_path("red and blue", "petal"));
  EXPECT_FALSE(color_fast_path("red blue", "petal"));
  EXPECT_FALSE(color_fast_path("Blooms a little bit.", "petal"));
}

TEST(Interpret, DegreesNeverCallsProvider) {
  const auto prog = flower();
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    ScriptedProvider provider({});
    const int deg = static_cast<int>(rng() % 180);
    std::string text = std::string(rng() % 3, ' ') + std::to_string(deg) + (rng() % 2 ? " degrees" : "degree") +
                       (rng() % 2 ? "." : " please");
    for (auto stage : {Stage::generation, Stage::segmentation, Stage::modification}) {
      const auto r = interpret(text, prog, "petal", stage, provider);
      EXPECT_EQ(r.op, (sdl::IntentOp{sdl::SetParam{"petal", sdl::FieldPath::attach_angle, std::to_string(deg)}}));
    }
    EXPECT_TRUE(provider.requests.empty()) << text;
  }
  // The root has no attachment, so the fast path fails without asking the provider.
  ScriptedProvider provider({});
  EXPECT_EQ(code_of([&] { interpret("47 degrees", prog, "stem", Stage::modification, provider); }),
            Errc::invalid_value);
  EXPECT_TRUE(provider.requests.empty());
}

TEST(Interpret, ModificationReplacesSelectedBlock) {
  const auto prog = flower();
  const std::string block =
      "component \"petal\" {\n  profile: ref \"rose_petal\"\n  extrude: 0.02\n  color: #FFC0CB\n  count: 5\n"
      "  attach: \"receptacle\" angle 60 radial\n}\n";
  ScriptedProvider provider({fence(block)});
  const auto r = interpret("Similar to rose petal.", prog, "petal", Stage::modification, provider);
  EXPECT_EQ(r.op, (sdl::IntentOp{sdl::ReplaceBlock{"petal", chomp(block)}}));
  EXPECT_EQ(r.raw_response, fence(block));
  EXPECT_EQ(r.provider_latency_ms, 3);
  ASSERT_EQ(provider.requests.size(), 1u);
  EXPECT_EQ(provider.requests[0].stage, "modification");
  EXPECT_EQ(provider.requests[0].prompt, build_prompt(Stage::modification, "Similar to rose petal.", prog, "petal"));
}

TEST(Interpret, RetryCarriesValidationErrors) {
  const auto prog = flower();
  const std::string bad = "component \"petal\" {\n  profile: rect 1 1\n  extrude: 1\n  attach: \"ghost\" angle 1\n}\n";
  const std::string good = "component \"petal\" {\n  profile: rect 1 1\n  extrude: 1\n  attach: \"stem\" angle 1\n}\n";
  ScriptedProvider provider({fence(bad), fence(good)});
  const auto r = interpret("wider", prog, "petal", Stage::modification, provider);
  EXPECT_EQ(r.op, (sdl::IntentOp{sdl::ReplaceBlock{"petal", chomp(good)}}));
  ASSERT_EQ(provider.requests.size(), 2u);
  EXPECT_EQ(provider.requests[1].attempt, 1);
  EXPECT_NE(provider.requests[1].prompt.find("rejected"), std::string::npos);
  EXPECT_NE(provider.requests[1].prompt.find("ghost"), std::string::npos);
}

TEST(Interpret, FailsAfterOneRetry) {
  const auto prog = flower();
  ScriptedProvider provider({"no code here", fence("component \"stem\" {\n profile: rect 1 1\n extrude: 1\n}\n"),
                             "unused"});
  EXPECT_EQ(code_of([&] { interpret("wider", prog, "petal", Stage::modification, provider); }),
            Errc::interpretation_failed);
  EXPECT_EQ(provider.requests.size(), 2u);
}

TEST(Interpret, GenerationAddsOrReplaces) {
  const std::string stem = "component \"stem\" {\n  profile: rect 0.1 1\n  extrude: 0.1\n  color: green\n}\n";
  ScriptedProvider provider({fence(stem), fence(stem)});
  const auto added = interpret("a green stem", {}, std::nullopt, Stage::generation, provider);
  EXPECT_EQ(added.op, (sdl::IntentOp{sdl::AddComponent{chomp(stem)}}));
  const auto replaced = interpret("a green stem", flower(), std::nullopt, Stage::generation, provider);
  EXPECT_EQ(replaced.op, (sdl::IntentOp{sdl::ReplaceBlock{"stem", chomp(stem)}}));

  ScriptedProvider two({fence(stem + stem), fence(stem + stem)});
  EXPECT_EQ(code_of([&] { interpret("x", {}, std::nullopt, Stage::generation, two); }), Errc::interpretation_failed);
}

TEST(Interpret, SegmentationSplitsSelectionOrRoot) {
  const auto prog = flower();
  const std::string anther =
      "component \"anther\" {\n  profile: ellipse 0.03 0.03 12\n  extrude: 0.02\n  attach: \"filament\" angle 0 "
      "fixed offset 0 0.3 0\n}\n";
  const std::string filament =
      "component \"filament\" {\n  profile: rect 0.02 0.3\n  extrude: 0.02\n  count: 3\n  attach: \"receptacle\" "
      "angle 20 radial\n}\n";
  ScriptedProvider provider({"```sdl\n" + filament + "\n" + anther + "```\n"});
  const auto r = interpret("split into anther and filament", prog, "stamen", Stage::segmentation, provider);
  const auto& seg = std::get<sdl::Segment>(r.op);
  EXPECT_EQ(seg.id, "stamen");
  ASSERT_EQ(seg.replacement_block_texts.size(), 2u);
  EXPECT_EQ(seg.replacement_block_texts[0], chomp(filament));
  const auto next = sdl::apply_intent(prog, r.op);
  EXPECT_EQ(next.find("pistil")->attach->parent_id, "filament");

  const std::string whole = "component \"flower\" {\n  profile: rect 1 1\n  extrude: 1\n}\n";
  ScriptedProvider root_provider({fence("scene \"x\" {\n" + whole + "}\n")});
  const auto single = *sdl::parse_program("scene \"m\" {\n" + whole + "}\n").program;
  const auto rr = interpret("split", single, std::nullopt, Stage::segmentation, root_provider);
  EXPECT_EQ(std::get<sdl::Segment>(rr.op).id, "flower");
  EXPECT_EQ(code_of([&] { interpret("split", {}, std::nullopt, Stage::segmentation, root_provider); }),
            Errc::invalid_edit);
}

TEST(Mock, KeysNormalizeAndRetryOverride) {
  EXPECT_EQ(normalize_utterance("  Blooms   a little\tbit.  "), "blooms a little bit");
  EXPECT_EQ(normalize_utterance("Rectangle?!"), "rectangle");
  EXPECT_EQ(MockProvider::chat_key("generation", "Rectangle."), "generation|rectangle");
  MockProvider mock({{"modification|wider", "first"}, {"modification|wider|retry1", "second"}, {"modification|x", "x"}});
  EXPECT_EQ(mock.chat({"", "modification", "Wider!", 0}).text, "first");
  EXPECT_EQ(mock.chat({"", "modification", "wider", 1}).text, "second");
  EXPECT_EQ(mock.chat({"", "modification", "x", 1}).text, "x");
  EXPECT_EQ(code_of([&] { mock.chat({"", "generation", "wider", 0}); }), Errc::missing_fixture);
}

TEST(Mock, DeterministicInterpretation) {
  const auto prog = flower();
  const std::string block = "component \"petal\" {\n  profile: rect 1 1\n  extrude: 1\n  attach: \"stem\" angle 5\n}\n";
  MockProvider mock({{"modification|rounder", fence(block)}});
  const auto a = interpret("Rounder", prog, "petal", Stage::modification, mock);
  const auto b = interpret("rounder.", prog, "petal", Stage::modification, mock);
  EXPECT_EQ(a, b);
}

TEST(Transcribe, MockByChecksumAndAudioChecks) {
  const auto wav = test::make_wav(1600);
  MockProvider mock({{MockProvider::audio_key(wav), "Rectangle."}});
  EXPECT_EQ(transcribe(wav, mock), "Rectangle.");
  EXPECT_EQ(code_of([&] { transcribe(test::make_wav(1600, 16000, 1, 1), mock); }), Errc::missing_fixture);
  EXPECT_EQ(code_of([&] { transcribe("", mock); }), Errc::malformed_audio);
  EXPECT_EQ(code_of([&] { transcribe(test::make_wav(100, 16000, 2), mock); }), Errc::malformed_audio);
  EXPECT_EQ(code_of([&] { transcribe(test::make_wav(100, 8000), mock); }), Errc::malformed_audio);
  EXPECT_EQ(code_of([&] { transcribe(test::make_wav(0), mock); }), Errc::malformed_audio);
  EXPECT_EQ(code_of([&] { transcribe(wav.substr(0, 30), mock); }), Errc::malformed_audio);
  EXPECT_NO_THROW(check_wav(test::make_wav(10, 44100)));
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Config, ValidationAndEnvironment) {
  ProviderConfig live;
  live.mode = ProviderMode::live;
  live.chat_endpoint = "http://127.0.0.1:1/v1/chat";
  live.transcription_endpoint = "http://127.0.0.1:1/v1/audio";
  EXPECT_EQ(code_of([&] { validate(live); }), Errc::invalid_config);
  live.api_key = "k";
  EXPECT_NO_THROW(validate(live));
  EXPECT_EQ(code_of([] { validate(ProviderConfig{}); }), Errc::invalid_config);
  EXPECT_EQ(code_of([] { make_provider(ProviderConfig{}); }), Errc::invalid_config);

  ::setenv("D3_MODE", "live", 1);
  ::setenv("D3_API_KEY", "secret", 1);
  ::setenv("D3_CHAT_URL", "https://example.invalid/v1/chat/completions", 1);
  ::setenv("D3_TIMEOUT_S", "2.5", 1);
  const auto cfg = config_from_env();
  EXPECT_EQ(cfg.mode, ProviderMode::live);
  EXPECT_EQ(cfg.api_key, "secret");
  EXPECT_EQ(cfg.timeout_s, 2.5);
  ::setenv("D3_MODE", "bogus", 1);
  EXPECT_EQ(code_of([] { config_from_env(); }), Errc::invalid_config);
  for (const char* v : {"D3_MODE", "D3_API_KEY", "D3_CHAT_URL", "D3_TIMEOUT_S"}) ::unsetenv(v);
}

class LocalServer {
 public:
  LocalServer() {
    server_.Post("/v1/chat", [](const httplib::Request& req, httplib::Response& res) {
      const bool auth = req.get_header_value("Authorization") == "Bearer test-key";
      const auto body = nlohmann::json::parse(req.body);
      nlohmann::json reply = {{"choices", {{{"message", {{"content", auth ? body["messages"][0]["content"] : nlohmann::json("denied")}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    server_.Post("/v1/slow", [](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(std::chrono::milliseconds(1500));
      res.set_content("{}", "application/json");
    });
    server_.Post("/v1/audio", [](const httplib::Request& req, httplib::Response& res) {
      const auto& file = req.get_file_value("file");
      nlohmann::json reply = {{"text", req.get_file_value("model").content + ":" + std::to_string(file.content.size())}};
      res.set_content(reply.dump(), "application/json");
    });
    server_.Post("/v1/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

ProviderConfig live_cfg(const LocalServer& s, const std::string& chat_path) {
  ProviderConfig cfg;
  cfg.mode = ProviderMode::live;
  cfg.chat_endpoint = s.url(chat_path);
  cfg.transcription_endpoint = s.url("/v1/audio");
  cfg.api_key = "test-key";
  cfg.timeout_s = 0.3;
  return cfg;
}

TEST(Live, ChatAndTranscriptionOverHttp) {
  LocalServer server;
  const auto before = outbound_request_count();
  LiveProvider live(live_cfg(server, "/v1/chat"));
  EXPECT_EQ(live.chat({"echo me", "generation", "x", 0}).text, "echo me");
  const auto wav = test::make_wav(160);
  EXPECT_EQ(transcribe(wav, live), "whisper-1:" + std::to_string(wav.size()));
  EXPECT_EQ(outbound_request_count(), before + 2);

  LiveProvider broken(live_cfg(server, "/v1/broken"));
  EXPECT_EQ(code_of([&] { broken.chat({"p", "generation", "x", 0}); }), Errc::provider_error);
}

TEST(Live, TimeoutReportsElapsedTime) {
  LocalServer server;
  LiveProvider slow(live_cfg(server, "/v1/slow"));
  const auto start = std::chrono::steady_clock::now();
  try {
    slow.chat({"p", "generation", "x", 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::provider_timeout);
    EXPECT_NE(std::string(e.what()).find(" ms"), std::string::npos) << e.what();
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(1400));
}

TEST(Live, MockModeMakesNoRequests) {
  const auto before = outbound_request_count();
  const std::string block = "component \"petal\" {\n  profile: rect 1 1\n  extrude: 1\n  attach: \"stem\" angle 5\n}\n";
  MockProvider mock({{"modification|rounder", fence(block)}});
  interpret("rounder", flower(), "petal", Stage::modification, mock);
  interpret("47 degrees", flower(), "petal", Stage::modification, mock);
  EXPECT_EQ(outbound_request_count(), before);
}

}  // namespace
}  // namespace d3::nl
