// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/session/session.hpp"

#include "d3/sdl/parser.hpp"
#include "d3/sdl/splice.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

namespace d3::session {
namespace {

using gesture::Hand;
using gesture::LandmarkFrame;

sdl::SceneProgram current_program(const SessionState& s) {
  if (s.program_text.empty()) return {};
  auto parsed = sdl::parse_program(s.program_text);
  if (!parsed.ok()) throw Error(Errc::corrupt_file, "session program does not parse: " + parsed.error_text());
  return *parsed.program;
}

std::string random_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

/// Gesture values are committed at the precision a hand can deliver.
std::string quantized(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return sdl::format_number(std::strtod(buf, nullptr));
}

void fill(const SessionState& s, SceneUpdate& u) {
  u.program_text = s.program_text;
  u.stage = s.stage;
  u.selection = s.selection;
  u.diagnostics.clear();
  if (s.program_text.empty()) {
    u.mesh = {};
    return;
  }
  auto parsed = sdl::parse_program(s.program_text);
  for (const auto& d : parsed.diagnostics) u.diagnostics.push_back(sdl::to_string(d));
  if (!parsed.ok()) throw Error(Errc::parse_error, parsed.error_text());
  u.mesh = geom::compile_scene(*parsed.program);
}

void drop_stale_selection(SessionState& s, const sdl::SceneProgram& program) {
  if (s.selection && !program.find(*s.selection)) s.selection.reset();
}

/// Applies `op` and pushes a history entry when the text changes.
void commit(SessionState& s, const sdl::IntentOp& op, SceneUpdate& u) {
  const auto before = current_program(s);
  const auto after = sdl::apply_intent(before, op);
  std::string text;
  if (const auto* rb = std::get_if<sdl::ReplaceBlock>(&op); rb && !s.program_text.empty()) {
    auto spliced = sdl::splice_block(s.program_text, rb->id, rb->block_text);
    if (spliced.ok) {
      auto reparsed = sdl::parse_program(spliced.text);
      if (reparsed.ok() && *reparsed.program == after) text = std::move(spliced.text);
    }
  }
  if (text.empty()) text = sdl::print_program(after);
  if (text != s.program_text) {
    s.history.resize(s.cursor + 1);
    s.history.push_back(text);
    ++s.cursor;
    s.program_text = std::move(text);
    u.changed = true;
  }
  drop_stale_selection(s, after);
  u.message = sdl::describe(op);
}

const std::string& require_selection(const SessionState& s, const sdl::SceneProgram& program) {
  if (!s.selection) throw Error(Errc::missing_selection, "select a component first");
  if (!program.find(*s.selection)) throw Error(Errc::unknown_component, "unknown component '" + *s.selection + "'");
  return *s.selection;
}

std::optional<PinchTarget> pinch_target_word(std::string_view text) {
  const auto n = nl::normalize_utterance(text);
  if (n == "scale" || n == "size") return PinchTarget::scale;
  if (n == "depth" || n == "extrude" || n == "thickness") return PinchTarget::extrude;
  return std::nullopt;
}

void on_text(SessionState& s, const std::string& text, SceneUpdate& u) {
  const auto program = current_program(s);
  if (s.selection) {
    if (auto target = pinch_target_word(text)) {
      s.pinch_target = *target;
      u.message = std::string("pinch controls ") + (*target == PinchTarget::scale ? "scale" : "extrude");
      return;
    }
  }
  const auto result = nl::interpret(text, program, s.selection, s.stage, *s.provider);
  const bool first_generation = s.stage == Stage::generation && program.empty();
  commit(s, result.op, u);
  if (first_generation && !s.program_text.empty()) s.stage = Stage::segmentation;
}

std::optional<Hand> pinch_hand(const LandmarkFrame& f) {
  if (f.right) return Hand::right;
  if (f.left) return Hand::left;
  return std::nullopt;
}

/// Feeds every usable frame through the stabilizer under `key`.
template <typename Measure>
double stabilized(SessionState& s, const std::string& key, gesture::StabilizerState fresh,
                  const std::vector<LandmarkFrame>& frames, Measure&& measure) {
  auto it = s.stabilizers.find(key);
  auto st = it == s.stabilizers.end() ? fresh : it->second;
  std::optional<double> committed;
  std::optional<Error> last;
  for (const auto& f : frames) {
    try {
      const auto raw = measure(f);
      if (!raw) continue;
      double c = 0;
      std::tie(st, c) = gesture::stabilize(st, *raw);
      committed = c;
    } catch (const Error& e) {
      last = e;
    }
  }
  if (!committed) {
    if (last) throw *last;
    throw Error(Errc::hand_missing, "no frame contains a usable hand");
  }
  s.stabilizers[key] = st;
  return *committed;
}

void on_gesture(SessionState& s, const GestureFrames& g, SceneUpdate& u) {
  const auto program = current_program(s);
  const auto& id = require_selection(s, program);
  if (g.frames.empty()) throw Error(Errc::too_few_frames, "gesture batch has no frames");
  switch (g.mode) {
    case GestureMode::pinch_length: {
      const bool scale = s.pinch_target == PinchTarget::scale;
      const double v = stabilized(s, id + (scale ? ".scale" : ".extrude"), gesture::length_stabilizer(), g.frames,
                                  [&](const LandmarkFrame& f) -> std::optional<double> {
                                    const auto hand = pinch_hand(f);
                                    if (!hand) return std::nullopt;
                                    return gesture::pinch_length(f, *hand, s.meters_per_unit);
                                  });
      u.gesture_value = v;
      commit(s, sdl::SetParam{id, scale ? sdl::FieldPath::scale : sdl::FieldPath::extrude, quantized(v, "%.4g")}, u);
      return;
    }
    case GestureMode::opening_angle: {
      const double v = stabilized(s, id + ".attach.angle", gesture::angle_stabilizer(), g.frames,
                                  [](const LandmarkFrame& f) -> std::optional<double> {
                                    if (!f.left || !f.right) return std::nullopt;
                                    return gesture::opening_angle(f);
                                  });
      u.gesture_value = v;
      commit(s, sdl::SetParam{id, sdl::FieldPath::attach_angle, quantized(v, "%.2f")}, u);
      return;
    }
    case GestureMode::trace: {
      std::size_t right = 0;
      std::size_t left = 0;
      for (const auto& f : g.frames) {
        right += f.right.has_value();
        left += f.left.has_value();
      }
      const Hand hand = right >= left ? Hand::right : Hand::left;
      sdl::IntentOp op;
      try {
        auto poly = gesture::trace_profile(g.frames, hand);
        for (auto& v : poly.vertices) v *= s.meters_per_unit;
        auto block = *program.find(id);
        block.profile = std::move(poly);
        op = sdl::ReplaceBlock{id, sdl::print_block(block)};
      } catch (const Error& e) {
        if (e.code() != Errc::self_intersecting_trace) throw;
        // A crossing path still says something about the intended shape.
        const auto text = gesture::describe_frames(g.frames);
        u.transcript = text;
        op = nl::interpret(text, program, s.selection, Stage::modification, *s.provider).op;
      }
      commit(s, op, u);
      return;
    }
  }
}

struct Dispatch {
  SessionState& s;
  SceneUpdate& u;

  void operator()(const Transcript& e) {
    u.transcript = e.text;
    on_text(s, e.text, u);
  }
  void operator()(const Audio& e) {
    const auto text = nl::transcribe(e.wav, *s.provider);
    u.transcript = text;
    on_text(s, text, u);
  }
  void operator()(const GestureFrames& e) { on_gesture(s, e, u); }
  void operator()(const Select& e) {
    if (e.id.empty()) {
      s.selection.reset();
      u.message = "selection cleared";
      return;
    }
    if (!current_program(s).find(e.id)) throw Error(Errc::unknown_component, "unknown component '" + e.id + "'");
    s.selection = e.id;
    u.message = "selected " + e.id;
  }
  void operator()(const SetUnitScale& e) {
    if (!(e.meters_per_unit > 0) || !std::isfinite(e.meters_per_unit))
      throw Error(Errc::invalid_value, "meters_per_unit must be positive and finite");
    s.meters_per_unit = e.meters_per_unit;
    s.stabilizers.clear();
    u.message = "unit scale " + sdl::format_number(e.meters_per_unit);
  }
  void operator()(const Undo&) {
    if (s.cursor == 0) throw Error(Errc::nothing_to_undo, "nothing to undo");
    move_to(s.cursor - 1);
    u.message = "undo";
  }
  void operator()(const Redo&) {
    if (s.cursor + 1 >= s.history.size()) throw Error(Errc::nothing_to_redo, "nothing to redo");
    move_to(s.cursor + 1);
    u.message = "redo";
  }
  void operator()(const SetStage& e) {
    if (e.stage != Stage::generation && s.program_text.empty())
      throw Error(Errc::stage_error, std::string(nl::stage_name(e.stage)) + " needs a generated model");
    s.stage = e.stage;
    u.message = "stage " + std::string(nl::stage_name(e.stage));
  }

  void move_to(std::size_t cursor) {
    s.cursor = cursor;
    s.program_text = s.history[cursor];
    s.stabilizers.clear();
    drop_stale_selection(s, current_program(s));
    u.changed = true;
  }
};

SessionState fresh(const nl::ProviderConfig& cfg, std::shared_ptr<nl::Provider> provider) {
  if (!provider) throw Error(Errc::invalid_config, "no provider");
  SessionState s;
  s.id = random_id();
  s.cfg = cfg;
  s.provider = std::move(provider);
  return s;
}

}  // namespace

std::string_view gesture_mode_name(GestureMode mode) {
  switch (mode) {
    case GestureMode::pinch_length: return "pinch_length";
    case GestureMode::opening_angle: return "opening_angle";
    case GestureMode::trace: return "trace";
  }
  return "pinch_length";
}

std::optional<GestureMode> parse_gesture_mode(std::string_view text) {
  for (auto m : {GestureMode::pinch_length, GestureMode::opening_angle, GestureMode::trace})
    if (gesture_mode_name(m) == text) return m;
  return std::nullopt;
}

SessionState new_session(const nl::ProviderConfig& cfg) { return fresh(cfg, nl::make_provider(cfg)); }

SessionState new_session(const nl::ProviderConfig& cfg, std::shared_ptr<nl::Provider> provider) {
  return fresh(cfg, std::move(provider));
}

std::pair<SessionState, SceneUpdate> handle_event(const SessionState& state, const Event& event) {
  SessionState next = state;
  SceneUpdate update;
  try {
    std::visit(Dispatch{next, update}, event);
    fill(next, update);
    return {std::move(next), std::move(update)};
  } catch (const Error& e) {
    SceneUpdate failed;
    failed.ok = false;
    failed.code = e.code();
    failed.message = e.what();
    failed.program_text = state.program_text;
    failed.stage = state.stage;
    failed.selection = state.selection;
    return {state, std::move(failed)};
  }
}

std::pair<SessionState, SceneUpdate> undo(const SessionState& state) { return handle_event(state, Undo{}); }
std::pair<SessionState, SceneUpdate> redo(const SessionState& state) { return handle_event(state, Redo{}); }

SceneUpdate snapshot(const SessionState& state) {
  SceneUpdate u;
  fill(state, u);
  return u;
}

void save_session(const SessionState& state, const std::string& path) {
  nlohmann::json j = {
      {"version", 1},
      {"id", state.id},
      {"stage", nl::stage_name(state.stage)},
      {"history", state.history},
      {"cursor", state.cursor},
      {"selection", state.selection ? nlohmann::json(*state.selection) : nlohmann::json(nullptr)},
      {"meters_per_unit", state.meters_per_unit},
  };
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << j.dump(2) << '\n';
    if (!out) throw Error(Errc::io_error, "cannot write session file '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::io_error, "cannot write session file '" + path + "': " + ec.message());
}

SessionState load_session(const std::string& path, const nl::ProviderConfig& cfg) {
  return load_session(path, cfg, nl::make_provider(cfg));
}

SessionState load_session(const std::string& path, const nl::ProviderConfig& cfg,
                          std::shared_ptr<nl::Provider> provider) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read session file '" + path + "'");
  SessionState s = fresh(cfg, std::move(provider));
  try {
    const auto j = nlohmann::json::parse(in);
    const auto version = j.at("version").get<int>();
    if (version != 1) throw Error(Errc::version_mismatch, "unsupported session version " + std::to_string(version));
    s.id = j.at("id").get<std::string>();
    const auto stage = nl::parse_stage(j.at("stage").get<std::string>());
    if (!stage) throw Error(Errc::corrupt_file, "unknown stage");
    s.stage = *stage;
    s.history = j.at("history").get<std::vector<std::string>>();
    s.cursor = j.at("cursor").get<std::size_t>();
    if (!j.at("selection").is_null()) s.selection = j.at("selection").get<std::string>();
    s.meters_per_unit = j.at("meters_per_unit").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::corrupt_file, "session file '" + path + "': " + e.what());
  }
  if (s.history.empty() || s.cursor >= s.history.size())
    throw Error(Errc::corrupt_file, "session file '" + path + "': cursor out of range");
  if (!(s.meters_per_unit > 0)) throw Error(Errc::corrupt_file, "session file '" + path + "': bad meters_per_unit");
  for (const auto& text : s.history) {
    if (!text.empty() && !sdl::parse_program(text).ok())
      throw Error(Errc::corrupt_file, "session file '" + path + "': history entry does not parse");
  }
  s.program_text = s.history[s.cursor];
  drop_stale_selection(s, current_program(s));
  return s;
}

}  // namespace d3::session
