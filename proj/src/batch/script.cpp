// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/batch/script.hpp"

#include "d3/geometry/export.hpp"
#include "d3/sdl/parser.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace d3::batch {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
}

const json& need(const json& step, const char* name) {
  auto it = step.find(name);
  if (it == step.end()) throw Error(Errc::bad_request, std::string("missing '") + name + "'");
  return *it;
}

session::Event parse_step(const json& step, const fs::path& base) {
  const auto kind = need(step, "kind").get<std::string>();
  if (kind == "transcript") return session::Transcript{need(step, "text").get<std::string>()};
  if (kind == "audio") return session::Audio{read_file(base / need(step, "wav_file").get<std::string>())};
  if (kind == "select") {
    auto it = step.find("component");
    return session::Select{it == step.end() || it->is_null() ? "" : it->get<std::string>()};
  }
  if (kind == "undo") return session::Undo{};
  if (kind == "redo") return session::Redo{};
  if (kind == "stage") {
    const auto stage = nl::parse_stage(need(step, "stage").get<std::string>());
    if (!stage) throw Error(Errc::bad_request, "unknown stage");
    return session::SetStage{*stage};
  }
  if (kind == "unit_scale") return session::SetUnitScale{need(step, "meters_per_unit").get<double>()};
  if (kind == "gesture") {
    const auto mode = session::parse_gesture_mode(need(step, "mode").get<std::string>());
    if (!mode) throw Error(Errc::bad_request, "unknown gesture mode");
    json frames;
    if (auto file = step.find("frames_file"); file != step.end()) {
      frames = json::parse(read_file(base / file->get<std::string>()));
    } else {
      frames = need(step, "frames");
    }
    return session::GestureFrames{gesture::frames_from_json(frames), *mode};
  }
  throw Error(Errc::unknown_type, "unknown step kind '" + kind + "'");
}

json step_record(std::size_t index, const std::string& kind, const session::SessionState& state,
                 const session::SceneUpdate& u) {
  json r = {
      {"index", index},
      {"kind", kind},
      {"revision", index + 1},
      {"ok", u.ok},
      {"message", u.message},
      {"sdl", state.program_text},
      {"diagnostics", u.diagnostics},
      {"stage", nl::stage_name(state.stage)},
      {"selection", state.selection ? json(*state.selection) : json(nullptr)},
  };
  if (!u.ok) r["code"] = error_code_name(u.code);
  if (u.transcript) r["transcript"] = *u.transcript;
  return r;
}

}  // namespace

Script parse_script(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ScriptError(-1, "script must be a JSON object");
  const fs::path base(base_dir);
  Script script;
  if (auto f = j.find("fixtures"); f != j.end()) {
    if (!f->is_string()) throw ScriptError(-1, "'fixtures' must be a string");
    script.fixtures = (base / f->get<std::string>()).lexically_normal().string();
  }
  auto steps = j.find("steps");
  if (steps == j.end() || !steps->is_array()) throw ScriptError(-1, "script needs a 'steps' array");
  for (std::size_t i = 0; i < steps->size(); ++i) {
    const auto& step = (*steps)[i];
    try {
      if (!step.is_object()) throw Error(Errc::bad_request, "step must be an object");
      script.steps.push_back(parse_step(step, base));
      script.kinds.push_back(step["kind"].get<std::string>());
    } catch (const Error& e) {
      throw ScriptError(static_cast<int>(i), "step " + std::to_string(i) + ": " + e.what());
    } catch (const json::exception& e) {
      throw ScriptError(static_cast<int>(i), "step " + std::to_string(i) + ": " + e.what());
    }
  }
  return script;
}

Script load_script(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw ScriptError(-1, e.what());
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ScriptError(-1, "script '" + path + "' is not valid JSON");
  return parse_script(j, fs::path(path).parent_path().string());
}

int run_script(const std::string& script_path, const std::string& out_dir, const RunOptions& options) {
  const fs::path out(out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(Errc::io_error, "cannot create '" + out_dir + "': " + ec.message());
  const auto requests_before = nl::outbound_request_count();

  json events = {{"script", fs::path(script_path).filename().string()}, {"steps", json::array()}};
  auto finish = [&](bool ok, std::optional<int> failed_step, const std::string& error) {
    events["ok"] = ok;
    events["failed_step"] = failed_step ? json(*failed_step) : json(nullptr);
    if (!error.empty()) events["error"] = error;
    events["outbound_requests"] = nl::outbound_request_count() - requests_before;
    write_file(out / "events.json", events.dump(2) + "\n");
    if (ok) {
      fs::remove(out / "FAILED", ec);
    } else {
      write_file(out / "FAILED", error + "\n");
    }
  };

  Script script;
  std::shared_ptr<nl::Provider> provider;
  nl::ProviderConfig cfg = options.cfg;
  try {
    script = load_script(script_path);
    if (cfg.mode == nl::ProviderMode::mock && cfg.fixture_path.empty()) cfg.fixture_path = script.fixtures;
    provider = options.provider ? options.provider : nl::make_provider(cfg);
  } catch (const ScriptError& e) {
    finish(false, e.step() >= 0 ? std::optional<int>(e.step()) : std::nullopt, e.what());
    return kExitBadScript;
  } catch (const Error& e) {
    finish(false, std::nullopt, e.what());
    return kExitBadScript;
  }

  auto state = session::new_session(cfg, provider);
  std::optional<int> failed;
  std::string error;
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    auto [next, update] = session::handle_event(state, script.steps[i]);
    events["steps"].push_back(step_record(i, script.kinds[i], update.ok ? next : state, update));
    if (!update.ok) {
      failed = static_cast<int>(i);
      error = "step " + std::to_string(i) + " (" + script.kinds[i] + "): " + std::string(error_code_name(update.code)) +
              ": " + update.message;
      break;
    }
    state = std::move(next);
  }

  write_file(out / "final.sdl", state.program_text);
  if (state.program_text.empty()) {
    fs::remove(out / "final.obj", ec);
    fs::remove(out / "final.gltf", ec);
  } else {
    const auto mesh = geom::compile_scene(*sdl::parse_program(state.program_text).program);
    write_file(out / "final.obj", geom::export_mesh(mesh, geom::ExportFormat::obj));
    write_file(out / "final.gltf", geom::export_mesh(mesh, geom::ExportFormat::gltf_embedded));
  }
  finish(!failed, failed, error);
  return failed ? kExitStepFailed : kExitOk;
}

}  // namespace d3::batch
