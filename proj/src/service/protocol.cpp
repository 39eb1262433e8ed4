// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/service/protocol.hpp"

#include "d3/sdl/color.hpp"

#include <openssl/evp.h>

#include <cmath>

namespace d3::service {
namespace {

using nlohmann::json;

const json& field(const json& msg, const char* name, json::value_t type) {
  auto it = msg.find(name);
  if (it == msg.end()) throw Error(Errc::bad_request, std::string("missing field '") + name + "'");
  const bool ok = it->type() == type ||
                  (type == json::value_t::number_float && it->is_number());
  if (!ok) throw Error(Errc::bad_request, std::string("field '") + name + "' has the wrong type");
  return *it;
}

json encode_entry(const geom::MeshEntry& e) {
  json positions = json::array();
  json normals = json::array();
  json indices = json::array();
  for (const auto& p : e.mesh->positions)
    for (int k = 0; k < 3; ++k) positions.push_back(p[k]);
  for (const auto& n : e.mesh->normals)
    for (int k = 0; k < 3; ++k) normals.push_back(n[k]);
  for (const auto& t : e.mesh->indices)
    for (auto i : t) indices.push_back(i);
  json transform = json::array();
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) transform.push_back(e.world_transform(r, c));
  return {
      {"id", e.component_id}, {"instance", e.instance}, {"positions", std::move(positions)},
      {"normals", std::move(normals)}, {"indices", std::move(indices)}, {"color", sdl::to_hex(e.color)},
      {"transform", std::move(transform)},
  };
}

}  // namespace

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw Error(Errc::bad_request, "base64 length is not a multiple of 4");
  if (text.empty()) return {};
  std::string out(text.size() / 4 * 3, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  if (n < 0) throw Error(Errc::bad_request, "malformed base64");
  std::size_t pad = 0;
  if (text.back() == '=') ++pad;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

session::Event decode_message(std::string_view text) {
  if (text.size() > kMaxMessageBytes)
    throw Error(Errc::frame_too_large, "message exceeds " + std::to_string(kMaxMessageBytes) + " bytes");
  json msg = json::parse(text, nullptr, false);
  if (msg.is_discarded()) throw Error(Errc::bad_json, "message is not valid JSON");
  if (!msg.is_object()) throw Error(Errc::bad_json, "message must be a JSON object");
  auto type_it = msg.find("type");
  if (type_it == msg.end() || !type_it->is_string()) throw Error(Errc::bad_json, "message has no string 'type'");
  const auto type = type_it->get<std::string>();
  using VT = json::value_t;
  if (type == "transcript") return session::Transcript{field(msg, "text", VT::string).get<std::string>()};
  if (type == "audio") return session::Audio{base64_decode(field(msg, "wav_base64", VT::string).get<std::string>())};
  if (type == "gesture_frames") {
    const auto mode = session::parse_gesture_mode(field(msg, "mode", VT::string).get<std::string>());
    if (!mode) throw Error(Errc::bad_request, "unknown gesture mode");
    return session::GestureFrames{gesture::frames_from_json(field(msg, "frames", VT::array)), *mode};
  }
  if (type == "select") {
    auto it = msg.find("component");
    if (it == msg.end() || it->is_null()) return session::Select{};
    return session::Select{field(msg, "component", VT::string).get<std::string>()};
  }
  if (type == "set_unit_scale") {
    return session::SetUnitScale{field(msg, "meters_per_unit", VT::number_float).get<double>()};
  }
  if (type == "set_stage") {
    const auto stage = nl::parse_stage(field(msg, "stage", VT::string).get<std::string>());
    if (!stage) throw Error(Errc::bad_request, "unknown stage");
    return session::SetStage{*stage};
  }
  if (type == "undo") return session::Undo{};
  if (type == "redo") return session::Redo{};
  throw Error(Errc::unknown_type, "unknown message type '" + type + "'");
}

json encode_scene(const session::SceneUpdate& u, std::uint64_t revision) {
  json mesh = json::array();
  for (const auto& e : u.mesh.entries) mesh.push_back(encode_entry(e));
  json out = {
      {"type", "scene"},
      {"revision", revision},
      {"sdl", u.program_text},
      {"mesh", std::move(mesh)},
      {"stage", nl::stage_name(u.stage)},
      {"selection", u.selection ? json(*u.selection) : json(nullptr)},
      {"diagnostics", u.diagnostics},
      {"message", u.message},
  };
  if (u.transcript) out["transcript"] = *u.transcript;
  if (u.gesture_value) out["gesture_value"] = *u.gesture_value;
  return out;
}

json encode_error(Errc code, std::string_view message) {
  return {{"type", "error"}, {"code", error_code_name(code)}, {"message", message}};
}

Outcome handle_ws_message(LiveSession& live, std::string_view text) {
  session::Event event;
  try {
    event = decode_message(text);
  } catch (const Error& e) {
    return {encode_error(e.code(), e.what()), false};
  }
  auto [next, update] = session::handle_event(live.state, event);
  if (!update.ok) return {encode_error(update.code, update.message), false};
  live.state = std::move(next);
  if (std::holds_alternative<session::SetUnitScale>(event))
    return {{{"type", "ack"}, {"for", "set_unit_scale"}, {"message", update.message}}, false};
  return {encode_scene(update, ++live.revision), true};
}

}  // namespace d3::service
