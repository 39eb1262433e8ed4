// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

// JSON wire protocol spoken over the session WebSocket.
//
// Client to server: transcript{text}, audio{wav_base64},
// gesture_frames{frames, mode}, select{component}, set_unit_scale{meters_per_unit},
// set_stage{stage}, undo, redo.
// Server to client: scene{revision, sdl, mesh, stage, selection, ...},
// error{code, message}, ack{for}.

#pragma once

#include "d3/session/session.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace d3::service {

inline constexpr std::size_t kMaxMessageBytes = 1 << 20;

/// A session as the service sees it: engine state plus the revision of the
/// last scene message sent.
struct LiveSession {
  session::SessionState state;
  std::uint64_t revision = 0;
};

struct Outcome {
  nlohmann::json reply;  // exactly one per client message
  bool broadcast = false;  // reply is a new scene every connection should see
};

/// Decodes one client message, runs it against the session and encodes the
/// reply. Protocol errors never touch the session.
Outcome handle_ws_message(LiveSession& live, std::string_view text);

/// Decoded event, or Error(bad_json / unknown_type / bad_request / frame_too_large).
session::Event decode_message(std::string_view text);

nlohmann::json encode_scene(const session::SceneUpdate& update, std::uint64_t revision);
nlohmann::json encode_error(Errc code, std::string_view message);

/// Throws Error(bad_request) on malformed input.
std::string base64_decode(std::string_view text);
std::string base64_encode(std::string_view bytes);

}  // namespace d3::service
