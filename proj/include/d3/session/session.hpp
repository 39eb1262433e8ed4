// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

// Live editing session: stage machine, event handling, undo/redo history
// and save/load.

#pragma once

#include "d3/error.hpp"
#include "d3/geometry/scene.hpp"
#include "d3/gesture/gesture.hpp"
#include "d3/gesture/landmarks.hpp"
#include "d3/nl/interpret.hpp"
#include "d3/nl/provider.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace d3::session {

using nl::Stage;

enum class GestureMode { pinch_length, opening_angle, trace };

std::string_view gesture_mode_name(GestureMode mode);
std::optional<GestureMode> parse_gesture_mode(std::string_view text);

/// Field driven by pinch gestures; switched by saying "scale" or "depth".
enum class PinchTarget { extrude, scale };

struct Transcript {
  std::string text;
};
struct Audio {
  std::string wav;
};
struct GestureFrames {
  std::vector<gesture::LandmarkFrame> frames;
  GestureMode mode = GestureMode::pinch_length;
};
/// An empty id clears the selection.
struct Select {
  std::string id;
};
struct SetUnitScale {
  double meters_per_unit = 1.0;
};
struct Undo {};
struct Redo {};
struct SetStage {
  Stage stage = Stage::generation;
};

using Event = std::variant<Transcript, Audio, GestureFrames, Select, SetUnitScale, Undo, Redo, SetStage>;

struct SessionState {
  std::string id;
  Stage stage = Stage::generation;
  std::string program_text;
  std::vector<std::string> history{""};
  std::size_t cursor = 0;
  std::optional<std::string> selection;
  double meters_per_unit = 1.0;
  std::map<std::string, gesture::StabilizerState> stabilizers;  // "<component>.<field>"
  PinchTarget pinch_target = PinchTarget::extrude;
  nl::ProviderConfig cfg;
  std::shared_ptr<nl::Provider> provider;
  bool operator==(const SessionState&) const = default;
};

struct SceneUpdate {
  bool ok = true;
  Errc code = Errc::bad_request;  // meaningful only when !ok
  std::string message;            // error text, or what the event did
  std::string program_text;
  geom::MeshSet mesh;
  std::vector<std::string> diagnostics;
  Stage stage = Stage::generation;
  std::optional<std::string> selection;
  bool changed = false;  // a history entry was added or the cursor moved
  std::optional<std::string> transcript;
  std::optional<double> gesture_value;  // stabilized value behind a gesture edit
};

/// Throws Error(invalid_config).
SessionState new_session(const nl::ProviderConfig& cfg);
/// Uses `provider` instead of building one from `cfg`.
SessionState new_session(const nl::ProviderConfig& cfg, std::shared_ptr<nl::Provider> provider);

/// Never throws for event-level failures: the returned state is then equal to
/// `state` and the update carries the error.
std::pair<SessionState, SceneUpdate> handle_event(const SessionState& state, const Event& event);

std::pair<SessionState, SceneUpdate> undo(const SessionState& state);
std::pair<SessionState, SceneUpdate> redo(const SessionState& state);

/// Current scene without changing anything.
SceneUpdate snapshot(const SessionState& state);

/// Writes {version, id, stage, history, cursor, selection, meters_per_unit}.
/// Provider settings are never written. Throws Error(io_error).
void save_session(const SessionState& state, const std::string& path);

/// Throws Error(io_error), Error(version_mismatch) or Error(corrupt_file).
SessionState load_session(const std::string& path, const nl::ProviderConfig& cfg);
SessionState load_session(const std::string& path, const nl::ProviderConfig& cfg,
                          std::shared_ptr<nl::Provider> provider);

}  // namespace d3::session
