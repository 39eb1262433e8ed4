// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

// Headless replay of scripted sessions. See docs/script-format.md.

#pragma once

#include "d3/error.hpp"
#include "d3/nl/provider.hpp"
#include "d3/session/session.hpp"

#include <nlohmann/json_fwd.hpp>

#include <memory>
#include <string>
#include <vector>

namespace d3::batch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitStepFailed = 1;
inline constexpr int kExitBadScript = 2;

struct Script {
  std::string fixtures;  // resolved against the script's directory; may be empty
  std::vector<session::Event> steps;
  std::vector<std::string> kinds;  // original kind per step
};

/// A script that cannot run; `step` is the offending index, or -1 for
/// problems with the file as a whole.
class ScriptError : public Error {
 public:
  ScriptError(int step, const std::string& message) : Error(Errc::bad_request, message), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// Throws ScriptError.
Script load_script(const std::string& path);
Script parse_script(const nlohmann::json& j, const std::string& base_dir);

struct RunOptions {
  nl::ProviderConfig cfg;
  /// Overrides the provider built from `cfg` (tests).
  std::shared_ptr<nl::Provider> provider;
};

/// Runs every step and writes final.sdl, final.obj, final.gltf and
/// events.json into `out_dir`. Returns kExitOk, kExitStepFailed or
/// kExitBadScript. In mock mode without a fixture path the script's own
/// `fixtures` entry is used.
int run_script(const std::string& script_path, const std::string& out_dir, const RunOptions& options);

}  // namespace d3::batch
