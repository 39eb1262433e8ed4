// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

// Utterance to IntentOp: prompts, response parsing, fast paths and the
// shape/color analogy library.

#pragma once

#include "d3/geometry/profile.hpp"
#include "d3/nl/provider.hpp"
#include "d3/sdl/color.hpp"
#include "d3/sdl/intent.hpp"
#include "d3/sdl/program.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace d3::nl {

enum class Stage { generation, segmentation, modification };

std::string_view stage_name(Stage stage);
std::optional<Stage> parse_stage(std::string_view text);

struct IntentResult {
  sdl::IntentOp op;
  std::string raw_response;  // empty when a fast path answered
  std::int64_t provider_latency_ms = 0;
  bool operator==(const IntentResult&) const = default;
};

/// Throws Error(missing_selection) in the modification stage without a
/// selection and Error(unknown_component) for a selection not in `program`.
std::string build_prompt(Stage stage, std::string_view user_text, const sdl::SceneProgram& program,
                         const std::optional<std::string>& selection);

/// Bodies of fenced regions that contain a component header, in order.
/// Throws Error(unbalanced_fence) or Error(no_block).
std::vector<std::string> extract_block(std::string_view response);

struct ShapeMatch {
  std::string name;
  geom::Profile2D profile;
};

struct ColorMatch {
  std::string name;
  sdl::Rgb rgb;
};

using Analogy = std::variant<std::monostate, ShapeMatch, ColorMatch>;

/// Case-insensitive lookup of library shapes and named colors, e.g.
/// "rose petal", "Aqua", "eggplant skin". Unknown terms give monostate.
Analogy resolve_analogy(std::string_view term);

/// `SetParam attach.angle` for utterances like "47 degrees."
std::optional<sdl::SetParam> angle_fast_path(std::string_view user_text, const std::string& selection);

/// `SetParam color` when the utterance names exactly one color and nothing
/// else beyond filler words, e.g. "Standard HTML aqua."
std::optional<sdl::SetParam> color_fast_path(std::string_view user_text, const std::string& selection);

/// Runs fast paths, then the provider with one retry on invalid output. The
/// returned op is known to apply cleanly to `program`. Throws on precondition
/// failures, provider errors and Error(interpretation_failed).
IntentResult interpret(std::string_view user_text, const sdl::SceneProgram& program,
                       const std::optional<std::string>& selection, Stage stage, Provider& provider);

}  // namespace d3::nl
