// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "d3/sdl/program.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace d3::sdl {

enum class FieldPath { color, extrude, count, scale, attach_angle, attach_offset };

std::optional<FieldPath> parse_field_path(std::string_view text);
std::string_view field_path_name(FieldPath path);

struct ReplaceBlock {
  std::string id;
  std::string block_text;
  bool operator==(const ReplaceBlock&) const = default;
};

struct AddComponent {
  std::string block_text;
  bool operator==(const AddComponent&) const = default;
};

/// Removes the component and all of its descendants.
struct RemoveComponent {
  std::string id;
  bool operator==(const RemoveComponent&) const = default;
};

/// `value` uses SDL field syntax: "47", "aqua", "#FF0000", "1 0.5 1".
struct SetParam {
  std::string id;
  FieldPath field = FieldPath::color;
  std::string value;
  bool operator==(const SetParam&) const = default;
};

/// Rewrites one component as finer sub-components.
struct Segment {
  std::string id;
  std::vector<std::string> replacement_block_texts;
  bool operator==(const Segment&) const = default;
};

using IntentOp =
    std::variant<ReplaceBlock, AddComponent, RemoveComponent, SetParam, Segment>;

/// Applies one edit and returns the new, validated program.
/// Throws d3::Error (unknown_component, invalid_value, invalid_edit,
/// parse_error); `program` is never modified.
SceneProgram apply_intent(const SceneProgram& program, const IntentOp& op);

/// Short human-readable summary, e.g. `set_param petal attach.angle 47`.
std::string describe(const IntentOp& op);

}  // namespace d3::sdl
