// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "d3/geometry/profile.hpp"
#include "d3/geometry/types.hpp"
#include "d3/sdl/color.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace d3::sdl {

enum class AttachMode { radial, fixed };

struct AttachConstraint {
  std::string parent_id;
  double angle_deg = 0.0;  // 0 closed (plane contains the parent axis), 90 open
  AttachMode mode = AttachMode::radial;
  geom::Vec3 offset = geom::Vec3::Zero();  // parent's local frame
  bool operator==(const AttachConstraint&) const = default;
};

/// Either a single uniform factor or three per-axis factors. Both forms are
/// kept distinct so printing reproduces what was parsed.
struct Scale {
  geom::Vec3 factors = geom::Vec3::Ones();
  bool uniform = true;

  static Scale of(double s) { return {geom::Vec3::Constant(s), true}; }
  static Scale of(double x, double y, double z) { return {geom::Vec3(x, y, z), false}; }
  bool is_identity() const { return uniform && factors.x() == 1.0; }
  bool operator==(const Scale&) const = default;
};

struct ComponentBlock {
  std::string id;
  geom::Profile2D profile;
  double extrude_depth = 0.0;
  Rgb color{255, 255, 255};
  int count = 1;
  Scale scale;
  std::optional<AttachConstraint> attach;
  bool operator==(const ComponentBlock&) const = default;
};

/// Ordered component tree. A valid program has exactly one root (the only
/// block without `attach`) and every other block reaches it through its
/// parent chain. An empty component list only appears before the first
/// generation.
struct SceneProgram {
  std::string name;
  std::vector<ComponentBlock> components;

  const ComponentBlock* find(std::string_view id) const;
  ComponentBlock* find(std::string_view id);
  const ComponentBlock* root() const;
  bool empty() const { return components.empty(); }
  bool operator==(const SceneProgram&) const = default;
};

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  int line = 1;
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

std::string to_string(const Diagnostic& d);

/// `program` is set iff no error diagnostic was produced.
struct ParseResult {
  std::optional<SceneProgram> program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
  /// Error diagnostics joined into one line each.
  std::string error_text() const;
};

struct BlockParseResult {
  std::optional<ComponentBlock> block;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return block.has_value(); }
  std::string error_text() const;
};

bool is_valid_id(std::string_view id);

}  // namespace d3::sdl
