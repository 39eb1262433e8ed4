// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "d3/geometry/types.hpp"

#include <string>
#include <variant>
#include <vector>

namespace d3::geom {

/// Axis-aligned rectangle standing on the origin: x in [-w/2, w/2], y in [0, h].
struct RectProfile {
  double width = 1.0;
  double height = 1.0;
  bool operator==(const RectProfile&) const = default;
};

/// Origin-centred ellipse sampled at `segments` evenly spaced parameters.
struct EllipseProfile {
  double rx = 1.0;
  double ry = 1.0;
  int segments = 32;
  bool operator==(const EllipseProfile&) const = default;
};

struct PolygonProfile {
  std::vector<Vec2> vertices;
  bool operator==(const PolygonProfile&) const = default;
};

/// Closed chain of cubic segments. Segment k uses controls 3k .. 3k+3, the
/// last control wrapping to controls[0]; each segment contributes `samples`
/// outline vertices.
struct BezierProfile {
  std::vector<Vec2> controls;
  int samples = 8;
  bool operator==(const BezierProfile&) const = default;
};

/// Named outline from the built-in shape library.
struct RefProfile {
  std::string name;
  bool operator==(const RefProfile&) const = default;
};

using Profile2D = std::variant<RectProfile, EllipseProfile, PolygonProfile,
                               BezierProfile, RefProfile>;

/// Closed, simple, counter-clockwise outline of a profile.
/// Throws d3::Error (unknown_shape, degenerate_profile, non_simple_profile).
Outline profile_outline(const Profile2D& profile);

/// Unsigned shoelace area. Throws degenerate_profile below three vertices.
double profile_area(const Outline& outline);

/// Checks dimensional constraints and outline simplicity; returns an empty
/// string when valid, otherwise a human-readable reason.
std::string profile_problem(const Profile2D& profile);

}  // namespace d3::geom
