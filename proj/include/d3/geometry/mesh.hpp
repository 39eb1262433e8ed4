// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "d3/geometry/profile.hpp"
#include "d3/geometry/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace d3::geom {

using Triangle = std::array<std::uint32_t, 3>;

struct Mesh {
  std::vector<Vec3> positions;
  std::vector<Triangle> indices;  // counter-clockwise seen from outside
  std::vector<Vec3> normals;      // per vertex, unit length
  bool operator==(const Mesh&) const = default;
};

/// Ear-clipping triangulation of a simple counter-clockwise outline.
/// Returned triangles index into the outline and are counter-clockwise.
/// Throws d3::Error(triangulation_failed) when no ear can be found.
std::vector<Triangle> triangulate(const Outline& outline);

/// Closed prism spanning z in [-depth/2, depth/2]: vertices 0..n-1 form the
/// bottom ring, n..2n-1 the top ring.
Mesh extrude_outline(const Outline& outline, double depth);

/// profile_outline() followed by extrude_outline().
Mesh extrude_profile(const Profile2D& profile, double depth);

}  // namespace d3::geom
