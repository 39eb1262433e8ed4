// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "d3/geometry/mesh.hpp"
#include "d3/geometry/types.hpp"
#include "d3/sdl/program.hpp"

#include <memory>
#include <string>
#include <vector>

namespace d3::geom {

struct MeshEntry {
  std::string component_id;
  int instance = 0;
  std::shared_ptr<const Mesh> mesh;  // shared by all instances of a component
  Mat4 world_transform = Mat4::Identity();
  sdl::Rgb color;
};

/// One entry per placed instance, in document order then instance index.
struct MeshSet {
  std::vector<MeshEntry> entries;

  bool operator==(const MeshSet& other) const;
};

/// Rigid frames (rotation + translation) of each instance of `block`
/// relative to the world, given the parent's rigid frame. Local up is +y.
/// Radial instance k sits at azimuth 360k/count about the parent's up-axis;
/// every instance is tilted by the attach angle from that axis.
std::vector<Mat4> instance_frames(const sdl::ComponentBlock& block, const Mat4& parent_frame);

/// instance_frames() composed with the block's scale.
std::vector<Mat4> place_instances(const sdl::ComponentBlock& block, const Mat4& parent_frame);

/// Compiles the whole tree. Children attach to instance 0 of their parent.
/// Throws d3::Error annotated with the failing component id.
MeshSet compile_scene(const sdl::SceneProgram& program);

}  // namespace d3::geom
