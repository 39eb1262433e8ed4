// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "d3/geometry/scene.hpp"

#include <string>
#include <string_view>

namespace d3::geom {

enum class ExportFormat {
  obj,            // ASCII Wavefront, world-space vertices
  gltf,           // binary glTF 2.0 container (.glb)
  gltf_embedded,  // glTF 2.0 JSON with a base64 data-URI buffer
};

/// Serialized file bytes. Output is bit-stable for a given MeshSet.
std::string export_mesh(const MeshSet& meshes, ExportFormat format);

std::string_view content_type(ExportFormat format);

}  // namespace d3::geom
