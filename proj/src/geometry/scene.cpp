// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/geometry/scene.hpp"

#include "d3/error.hpp"

#include <map>
#include <numbers>

namespace d3::geom {
namespace {

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

Mat4 homogeneous(const Mat3& rotation, const Vec3& translation) {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

}  // namespace

bool MeshSet::operator==(const MeshSet& other) const {
  if (entries.size() != other.entries.size()) return false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& a = entries[i];
    const auto& b = other.entries[i];
    if (a.component_id != b.component_id || a.instance != b.instance || a.color != b.color ||
        a.world_transform != b.world_transform || (a.mesh == nullptr) != (b.mesh == nullptr))
      return false;
    if (a.mesh && !(*a.mesh == *b.mesh)) return false;
  }
  return true;
}

std::vector<Mat4> instance_frames(const sdl::ComponentBlock& block, const Mat4& parent_frame) {
  const bool radial = block.attach && block.attach->mode == sdl::AttachMode::radial;
  const double tilt = block.attach ? block.attach->angle_deg : 0.0;
  const Vec3 offset = block.attach ? block.attach->offset : Vec3::Zero();
  const Mat3 tilt_rotation = Eigen::AngleAxisd(radians(tilt), Vec3::UnitX()).toRotationMatrix();

  std::vector<Mat4> frames;
  frames.reserve(static_cast<std::size_t>(block.count));
  for (int k = 0; k < block.count; ++k) {
    const double azimuth = radial ? 360.0 * k / block.count : 0.0;
    const Mat3 spin = Eigen::AngleAxisd(radians(azimuth), Vec3::UnitY()).toRotationMatrix();
    frames.push_back(parent_frame * homogeneous(spin * tilt_rotation, offset));
  }
  return frames;
}

std::vector<Mat4> place_instances(const sdl::ComponentBlock& block, const Mat4& parent_frame) {
  auto frames = instance_frames(block, parent_frame);
  Mat4 scale = Mat4::Identity();
  scale.topLeftCorner<3, 3>() = block.scale.factors.asDiagonal();
  for (auto& f : frames) f = f * scale;
  return frames;
}

MeshSet compile_scene(const sdl::SceneProgram& program) {
  const auto* root = program.root();
  if (!root) return {};

  std::map<std::string, std::vector<const sdl::ComponentBlock*>> children;
  for (const auto& b : program.components)
    if (b.attach) children[b.attach->parent_id].push_back(&b);

  std::map<std::string, std::vector<Mat4>> frames;
  std::vector<std::pair<const sdl::ComponentBlock*, Mat4>> stack{{root, Mat4::Identity()}};
  while (!stack.empty()) {
    auto [block, parent] = stack.back();
    stack.pop_back();
    auto& own = frames[block->id] = instance_frames(*block, parent);
    auto it = children.find(block->id);
    if (it == children.end()) continue;
    for (auto c = it->second.rbegin(); c != it->second.rend(); ++c) stack.emplace_back(*c, own.front());
  }

  MeshSet out;
  for (const auto& block : program.components) {
    std::shared_ptr<const Mesh> mesh;
    try {
      mesh = std::make_shared<const Mesh>(extrude_profile(block.profile, block.extrude_depth));
    } catch (const Error& e) {
      throw Error(e.code(), "component '" + block.id + "': " + e.what());
    }
    const auto placed = place_instances(
        block, block.attach ? frames.at(block.attach->parent_id).front() : Mat4::Identity());
    for (int k = 0; k < block.count; ++k) {
      out.entries.push_back({block.id, k, mesh, placed[static_cast<std::size_t>(k)], block.color});
    }
  }
  return out;
}

}  // namespace d3::geom
