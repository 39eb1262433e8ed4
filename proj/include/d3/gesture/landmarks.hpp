// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "d3/geometry/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace d3::gesture {

enum class Hand { left, right };

/// The seven tracked points per hand: thumb chain and index chain.
enum class Joint { thumb_tip, thumb_ip, thumb_mcp, index_tip, index_dip, index_pip, index_mcp };

inline constexpr std::array<std::string_view, 7> kJointNames = {
    "thumb_tip", "thumb_ip", "thumb_mcp", "index_tip", "index_dip", "index_pip", "index_mcp"};

/// x, y in normalized image coordinates (y grows downward), z relative depth.
struct HandPoints {
  std::array<geom::Vec3, 7> points;

  const geom::Vec3& operator[](Joint j) const { return points[static_cast<std::size_t>(j)]; }
  geom::Vec3& operator[](Joint j) { return points[static_cast<std::size_t>(j)]; }
  bool operator==(const HandPoints&) const = default;
};

struct LandmarkFrame {
  std::int64_t timestamp_ms = 0;
  std::optional<HandPoints> left;
  std::optional<HandPoints> right;

  const std::optional<HandPoints>& hand(Hand h) const { return h == Hand::left ? left : right; }
  std::optional<HandPoints>& hand(Hand h) { return h == Hand::left ? left : right; }
  bool operator==(const LandmarkFrame&) const = default;
};

/// Decodes `{"timestamp_ms": t, "left": {"thumb_tip": [x, y, z], ...}, "right": ...}`.
/// Throws d3::Error(bad_request) on schema or range violations.
LandmarkFrame frame_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LandmarkFrame& frame);

/// Decodes an array of frames and checks that timestamps strictly increase.
std::vector<LandmarkFrame> frames_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<LandmarkFrame>& frames);

}  // namespace d3::gesture
