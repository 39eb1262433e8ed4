// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/geometry/shape_library.hpp"

#include <cmath>
#include <numbers>

namespace d3::geom {
namespace {

Profile2D star() {
  PolygonProfile p;
  for (int i = 0; i < 10; ++i) {
    const double r = i % 2 == 0 ? 0.5 : 0.2;
    const double t = std::numbers::pi / 2.0 + i * std::numbers::pi / 5.0;
    p.vertices.emplace_back(r * std::cos(t), r * std::sin(t));
  }
  return p;
}

}  // namespace

std::optional<Profile2D> library_shape(std::string_view name) {
  // Petal-like outlines stand on the origin and grow along +y.
  if (name == "rose_petal") {
    return BezierProfile{{Vec2(0.0, 0.0), Vec2(0.35, 0.05), Vec2(0.55, 0.6),
                          Vec2(0.3, 0.95), Vec2(0.15, 1.05), Vec2(-0.15, 1.05),
                          Vec2(-0.3, 0.95), Vec2(-0.55, 0.6), Vec2(-0.35, 0.05)},
                         12};
  }
  if (name == "lotus_petal") {
    return BezierProfile{{Vec2(0.0, 0.0), Vec2(0.3, 0.1), Vec2(0.35, 0.6),
                          Vec2(0.0, 1.2), Vec2(-0.35, 0.6), Vec2(-0.3, 0.1)},
                         16};
  }
  if (name == "leaf") {
    return BezierProfile{{Vec2(0.0, 0.0), Vec2(0.5, 0.2), Vec2(0.4, 0.8),
                          Vec2(0.0, 1.0), Vec2(-0.4, 0.8), Vec2(-0.5, 0.2)},
                         16};
  }
  if (name == "circle") return EllipseProfile{0.5, 0.5, 48};
  if (name == "rectangle") return RectProfile{1.0, 1.0};
  if (name == "star") return star();
  return std::nullopt;
}

const std::vector<std::string>& library_shape_names() {
  static const std::vector<std::string> names{
      "circle", "leaf", "lotus_petal", "rectangle", "rose_petal", "star"};
  return names;
}

}  // namespace d3::geom
