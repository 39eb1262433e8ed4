// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations used to check the geometry kernel.
// Nothing here calls into the library's geometry code.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace d3::test {

/// Divergence theorem: V = 1/6 * sum over triangles of v0 . (v1 x v2).
inline double signed_volume(const std::vector<Eigen::Vector3d>& pos,
                            const std::vector<std::array<std::uint32_t, 3>>& tris) {
  double six_v = 0.0;
  for (const auto& t : tris) six_v += pos[t[0]].dot(pos[t[1]].cross(pos[t[2]]));
  return six_v / 6.0;
}

/// Each undirected edge must be used by exactly two triangles, once in each
/// direction.
inline bool watertight(const std::vector<std::array<std::uint32_t, 3>>& tris) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (const auto& t : tris)
    for (int i = 0; i < 3; ++i) ++directed[{t[i], t[(i + 1) % 3]}];
  for (const auto& [edge, uses] : directed) {
    if (uses != 1) return false;
    auto back = directed.find({edge.second, edge.first});
    if (back == directed.end() || back->second != 1) return false;
  }
  return true;
}

/// Shoelace formula over (x, y) pairs, absolute value.
inline double shoelace(const std::vector<std::pair<double, double>>& pts) {
  double twice = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& [x0, y0] = pts[i];
    const auto& [x1, y1] = pts[(i + 1) % pts.size()];
    twice += x0 * y1 - x1 * y0;
  }
  return std::abs(twice) / 2.0;
}

/// Area of a regular n-gon with circumradius r.
inline double regular_polygon_area(int n, double r) {
  return 0.5 * n * r * r * std::sin(2.0 * M_PI / n);
}

struct ObjData {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<long, 3>> faces;  // 1-based as written
  std::vector<std::string> objects;
};

/// Minimal Wavefront reader: `o`, `v x y z`, `f a b c`.
inline ObjData read_obj(const std::string& text) {
  ObjData out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x, y, z;
      ls >> x >> y >> z;
      out.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::array<long, 3> f{};
      ls >> f[0] >> f[1] >> f[2];
      out.faces.push_back(f);
    } else if (tag == "o") {
      std::string name;
      ls >> name;
      out.objects.push_back(name);
    }
  }
  return out;
}

}  // namespace d3::test
