// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/geometry/mesh.hpp"

#include "d3/error.hpp"
#include "d3/geometry/polygon.hpp"

#include <numeric>
#include <optional>

namespace d3::geom {

std::vector<Triangle> triangulate(const Outline& pts) {
  const std::size_t n = pts.size();
  if (n < 3) throw Error(Errc::triangulation_failed, "outline needs at least 3 vertices");

  std::vector<std::uint32_t> ring(n);
  std::iota(ring.begin(), ring.end(), 0U);
  std::vector<Triangle> tris;
  tris.reserve(n - 2);

  auto corners = [&](std::size_t k) {
    const std::size_t m = ring.size();
    return Triangle{ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]};
  };

  auto is_ear = [&](std::size_t k) {
    const auto t = corners(k);
    const Vec2& a = pts[t[0]];
    const Vec2& b = pts[t[1]];
    const Vec2& c = pts[t[2]];
    if (orient(a, b, c) <= 0.0) return false;
    for (std::uint32_t v : ring) {
      if (v == t[0] || v == t[1] || v == t[2]) continue;
      if (in_triangle(a, b, c, pts[v])) return false;
    }
    return true;
  };

  std::size_t start = 0;
  while (ring.size() > 3) {
    const std::size_t m = ring.size();
    std::optional<std::size_t> ear;
    for (std::size_t i = 0; i < m && !ear; ++i) {
      if (is_ear((start + i) % m)) ear = (start + i) % m;
    }
    if (!ear) {
      // Straight-through vertices can block every ear; clipping one adds a
      // zero-area triangle but keeps the cap edge-consistent.
      for (std::size_t k = 0; k < m && !ear; ++k) {
        const auto t = corners(k);
        if (orient(pts[t[0]], pts[t[1]], pts[t[2]]) == 0.0 &&
            (pts[t[1]] - pts[t[0]]).dot(pts[t[2]] - pts[t[1]]) > 0.0)
          ear = k;
      }
    }
    if (!ear) throw Error(Errc::triangulation_failed, "ear clipping found no ear");
    tris.push_back(corners(*ear));
    ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(*ear));
    start = *ear % ring.size();
  }
  tris.push_back({ring[0], ring[1], ring[2]});
  return tris;
}

Mesh extrude_outline(const Outline& outline, double depth) {
  if (!(depth > 0.0)) throw Error(Errc::invalid_value, "extrude depth must be positive");
  const auto cap = triangulate(outline);
  const auto n = static_cast<std::uint32_t>(outline.size());
  const double half = depth / 2.0;

  Mesh mesh;
  mesh.positions.reserve(2 * n);
  for (const auto& p : outline) mesh.positions.emplace_back(p.x(), p.y(), -half);
  for (const auto& p : outline) mesh.positions.emplace_back(p.x(), p.y(), half);

  mesh.indices.reserve(2 * cap.size() + 2 * n);
  for (const auto& t : cap) mesh.indices.push_back({t[0], t[2], t[1]});
  for (const auto& t : cap) mesh.indices.push_back({t[0] + n, t[1] + n, t[2] + n});
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t j = (i + 1) % n;
    mesh.indices.push_back({i, j, n + j});
    mesh.indices.push_back({i, n + j, n + i});
  }

  mesh.normals.assign(mesh.positions.size(), Vec3::Zero());
  for (const auto& t : mesh.indices) {
    const Vec3 face = (mesh.positions[t[1]] - mesh.positions[t[0]])
                          .cross(mesh.positions[t[2]] - mesh.positions[t[0]]);
    for (auto v : t) mesh.normals[v] += face;
  }
  for (auto& nrm : mesh.normals) {
    const double len = nrm.norm();
    nrm = len > 0.0 ? Vec3(nrm / len) : Vec3::UnitZ();
  }
  return mesh;
}

Mesh extrude_profile(const Profile2D& profile, double depth) {
  return extrude_outline(profile_outline(profile), depth);
}

}  // namespace d3::geom
