// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

// Scalar-generic planar polygon predicates. Outlines are implicitly closed.

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <vector>

namespace d3::geom {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// z-component of (b - a) x (c - a); positive for a left turn.
template <typename Scalar>
Scalar orient(const Point2<Scalar>& a, const Point2<Scalar>& b,
              const Point2<Scalar>& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

/// Shoelace signed area; positive for counter-clockwise outlines.
template <typename Scalar>
Scalar signed_area(const std::vector<Point2<Scalar>>& pts) {
  const std::size_t n = pts.size();
  Scalar twice = Scalar(0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return twice / Scalar(2);
}

template <typename Scalar>
bool on_segment(const Point2<Scalar>& a, const Point2<Scalar>& b,
                const Point2<Scalar>& p) {
  if (orient(a, b, p) != Scalar(0)) return false;
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

/// Closed-segment intersection test, touching and collinear overlap included.
template <typename Scalar>
bool segments_intersect(const Point2<Scalar>& p1, const Point2<Scalar>& p2,
                        const Point2<Scalar>& q1, const Point2<Scalar>& q2) {
  const Scalar d1 = orient(q1, q2, p1);
  const Scalar d2 = orient(q1, q2, p2);
  const Scalar d3 = orient(p1, p2, q1);
  const Scalar d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  return on_segment(q1, q2, p1) || on_segment(q1, q2, p2) ||
         on_segment(p1, p2, q1) || on_segment(p1, p2, q2);
}

/// True when the closed outline has >= 3 vertices, non-zero area, no
/// repeated consecutive vertices, and no pair of edges meeting anywhere
/// other than at their shared endpoint.
template <typename Scalar>
bool is_simple_polygon(const std::vector<Point2<Scalar>>& pts) {
  const std::size_t n = pts.size();
  if (n < 3) return false;
  if (signed_area(pts) == Scalar(0)) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (pts[i] == pts[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = pts[i];
    const auto& b = pts[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& c = pts[j];
      const auto& d = pts[(j + 1) % n];
      const bool next = j == i + 1;
      const bool wrap = (j + 1) % n == i;
      if (next) {
        // Shared vertex b == c: the far endpoints must not fold back onto
        // the neighbouring edge.
        if (on_segment(a, b, d) || on_segment(c, d, a)) return false;
        continue;
      }
      if (wrap) {
        if (on_segment(c, d, b) || on_segment(a, b, c)) return false;
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

/// Point inside or on the boundary of triangle (a, b, c), any orientation.
template <typename Scalar>
bool in_triangle(const Point2<Scalar>& a, const Point2<Scalar>& b,
                 const Point2<Scalar>& c, const Point2<Scalar>& p) {
  const Scalar d1 = orient(a, b, p);
  const Scalar d2 = orient(b, c, p);
  const Scalar d3 = orient(c, a, p);
  const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(has_neg && has_pos);
}

}  // namespace d3::geom
