// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/gesture/gesture.hpp"

#include "d3/error.hpp"
#include "d3/geometry/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace d3::gesture {
namespace {

const HandPoints& require(const LandmarkFrame& frame, Hand hand) {
  const auto& h = frame.hand(hand);
  if (!h) {
    throw Error(Errc::hand_missing,
                std::string(hand == Hand::left ? "left" : "right") + " hand not present");
  }
  return *h;
}

geom::Vec2 index_direction(const HandPoints& h) {
  return (h[Joint::index_tip] - h[Joint::index_mcp]).head<2>();
}

/// Image coordinates with y pointing up.
geom::Vec2 upright(const geom::Vec3& p) { return {p.x(), -p.y()}; }

std::vector<geom::Vec2> tip_path(std::span<const LandmarkFrame> frames, Hand hand) {
  std::vector<geom::Vec2> path;
  for (const auto& f : frames) {
    const auto& h = f.hand(hand);
    if (!h) continue;
    const geom::Vec2 p = upright((*h)[Joint::index_tip]);
    if (path.empty() || path.back() != p) path.push_back(p);
  }
  return path;
}

}  // namespace

double pinch_length(const LandmarkFrame& frame, Hand hand, double meters_per_unit) {
  const auto& h = require(frame, hand);
  return (h[Joint::index_tip] - h[Joint::thumb_tip]).norm() * meters_per_unit;
}

double opening_angle(const LandmarkFrame& frame) {
  const geom::Vec2 a = index_direction(require(frame, Hand::left));
  const geom::Vec2 b = index_direction(require(frame, Hand::right));
  if (a.isZero(0.0) || b.isZero(0.0))
    throw Error(Errc::zero_direction, "index finger direction has zero length");
  const double cross = a.x() * b.y() - a.y() * b.x();
  return std::atan2(std::abs(cross), a.dot(b)) * 180.0 / std::numbers::pi;
}

StabilizerState angle_stabilizer() { return {0.0, 0.0, 0.4, 2.0, false, false}; }

StabilizerState length_stabilizer() { return {0.0, 0.0, 0.4, 0.02, true, false}; }

std::pair<StabilizerState, double> stabilize(StabilizerState state, double raw) {
  if (!state.primed) {
    state.ema = raw;
    state.committed = raw;
    state.primed = true;
    return {state, state.committed};
  }
  state.ema = state.alpha * raw + (1.0 - state.alpha) * state.ema;
  const double band = state.relative ? state.deadband * std::abs(state.committed) : state.deadband;
  if (std::abs(state.ema - state.committed) > band) state.committed = state.ema;
  return {state, state.committed};
}

geom::PolygonProfile trace_profile(std::span<const LandmarkFrame> frames, Hand hand) {
  std::size_t present = 0;
  for (const auto& f : frames) present += f.hand(hand) ? 1 : 0;
  if (present < kMinTraceFrames) {
    throw Error(Errc::too_few_frames, "trace needs at least " + std::to_string(kMinTraceFrames) +
                                          " frames with the hand present, got " +
                                          std::to_string(present));
  }
  const auto path = tip_path(frames, hand);
  const std::size_t n = path.size();
  std::vector<double> cumulative(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    cumulative[i + 1] = cumulative[i] + (path[(i + 1) % n] - path[i]).norm();
  const double total = cumulative[n];
  if (n < 3 || !(total > 0.0)) throw Error(Errc::degenerate_profile, "trace does not enclose an area");

  geom::PolygonProfile out;
  out.vertices.reserve(kTraceVertices);
  std::size_t seg = 0;
  for (int k = 0; k < kTraceVertices; ++k) {
    const double s = total * k / kTraceVertices;
    while (cumulative[seg + 1] < s) ++seg;
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double t = len > 0.0 ? (s - cumulative[seg]) / len : 0.0;
    out.vertices.push_back(path[seg] + t * (path[(seg + 1) % n] - path[seg]));
  }

  double min_x = out.vertices[0].x(), max_x = min_x, min_y = out.vertices[0].y();
  for (const auto& v : out.vertices) {
    min_x = std::min(min_x, v.x());
    max_x = std::max(max_x, v.x());
    min_y = std::min(min_y, v.y());
  }
  const geom::Vec2 anchor((min_x + max_x) / 2.0, min_y);
  for (auto& v : out.vertices) v -= anchor;

  if (!geom::is_simple_polygon(out.vertices))
    throw Error(Errc::self_intersecting_trace, "traced outline crosses itself");
  if (geom::signed_area(out.vertices) < 0.0) std::reverse(out.vertices.begin(), out.vertices.end());
  return out;
}

std::string describe_frames(std::span<const LandmarkFrame> frames) {
  bool any_right = false;
  bool two_hands = false;
  for (const auto& f : frames) {
    any_right = any_right || f.right.has_value();
    two_hands = two_hands || (f.left && f.right);
  }
  const auto path = tip_path(frames, any_right ? Hand::right : Hand::left);

  double w = 0.0, h = 0.0, diag = 0.0;
  if (!path.empty()) {
    geom::Vec2 lo = path[0], hi = path[0];
    for (const auto& p : path) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    w = hi.x() - lo.x();
    h = hi.y() - lo.y();
    diag = (hi - lo).norm();
  }
  const bool closed = path.size() >= 3 && (path.back() - path.front()).norm() <= 0.2 * diag;

  double aspect = 1.0;
  if (h > 1e-9) {
    aspect = std::min(w / h, 99.99);
  } else if (w > 1e-9) {
    aspect = 99.99;
  }

  // Turn direction at each interior vertex (wrapping for closed traces).
  int left = 0, right = 0, total = 0;
  const std::size_t n = path.size();
  const std::size_t first = closed ? 0 : 1;
  const std::size_t last = closed ? n : (n >= 1 ? n - 1 : 0);
  for (std::size_t i = first; i < last && n >= 3; ++i) {
    const geom::Vec2 a = path[(i + n - 1) % n];
    const geom::Vec2 b = path[i];
    const geom::Vec2 c = path[(i + 1) % n];
    const geom::Vec2 u = b - a;
    const geom::Vec2 v = c - b;
    const double cross = u.x() * v.y() - u.y() * v.x();
    ++total;
    if (cross > 1e-9 * u.norm() * v.norm()) ++left;
    else if (cross < -1e-9 * u.norm() * v.norm()) ++right;
  }
  const char* curvature = "mixed";
  if (total > 0 && 2 * left > total) curvature = "positive";
  if (total > 0 && 2 * right > total) curvature = "negative";

  char buf[128];
  std::snprintf(buf, sizeof buf, "%s trace, aspect %.2f, %s curvature, %s",
                closed ? "closed" : "open", aspect, curvature, two_hands ? "two hands" : "one hand");
  return buf;
}

}  // namespace d3::gesture
