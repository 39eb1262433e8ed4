// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "d3/geometry/profile.hpp"
#include "d3/gesture/landmarks.hpp"

#include <span>
#include <string>
#include <utility>

namespace d3::gesture {

/// Thumb-tip to index-tip distance times the user's unit scale.
/// Throws d3::Error(hand_missing).
double pinch_length(const LandmarkFrame& frame, Hand hand, double meters_per_unit);

/// Angle in [0, 180] degrees between the two index fingers (mcp -> tip),
/// measured in the image plane. Throws hand_missing or zero_direction.
double opening_angle(const LandmarkFrame& frame);

/// Exponential smoothing followed by a deadband on the committed value.
/// With `relative` set the deadband is a fraction of |committed|.
struct StabilizerState {
  double ema = 0.0;
  double committed = 0.0;
  double alpha = 0.4;
  double deadband = 2.0;
  bool relative = false;
  bool primed = false;  // the first sample seeds both ema and committed
  bool operator==(const StabilizerState&) const = default;
};

StabilizerState angle_stabilizer();   // 2 degree deadband
StabilizerState length_stabilizer();  // 2% of the committed value

/// Returns the updated state and the committed value after `raw`.
std::pair<StabilizerState, double> stabilize(StabilizerState state, double raw);

inline constexpr int kTraceVertices = 32;
inline constexpr std::size_t kMinTraceFrames = 8;

/// Index-tip path of `hand`, resampled to 32 arc-length-uniform points and
/// closed. Image y is flipped so the outline is upright; the result stands
/// on the origin like a rect profile. Throws too_few_frames or
/// self_intersecting_trace.
geom::PolygonProfile trace_profile(std::span<const LandmarkFrame> frames, Hand hand);

/// Deterministic one-line summary, e.g.
/// "closed trace, aspect 1.00, mixed curvature, one hand".
std::string describe_frames(std::span<const LandmarkFrame> frames);

}  // namespace d3::gesture
