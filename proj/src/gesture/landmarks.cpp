// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/gesture/landmarks.hpp"

#include "d3/error.hpp"

#include <nlohmann/json.hpp>

namespace d3::gesture {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw Error(Errc::bad_request, "landmark frame: " + what);
}

HandPoints hand_from_json(const json& j, std::string_view side) {
  if (!j.is_object()) bad(std::string(side) + " hand must be an object");
  HandPoints h;
  for (std::size_t i = 0; i < kJointNames.size(); ++i) {
    const auto it = j.find(std::string(kJointNames[i]));
    if (it == j.end() || !it->is_array() || it->size() != 3)
      bad(std::string(side) + "." + std::string(kJointNames[i]) + " must be [x, y, z]");
    for (std::size_t k = 0; k < 3; ++k) {
      if (!(*it)[k].is_number()) bad(std::string(kJointNames[i]) + " coordinates must be numbers");
      h.points[i][static_cast<Eigen::Index>(k)] = (*it)[k].get<double>();
    }
    const auto& p = h.points[i];
    if (!p.allFinite() || p.x() < 0.0 || p.x() > 1.0 || p.y() < 0.0 || p.y() > 1.0)
      bad(std::string(kJointNames[i]) + " x and y must lie in [0, 1]");
  }
  return h;
}

json hand_to_json(const HandPoints& h) {
  json out = json::object();
  for (std::size_t i = 0; i < kJointNames.size(); ++i)
    out[std::string(kJointNames[i])] = {h.points[i].x(), h.points[i].y(), h.points[i].z()};
  return out;
}

}  // namespace

LandmarkFrame frame_from_json(const json& j) {
  if (!j.is_object()) bad("must be an object");
  LandmarkFrame f;
  const auto t = j.find("timestamp_ms");
  if (t == j.end() || !t->is_number_integer()) bad("timestamp_ms must be an integer");
  f.timestamp_ms = t->get<std::int64_t>();
  if (auto l = j.find("left"); l != j.end() && !l->is_null()) f.left = hand_from_json(*l, "left");
  if (auto r = j.find("right"); r != j.end() && !r->is_null()) f.right = hand_from_json(*r, "right");
  if (!f.left && !f.right) bad("at least one hand must be present");
  return f;
}

json to_json(const LandmarkFrame& frame) {
  json out = {{"timestamp_ms", frame.timestamp_ms}};
  if (frame.left) out["left"] = hand_to_json(*frame.left);
  if (frame.right) out["right"] = hand_to_json(*frame.right);
  return out;
}

std::vector<LandmarkFrame> frames_from_json(const json& j) {
  if (!j.is_array()) bad("frames must be an array");
  std::vector<LandmarkFrame> out;
  out.reserve(j.size());
  for (const auto& item : j) {
    out.push_back(frame_from_json(item));
    if (out.size() > 1 && out.back().timestamp_ms <= out[out.size() - 2].timestamp_ms)
      bad("timestamps must strictly increase");
  }
  return out;
}

json to_json(const std::vector<LandmarkFrame>& frames) {
  json out = json::array();
  for (const auto& f : frames) out.push_back(to_json(f));
  return out;
}

}  // namespace d3::gesture
