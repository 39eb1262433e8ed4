// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/geometry/profile.hpp"

#include "d3/error.hpp"
#include "d3/geometry/polygon.hpp"
#include "d3/geometry/shape_library.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace d3::geom {
namespace {

struct Sampler {
  Outline operator()(const RectProfile& r) const {
    const double hw = r.width / 2.0;
    return {Vec2(-hw, 0.0), Vec2(hw, 0.0), Vec2(hw, r.height),
            Vec2(-hw, r.height)};
  }

  Outline operator()(const EllipseProfile& e) const {
    Outline out;
    out.reserve(static_cast<std::size_t>(e.segments));
    for (int i = 0; i < e.segments; ++i) {
      const double t = 2.0 * std::numbers::pi * i / e.segments;
      out.emplace_back(e.rx * std::cos(t), e.ry * std::sin(t));
    }
    return out;
  }

  Outline operator()(const PolygonProfile& p) const { return p.vertices; }

  Outline operator()(const BezierProfile& b) const {
    const std::size_t n = b.controls.size();
    Outline out;
    out.reserve(n / 3 * static_cast<std::size_t>(b.samples));
    for (std::size_t k = 0; k + 2 < n; k += 3) {
      const Vec2& p0 = b.controls[k];
      const Vec2& p1 = b.controls[k + 1];
      const Vec2& p2 = b.controls[k + 2];
      const Vec2& p3 = b.controls[(k + 3) % n];
      for (int s = 0; s < b.samples; ++s) {
        const double t = static_cast<double>(s) / b.samples;
        const double u = 1.0 - t;
        out.push_back(u * u * u * p0 + 3.0 * u * u * t * p1 +
                      3.0 * u * t * t * p2 + t * t * t * p3);
      }
    }
    return out;
  }

  Outline operator()(const RefProfile& r) const {
    auto shape = library_shape(r.name);
    if (!shape) throw Error(Errc::unknown_shape, "unknown shape '" + r.name + "'");
    return std::visit(*this, *shape);
  }
};

struct DimensionCheck {
  std::string operator()(const RectProfile& r) const {
    if (!(r.width > 0.0) || !(r.height > 0.0))
      return "rect dimensions must be positive";
    return {};
  }
  std::string operator()(const EllipseProfile& e) const {
    if (!(e.rx > 0.0) || !(e.ry > 0.0)) return "ellipse radii must be positive";
    if (e.segments < 3) return "ellipse needs at least 3 segments";
    return {};
  }
  std::string operator()(const PolygonProfile& p) const {
    if (p.vertices.size() < 3) return "polygon needs at least 3 vertices";
    return {};
  }
  std::string operator()(const BezierProfile& b) const {
    if (b.controls.size() < 3 || b.controls.size() % 3 != 0)
      return "bezier control count must be a positive multiple of 3";
    if (b.samples < 1) return "bezier needs at least 1 sample per segment";
    if (b.controls.size() / 3 * static_cast<std::size_t>(b.samples) < 3)
      return "bezier outline needs at least 3 samples";
    return {};
  }
  std::string operator()(const RefProfile& r) const {
    if (!library_shape(r.name)) return "unknown shape '" + r.name + "'";
    return {};
  }
};

bool all_finite(const Outline& pts) {
  return std::all_of(pts.begin(), pts.end(),
                     [](const Vec2& p) { return p.allFinite(); });
}

}  // namespace

Outline profile_outline(const Profile2D& profile) {
  if (auto problem = std::visit(DimensionCheck{}, profile); !problem.empty()) {
    const auto code = std::holds_alternative<RefProfile>(profile)
                          ? Errc::unknown_shape
                          : Errc::degenerate_profile;
    throw Error(code, problem);
  }
  Outline out = std::visit(Sampler{}, profile);
  if (!all_finite(out) || !is_simple_polygon(out))
    throw Error(Errc::non_simple_profile, "profile outline is not simple");
  if (signed_area(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

double profile_area(const Outline& outline) {
  if (outline.size() < 3)
    throw Error(Errc::degenerate_profile, "outline needs at least 3 vertices");
  return std::abs(signed_area(outline));
}

std::string profile_problem(const Profile2D& profile) {
  try {
    (void)profile_outline(profile);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace d3::geom
