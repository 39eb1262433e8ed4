// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace d3::sdl {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Looks up one of the 147 HTML named colors, case-insensitively.
std::optional<Rgb> html_color(std::string_view name);

/// Parses `#RRGGBB` (either case) or an HTML color name.
/// Throws d3::Error with malformed_color or unknown_color.
Rgb resolve_color(std::string_view spec);

/// Upper-case `#RRGGBB`.
std::string to_hex(Rgb c);

}  // namespace d3::sdl
