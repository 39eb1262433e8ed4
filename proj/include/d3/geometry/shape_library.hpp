// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "d3/geometry/profile.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace d3::geom {

/// Built-in analogy shapes (rose_petal, lotus_petal, leaf, circle,
/// rectangle, star). Library entries never contain RefProfile.
std::optional<Profile2D> library_shape(std::string_view name);

const std::vector<std::string>& library_shape_names();

}  // namespace d3::geom
