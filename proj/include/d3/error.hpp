// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace d3 {

/// Error categories shared by every layer. The wire protocol exposes them
/// through error_code_name().
enum class Errc {
  parse_error,
  unknown_component,
  duplicate_component,
  invalid_value,
  invalid_edit,
  unknown_color,
  malformed_color,
  unknown_shape,
  non_simple_profile,
  degenerate_profile,
  triangulation_failed,
  hand_missing,
  zero_direction,
  too_few_frames,
  self_intersecting_trace,
  missing_selection,
  no_block,
  unbalanced_fence,
  malformed_audio,
  missing_fixture,
  provider_error,
  provider_timeout,
  interpretation_failed,
  invalid_config,
  nothing_to_undo,
  nothing_to_redo,
  stage_error,
  io_error,
  version_mismatch,
  corrupt_file,
  bad_request,
  bad_json,
  unknown_type,
  frame_too_large,
};

std::string_view error_code_name(Errc code) noexcept;

std::ostream& operator<<(std::ostream& os, Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace d3
