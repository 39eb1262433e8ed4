// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/error.hpp"

#include <ostream>

namespace d3 {

std::string_view error_code_name(Errc code) noexcept {
  switch (code) {
    case Errc::parse_error: return "parse_error";
    case Errc::unknown_component: return "unknown_component";
    case Errc::duplicate_component: return "duplicate_component";
    case Errc::invalid_value: return "invalid_value";
    case Errc::invalid_edit: return "invalid_edit";
    case Errc::unknown_color: return "unknown_color";
    case Errc::malformed_color: return "malformed_color";
    case Errc::unknown_shape: return "unknown_shape";
    case Errc::non_simple_profile: return "non_simple_profile";
    case Errc::degenerate_profile: return "degenerate_profile";
    case Errc::triangulation_failed: return "triangulation_failed";
    case Errc::hand_missing: return "hand_missing";
    case Errc::zero_direction: return "zero_direction";
    case Errc::too_few_frames: return "too_few_frames";
    case Errc::self_intersecting_trace: return "self_intersecting_trace";
    case Errc::missing_selection: return "missing_selection";
    case Errc::no_block: return "no_block";
    case Errc::unbalanced_fence: return "unbalanced_fence";
    case Errc::malformed_audio: return "malformed_audio";
    case Errc::missing_fixture: return "missing_fixture";
    case Errc::provider_error: return "provider_error";
    case Errc::provider_timeout: return "provider_timeout";
    case Errc::interpretation_failed: return "interpretation_failed";
    case Errc::invalid_config: return "invalid_config";
    case Errc::nothing_to_undo: return "nothing_to_undo";
    case Errc::nothing_to_redo: return "nothing_to_redo";
    case Errc::stage_error: return "stage_error";
    case Errc::io_error: return "io_error";
    case Errc::version_mismatch: return "version_mismatch";
    case Errc::corrupt_file: return "corrupt_file";
    case Errc::bad_request: return "bad_request";
    case Errc::bad_json: return "bad_json";
    case Errc::unknown_type: return "unknown_type";
    case Errc::frame_too_large: return "frame_too_large";
  }
  return "unknown";
}

std::ostream& operator<<(std::ostream& os, Errc code) { return os << error_code_name(code); }

}  // namespace d3
