// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "d3/error.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace d3::sdl {

/// Byte range [begin, end) of a component block, header through closing brace.
struct BlockSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Finds the first `component "<id>" {` header outside comments and string
/// literals and extends it to the matching closing brace.
std::optional<BlockSpan> locate_block(std::string_view program_text,
                                      std::string_view component_id);

struct SpliceResult {
  std::string text;  // the input, byte-identical, whenever ok is false
  bool ok = false;
  Errc code = Errc::invalid_edit;
  std::string message;
};

/// Replaces the named block with `block_text` and reparses the result.
/// Fails atomically: unknown component, id mismatch, or an invalid result.
SpliceResult splice_block(std::string_view program_text,
                          std::string_view component_id,
                          std::string_view block_text);

}  // namespace d3::sdl
