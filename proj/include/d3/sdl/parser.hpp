// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "d3/sdl/program.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace d3::sdl {

/// Parses a whole `scene "<name>" { component ... }` program and validates
/// ids, ranges, profiles and the attachment tree.
ParseResult parse_program(std::string_view text);

/// Parses exactly one `component "<id>" { ... }` block. Only block-local
/// rules are checked; parent references are left to program validation.
BlockParseResult parse_block(std::string_view text);

/// Source slices of each component block in `text`, which is either a bare
/// sequence of blocks or a whole scene. Only syntax is checked. Throws
/// d3::Error(parse_error).
std::vector<std::string> split_blocks(std::string_view text);

/// Canonical text: fixed field order, two-space indent, one field per line,
/// LF endings and a trailing newline.
std::string print_program(const SceneProgram& program);

/// Canonical block text at the given indent (the program printer uses 2).
std::string print_block(const ComponentBlock& block, int indent = 0);

/// Whole-program rule check for programs built in memory. Empty result
/// means valid.
std::vector<std::string> validate_program(const SceneProgram& program);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

}  // namespace d3::sdl
