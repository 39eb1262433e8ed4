// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/sdl/splice.hpp"

#include "d3/sdl/parser.hpp"
#include "lexer.hpp"

#include <regex>

namespace d3::sdl {

std::optional<BlockSpan> locate_block(std::string_view text, std::string_view id) {
  if (!is_valid_id(id)) return std::nullopt;
  // Ids are restricted to [a-z0-9_], so no regex escaping is needed.
  const std::regex header("\\bcomponent\\s+\"" + std::string(id) + "\"\\s*\\{");
  const auto mask = detail::non_code_mask(text);
  const std::string owned(text);
  for (auto it = std::sregex_iterator(owned.begin(), owned.end(), header);
       it != std::sregex_iterator(); ++it) {
    const auto begin = static_cast<std::size_t>(it->position());
    if (mask[begin]) continue;
    std::size_t pos = begin + static_cast<std::size_t>(it->length());  // after '{'
    int depth = 1;
    for (; pos < text.size() && depth > 0; ++pos) {
      if (mask[pos]) continue;
      if (text[pos] == '{') ++depth;
      if (text[pos] == '}') --depth;
    }
    if (depth != 0) return std::nullopt;
    return BlockSpan{begin, pos};
  }
  return std::nullopt;
}

SpliceResult splice_block(std::string_view program_text, std::string_view component_id,
                          std::string_view block_text) {
  SpliceResult result{std::string(program_text), false, Errc::invalid_edit, {}};
  const auto block = parse_block(block_text);
  if (!block.ok()) {
    result.code = Errc::parse_error;
    result.message = block.error_text();
    return result;
  }
  if (block.block->id != component_id) {
    result.message = "block id '" + block.block->id + "' does not match '" +
                     std::string(component_id) + "'";
    return result;
  }
  const auto span = locate_block(program_text, component_id);
  if (!span) {
    result.code = Errc::unknown_component;
    result.message = "component '" + std::string(component_id) + "' not found";
    return result;
  }
  std::string candidate;
  candidate.reserve(program_text.size() + block_text.size());
  candidate.append(program_text.substr(0, span->begin));
  candidate.append(block_text);
  candidate.append(program_text.substr(span->end));
  const auto reparsed = parse_program(candidate);
  if (!reparsed.ok()) {
    result.message = reparsed.error_text();
    return result;
  }
  result.text = std::move(candidate);
  result.ok = true;
  result.message.clear();
  return result;
}

}  // namespace d3::sdl
