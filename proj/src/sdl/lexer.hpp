// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace d3::sdl::detail {

enum class Tok { ident, string, number, hex, lbrace, rbrace, colon, end, error };

struct Token {
  Tok kind = Tok::end;
  std::string text;  // unescaped for strings, message for errors
  int line = 1;
  std::size_t begin = 0;
  std::size_t end = 0;
  double value = 0.0;
  bool integral = false;
};

/// Tokenizes the whole input. The last token is either `end` or `error`.
std::vector<Token> tokenize(std::string_view text);

/// Marks every byte that belongs to a string literal or a `//` comment.
std::vector<bool> non_code_mask(std::string_view text);

}  // namespace d3::sdl::detail
