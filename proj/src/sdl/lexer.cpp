// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "lexer.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace d3::sdl::detail {
namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto fail = [&](std::size_t at, std::string msg) {
    out.push_back({Tok::error, std::move(msg), line, at, at});
    return out;
  };

  while (i < n) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    if (c == '{' || c == '}' || c == ':') {
      const Tok kind = c == '{' ? Tok::lbrace : c == '}' ? Tok::rbrace : Tok::colon;
      out.push_back({kind, std::string(1, c), line, start, start + 1});
      ++i;
      continue;
    }
    if (c == '"') {
      std::string value;
      ++i;
      bool closed = false;
      while (i < n) {
        const char s = text[i];
        if (s == '"') {
          closed = true;
          ++i;
          break;
        }
        if (s == '\n') break;
        if (s == '\\') {
          if (i + 1 >= n) break;
          const char e = text[i + 1];
          switch (e) {
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            default: return fail(i, std::string("unknown escape '\\") + e + "'");
          }
          i += 2;
          continue;
        }
        value += s;
        ++i;
      }
      if (!closed) return fail(start, "unterminated string");
      out.push_back({Tok::string, std::move(value), line, start, i});
      continue;
    }
    if (c == '#') {
      ++i;
      while (i < n && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Tok::hex, std::string(text.substr(start, i - start)), line, start, i});
      continue;
    }
    if (is_digit(c) || ((c == '-' || c == '+' || c == '.') && i + 1 < n &&
                        (is_digit(text[i + 1]) || text[i + 1] == '.'))) {
      if (c == '-' || c == '+') ++i;
      bool integral = true;
      while (i < n && is_digit(text[i])) ++i;
      if (i < n && text[i] == '.') {
        integral = false;
        ++i;
        while (i < n && is_digit(text[i])) ++i;
      }
      if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        integral = false;
        std::size_t j = i + 1;
        if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < n && is_digit(text[j])) {
          i = j;
          while (i < n && is_digit(text[i])) ++i;
        }
      }
      if (i < n && is_ident_char(text[i]))
        return fail(start, "malformed number");
      Token t{Tok::number, std::string(text.substr(start, i - start)), line, start, i};
      const char* first = t.text.data();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, t.text.data() + t.text.size(), t.value);
      if (ec != std::errc() || ptr != t.text.data() + t.text.size() || !std::isfinite(t.value))
        return fail(start, "malformed number '" + t.text + "'");
      t.integral = integral;
      out.push_back(std::move(t));
      continue;
    }
    if (is_ident_start(c)) {
      while (i < n && is_ident_char(text[i])) ++i;
      out.push_back({Tok::ident, std::string(text.substr(start, i - start)), line, start, i});
      continue;
    }
    return fail(start, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::end, "", line, n, n});
  return out;
}

std::vector<bool> non_code_mask(std::string_view text) {
  std::vector<bool> mask(text.size(), false);
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (text[i] == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') mask[i++] = true;
      continue;
    }
    if (text[i] == '"') {
      mask[i++] = true;
      while (i < n && text[i] != '"' && text[i] != '\n') {
        if (text[i] == '\\' && i + 1 < n && text[i + 1] != '\n') mask[i++] = true;
        mask[i++] = true;
      }
      if (i < n && text[i] == '"') mask[i++] = true;
      continue;
    }
    ++i;
  }
  return mask;
}

}  // namespace d3::sdl::detail
