// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/sdl/program.hpp"

#include <algorithm>
#include <cctype>

namespace d3::sdl {
namespace {

template <typename Vec>
auto find_in(Vec& components, std::string_view id) {
  auto it = std::find_if(components.begin(), components.end(),
                         [&](const ComponentBlock& b) { return b.id == id; });
  return it == components.end() ? nullptr : &*it;
}

std::string join_errors(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (d.severity != Severity::error) continue;
    if (!out.empty()) out += '\n';
    out += to_string(d);
  }
  return out;
}

}  // namespace

const ComponentBlock* SceneProgram::find(std::string_view id) const {
  return find_in(components, id);
}

ComponentBlock* SceneProgram::find(std::string_view id) { return find_in(components, id); }

const ComponentBlock* SceneProgram::root() const {
  auto it = std::find_if(components.begin(), components.end(),
                         [](const ComponentBlock& b) { return !b.attach; });
  return it == components.end() ? nullptr : &*it;
}

std::string to_string(const Diagnostic& d) {
  return "line " + std::to_string(d.line) + ": " +
         (d.severity == Severity::error ? "error: " : "warning: ") + d.message;
}

std::string ParseResult::error_text() const { return join_errors(diagnostics); }

std::string BlockParseResult::error_text() const { return join_errors(diagnostics); }

bool is_valid_id(std::string_view id) {
  if (id.empty() || !(id.front() >= 'a' && id.front() <= 'z')) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

}  // namespace d3::sdl
