// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/sdl/intent.hpp"

#include "d3/error.hpp"
#include "d3/sdl/parser.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace d3::sdl {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ComponentBlock parse_one(std::string_view text) {
  auto parsed = parse_block(text);
  if (!parsed.ok()) throw Error(Errc::parse_error, parsed.error_text());
  return std::move(*parsed.block);
}

std::vector<double> parse_numbers(std::string_view value, FieldPath field) {
  std::vector<double> out;
  std::istringstream in{std::string(value)};
  std::string word;
  while (in >> word) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
    if (ec != std::errc() || ptr != word.data() + word.size() || !std::isfinite(v))
      throw Error(Errc::invalid_value, "'" + std::string(value) + "' is not a valid " +
                                           std::string(field_path_name(field)) + " value");
    out.push_back(v);
  }
  return out;
}

[[noreturn]] void bad_value(FieldPath field, std::string_view value, std::string_view why) {
  throw Error(Errc::invalid_value, "invalid " + std::string(field_path_name(field)) + " value '" +
                                       std::string(value) + "': " + std::string(why));
}

ComponentBlock& require(SceneProgram& p, std::string_view id) {
  auto* b = p.find(id);
  if (!b) throw Error(Errc::unknown_component, "unknown component '" + std::string(id) + "'");
  return *b;
}

void set_param(ComponentBlock& b, FieldPath field, std::string_view value) {
  switch (field) {
    case FieldPath::color:
      try {
        b.color = resolve_color(value);
      } catch (const Error& e) {
        bad_value(field, value, e.what());
      }
      return;
    case FieldPath::extrude: {
      auto v = parse_numbers(value, field);
      if (v.size() != 1 || !(v[0] > 0.0)) bad_value(field, value, "expected one positive number");
      b.extrude_depth = v[0];
      return;
    }
    case FieldPath::count: {
      auto v = parse_numbers(value, field);
      if (v.size() != 1 || v[0] != std::floor(v[0]) || v[0] < 1.0 || v[0] > 1000.0)
        bad_value(field, value, "expected an integer in [1, 1000]");
      b.count = static_cast<int>(v[0]);
      return;
    }
    case FieldPath::scale: {
      auto v = parse_numbers(value, field);
      if (v.size() == 1) {
        b.scale = Scale::of(v[0]);
      } else if (v.size() == 3) {
        b.scale = Scale::of(v[0], v[1], v[2]);
      } else {
        bad_value(field, value, "expected 1 or 3 numbers");
      }
      if ((b.scale.factors.array() <= 0.0).any()) bad_value(field, value, "factors must be positive");
      return;
    }
    case FieldPath::attach_angle: {
      if (!b.attach) bad_value(field, value, "component '" + b.id + "' has no attach constraint");
      auto v = parse_numbers(value, field);
      if (v.size() != 1 || v[0] < 0.0 || v[0] > 180.0)
        bad_value(field, value, "expected one angle in [0, 180]");
      b.attach->angle_deg = v[0];
      return;
    }
    case FieldPath::attach_offset: {
      if (!b.attach) bad_value(field, value, "component '" + b.id + "' has no attach constraint");
      auto v = parse_numbers(value, field);
      if (v.size() != 3) bad_value(field, value, "expected 3 numbers");
      b.attach->offset = geom::Vec3(v[0], v[1], v[2]);
      return;
    }
  }
}

std::set<std::string> subtree(const SceneProgram& p, const std::string& id) {
  std::set<std::string> out{id};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& b : p.components) {
      if (b.attach && out.count(b.attach->parent_id) && out.insert(b.id).second) grew = true;
    }
  }
  return out;
}

void segment(SceneProgram& p, const Segment& op) {
  const auto target_it = std::find_if(p.components.begin(), p.components.end(),
                                      [&](const ComponentBlock& b) { return b.id == op.id; });
  if (target_it == p.components.end())
    throw Error(Errc::unknown_component, "unknown component '" + op.id + "'");
  if (op.replacement_block_texts.empty())
    throw Error(Errc::invalid_edit, "segment of '" + op.id + "' has no replacement blocks");

  std::vector<ComponentBlock> parts;
  for (const auto& text : op.replacement_block_texts) parts.push_back(parse_one(text));

  const auto old_parent = target_it->attach ? std::optional(target_it->attach->parent_id)
                                            : std::nullopt;
  std::map<std::string, const ComponentBlock*> by_id;
  for (const auto& part : parts) {
    if (!by_id.emplace(part.id, &part).second)
      throw Error(Errc::duplicate_component, "duplicate component id '" + part.id + "'");
    if (part.id != op.id && p.find(part.id))
      throw Error(Errc::duplicate_component, "component '" + part.id + "' already exists");
  }
  // Each part must hang, directly or through other parts, under the old parent.
  for (const auto& part : parts) {
    const ComponentBlock* cur = &part;
    std::size_t steps = 0;
    while (cur->attach && by_id.count(cur->attach->parent_id) && steps++ <= parts.size())
      cur = by_id.at(cur->attach->parent_id);
    const auto reached = cur->attach ? std::optional(cur->attach->parent_id) : std::nullopt;
    if (reached != old_parent || (cur->attach && by_id.count(cur->attach->parent_id))) {
      throw Error(Errc::invalid_edit,
                  "segment part '" + part.id + "' does not reattach under " +
                      (old_parent ? "'" + *old_parent + "'" : std::string("the scene root")));
    }
  }

  const auto index = static_cast<std::size_t>(target_it - p.components.begin());
  p.components.erase(target_it);
  if (!by_id.count(op.id)) {
    for (auto& b : p.components)
      if (b.attach && b.attach->parent_id == op.id) b.attach->parent_id = parts.front().id;
  }
  p.components.insert(p.components.begin() + static_cast<std::ptrdiff_t>(index),
                      std::make_move_iterator(parts.begin()), std::make_move_iterator(parts.end()));
}

}  // namespace

std::optional<FieldPath> parse_field_path(std::string_view text) {
  for (auto f : {FieldPath::color, FieldPath::extrude, FieldPath::count, FieldPath::scale,
                 FieldPath::attach_angle, FieldPath::attach_offset}) {
    if (field_path_name(f) == text) return f;
  }
  return std::nullopt;
}

std::string_view field_path_name(FieldPath path) {
  switch (path) {
    case FieldPath::color: return "color";
    case FieldPath::extrude: return "extrude";
    case FieldPath::count: return "count";
    case FieldPath::scale: return "scale";
    case FieldPath::attach_angle: return "attach.angle";
    case FieldPath::attach_offset: return "attach.offset";
  }
  return "";
}

SceneProgram apply_intent(const SceneProgram& program, const IntentOp& op) {
  SceneProgram out = program;
  std::visit(
      overloaded{
          [&](const ReplaceBlock& r) {
            auto& target = require(out, r.id);
            auto block = parse_one(r.block_text);
            if (block.id != r.id)
              throw Error(Errc::invalid_edit,
                          "block id '" + block.id + "' does not match '" + r.id + "'");
            target = std::move(block);
          },
          [&](const AddComponent& a) {
            auto block = parse_one(a.block_text);
            if (out.find(block.id))
              throw Error(Errc::duplicate_component,
                          "component '" + block.id + "' already exists");
            if (out.components.empty() && out.name.empty()) out.name = "model";
            out.components.push_back(std::move(block));
          },
          [&](const RemoveComponent& r) {
            const auto& target = require(out, r.id);
            if (!target.attach)
              throw Error(Errc::invalid_edit, "cannot remove the root component '" + r.id + "'");
            const auto doomed = subtree(out, r.id);
            std::erase_if(out.components,
                          [&](const ComponentBlock& b) { return doomed.count(b.id) > 0; });
          },
          [&](const SetParam& s) {
            auto& target = require(out, s.id);
            set_param(target, s.field, s.value);
            for (const auto& problem : validate_program(out))
              throw Error(Errc::invalid_value, problem);
          },
          [&](const Segment& s) { segment(out, s); },
      },
      op);
  auto problems = validate_program(out);
  if (!problems.empty()) {
    std::string joined;
    for (const auto& p : problems) joined += (joined.empty() ? "" : "; ") + p;
    throw Error(Errc::invalid_edit, joined);
  }
  return out;
}

std::string describe(const IntentOp& op) {
  return std::visit(
      overloaded{
          [](const ReplaceBlock& r) { return "replace_block " + r.id; },
          [](const AddComponent& a) {
            auto parsed = parse_block(a.block_text);
            return "add_component " + (parsed.ok() ? parsed.block->id : std::string("?"));
          },
          [](const RemoveComponent& r) { return "remove_component " + r.id; },
          [](const SetParam& s) {
            return "set_param " + s.id + " " + std::string(field_path_name(s.field)) + " " +
                   s.value;
          },
          [](const Segment& s) {
            return "segment " + s.id + " into " + std::to_string(s.replacement_block_texts.size());
          },
      },
      op);
}

}  // namespace d3::sdl
