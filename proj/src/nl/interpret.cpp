// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/nl/interpret.hpp"

#include "d3/error.hpp"
#include "d3/geometry/shape_library.hpp"
#include "d3/sdl/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <set>

namespace d3::nl {
namespace {

constexpr std::string_view kGrammar = R"(Grammar:
  scene "<name>" { <component> ... }
  component "<id>" {
    profile: rect <w> <h> | ellipse <rx> <ry> <segments> | polygon <x> <y> ... | bezier <samples> <x> <y> ... | ref "<shape>"
    extrude: <depth>
    color: #RRGGBB | <html color name>
    count: <n>
    scale: <s> | <x> <y> <z>
    attach: "<parent id>" angle <degrees> [radial|fixed] [offset <x> <y> <z>]
  }
profile and extrude are required. Exactly one component has no attach: the root.
Angle 0 keeps a part closed along its parent's axis, 90 opens it fully.
radial spreads count copies evenly around the parent; fixed stacks them.
)";

const std::array<std::pair<std::string_view, sdl::Rgb>, 2> kColorAliases = {{
    {"eggplant skin", {0x61, 0x40, 0x51}},
    {"eggplant", {0x61, 0x40, 0x51}},
}};

const std::set<std::string, std::less<>> kColorFiller = {
    "a",     "an",   "be",    "change", "color", "colour", "css",    "html", "in",
    "is",    "it",   "just",  "like",   "make",  "named",  "paint",  "plain", "please",
    "pure",  "set",  "should", "standard", "the", "to",    "turn",   "use",  "web",
};

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::optional<ColorMatch> lookup_color(const std::vector<std::string>& ws, std::size_t first, std::size_t n) {
  std::string spaced;
  std::string joined;
  for (std::size_t i = first; i < first + n; ++i) {
    if (i > first) spaced += ' ';
    spaced += ws[i];
    joined += ws[i];
  }
  for (const auto& [alias, rgb] : kColorAliases)
    if (alias == spaced) return ColorMatch{spaced, rgb};
  if (auto rgb = sdl::html_color(joined)) return ColorMatch{joined, *rgb};
  return std::nullopt;
}

std::string fenced(std::string_view body) {
  std::string out = "```sdl\n";
  out += body;
  if (!body.empty() && body.back() != '\n') out += '\n';
  return out + "```\n";
}

sdl::ComponentBlock parse_one(const std::string& text) {
  auto parsed = sdl::parse_block(text);
  if (!parsed.ok()) throw Error(Errc::parse_error, parsed.error_text());
  return *parsed.block;
}

std::string segment_target(const sdl::SceneProgram& program, const std::optional<std::string>& selection) {
  if (selection) return *selection;
  if (const auto* root = program.root()) return root->id;
  throw Error(Errc::invalid_edit, "nothing to segment in an empty scene");
}

sdl::IntentOp make_op(Stage stage, const std::vector<std::string>& blocks, const sdl::SceneProgram& program,
                      const std::optional<std::string>& selection) {
  if (stage == Stage::segmentation) return sdl::Segment{segment_target(program, selection), blocks};
  if (blocks.size() != 1) {
    throw Error(Errc::invalid_edit,
                "expected exactly one component block, got " + std::to_string(blocks.size()));
  }
  const auto block = parse_one(blocks.front());
  if (stage == Stage::modification) {
    if (block.id != *selection)
      throw Error(Errc::invalid_edit, "block id '" + block.id + "' does not match selection '" + *selection + "'");
    return sdl::ReplaceBlock{block.id, blocks.front()};
  }
  if (program.find(block.id)) return sdl::ReplaceBlock{block.id, blocks.front()};
  return sdl::AddComponent{blocks.front()};
}

}  // namespace

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::generation: return "generation";
    case Stage::segmentation: return "segmentation";
    case Stage::modification: return "modification";
  }
  return "generation";
}

std::optional<Stage> parse_stage(std::string_view text) {
  for (Stage s : {Stage::generation, Stage::segmentation, Stage::modification})
    if (stage_name(s) == text) return s;
  return std::nullopt;
}

std::string build_prompt(Stage stage, std::string_view user_text, const sdl::SceneProgram& program,
                         const std::optional<std::string>& selection) {
  if (stage == Stage::modification && !selection)
    throw Error(Errc::missing_selection, "modification needs a selected component");
  const sdl::ComponentBlock* selected = nullptr;
  if (selection) {
    selected = program.find(*selection);
    if (!selected) throw Error(Errc::unknown_component, "unknown component '" + *selection + "'");
  }

  std::string p = "You write components in a small scene description language for 3D models.\n\n";
  p += kGrammar;
  p += "Library shapes for ref:";
  for (const auto& name : geom::library_shape_names()) p += " " + name;
  p += "\n\nCurrent program:\n";
  p += fenced(program.empty() ? "scene \"model\" {\n}\n" : sdl::print_program(program));
  if (selected) p += "\nSelected component:\n" + fenced(sdl::print_block(*selected));
  p += "\nStage: ";
  p += stage_name(stage);
  p += "\nRequest: ";
  p += user_text;
  p += "\n\n";
  switch (stage) {
    case Stage::generation:
      p += "Reply with exactly one fenced sdl code block holding one component block. Reuse an existing id to "
           "replace that component. A new component must attach to an existing one unless the scene is empty.\n";
      break;
    case Stage::modification:
      p += "Reply with exactly one fenced sdl code block holding the complete updated block for component \"" +
           *selection + "\". Keep its id.\n";
      break;
    case Stage::segmentation:
      p += "Split component \"" + (selection ? *selection : (program.root() ? program.root()->id : "")) +
           "\" into finer parts. Reply with one fenced sdl code block per part. The first part takes its place "
           "in the tree and the other parts attach to the first part or to each other.\n";
      break;
  }
  p += "Do not write anything outside the code blocks.\n";
  return p;
}

std::vector<std::string> extract_block(std::string_view response) {
  std::vector<std::string> out;
  bool inside = false;
  std::size_t body_begin = 0;
  std::size_t pos = 0;
  while (pos <= response.size()) {
    std::size_t eol = response.find('\n', pos);
    if (eol == std::string_view::npos) eol = response.size();
    std::string_view line = response.substr(pos, eol - pos);
    const auto lead = line.find_first_not_of(" \t");
    if (lead != std::string_view::npos && line.substr(lead, 3) == "```") {
      if (inside) {
        std::string body(response.substr(body_begin, pos - body_begin));
        if (body.find("component \"") != std::string::npos) out.push_back(std::move(body));
      } else {
        body_begin = std::min(eol + 1, response.size());
      }
      inside = !inside;
    }
    pos = eol + 1;
  }
  if (inside) throw Error(Errc::unbalanced_fence, "response has an unterminated code fence");
  if (out.empty()) throw Error(Errc::no_block, "response contains no component block");
  return out;
}

Analogy resolve_analogy(std::string_view term) {
  auto ws = words(term);
  static const std::vector<std::vector<std::string>> kLeads = {
      {"looks", "like"}, {"similar", "to"}, {"like"}, {"a"}, {"an"}, {"the"}};
  for (bool stripped = true; stripped && !ws.empty();) {
    stripped = false;
    for (const auto& lead : kLeads) {
      if (ws.size() > lead.size() && std::equal(lead.begin(), lead.end(), ws.begin())) {
        ws.erase(ws.begin(), ws.begin() + static_cast<std::ptrdiff_t>(lead.size()));
        stripped = true;
      }
    }
  }
  if (ws.empty()) return {};
  std::string snake;
  for (const auto& w : ws) snake += (snake.empty() ? "" : "_") + w;
  if (auto shape = geom::library_shape(snake)) return ShapeMatch{snake, *shape};
  if (auto color = lookup_color(ws, 0, ws.size())) return *color;
  return {};
}

std::optional<sdl::SetParam> angle_fast_path(std::string_view user_text, const std::string& selection) {
  static const std::regex kDegrees(R"(^\s*(\d+(\.\d+)?)\s*degrees?\b)", std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(user_text.begin(), user_text.end(), m, kDegrees)) return std::nullopt;
  return sdl::SetParam{selection, sdl::FieldPath::attach_angle, m[1].str()};
}

std::optional<sdl::SetParam> color_fast_path(std::string_view user_text, const std::string& selection) {
  const auto ws = words(user_text);
  std::optional<ColorMatch> found;
  for (std::size_t i = 0; i < ws.size();) {
    std::size_t used = 0;
    for (std::size_t n = std::min<std::size_t>(3, ws.size() - i); n >= 1 && !used; --n) {
      if (auto c = lookup_color(ws, i, n)) {
        if (found) return std::nullopt;
        found = c;
        used = n;
      }
    }
    if (!used) {
      if (!kColorFiller.count(ws[i])) return std::nullopt;
      used = 1;
    }
    i += used;
  }
  if (!found) return std::nullopt;
  return sdl::SetParam{selection, sdl::FieldPath::color, sdl::to_hex(found->rgb)};
}

IntentResult interpret(std::string_view user_text, const sdl::SceneProgram& program,
                       const std::optional<std::string>& selection, Stage stage, Provider& provider) {
  std::string prompt = build_prompt(stage, user_text, program, selection);
  if (selection) {
    auto fast = angle_fast_path(user_text, *selection);
    if (!fast) fast = color_fast_path(user_text, *selection);
    if (fast) {
      sdl::apply_intent(program, *fast);
      return {*fast, "", 0};
    }
  }
  if (stage == Stage::segmentation) segment_target(program, selection);

  IntentResult result;
  std::string rejection;
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (attempt > 0) {
      prompt += "\nYour previous reply was rejected: " + rejection +
                "\nReply again, following the instructions above.\n";
    }
    const auto response = provider.chat({prompt, std::string(stage_name(stage)), std::string(user_text), attempt});
    result.provider_latency_ms += response.latency_ms;
    result.raw_response = response.text;
    try {
      std::vector<std::string> blocks;
      for (const auto& region : extract_block(response.text))
        for (auto& b : sdl::split_blocks(region)) blocks.push_back(std::move(b));
      if (blocks.empty()) throw Error(Errc::no_block, "response contains no component block");
      result.op = make_op(stage, blocks, program, selection);
      sdl::apply_intent(program, result.op);
      return result;
    } catch (const Error& e) {
      rejection = e.what();
    }
  }
  throw Error(Errc::interpretation_failed, "provider output rejected twice: " + rejection);
}

}  // namespace d3::nl
