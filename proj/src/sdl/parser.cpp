// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/sdl/parser.hpp"

#include "d3/error.hpp"
#include "lexer.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <system_error>

namespace d3::sdl {
namespace {

using detail::Tok;
using detail::Token;

constexpr int kMaxCount = 1000;
constexpr int kMaxSegments = 4096;
constexpr int kMaxBezierSamples = 1024;
constexpr std::size_t kMaxPolygonVertices = 4096;

enum class Where { header, profile, extrude, color, count, scale, attach };
constexpr std::size_t kWhereCount = 7;

struct Problem {
  Where where;
  std::string message;
};

struct TreeProblem {
  std::size_t index;
  Where where;
  std::string message;
};

std::vector<Problem> check_block(const ComponentBlock& b) {
  std::vector<Problem> out;
  if (!is_valid_id(b.id))
    out.push_back({Where::header, "invalid component id '" + b.id + "'"});
  if (auto problem = geom::profile_problem(b.profile); !problem.empty())
    out.push_back({Where::profile, problem});
  if (!(b.extrude_depth > 0.0) || !std::isfinite(b.extrude_depth))
    out.push_back({Where::extrude, "extrude depth must be positive"});
  if (b.count < 1 || b.count > kMaxCount)
    out.push_back({Where::count, "count must be in [1, " + std::to_string(kMaxCount) + "]"});
  if (!b.scale.factors.allFinite() || (b.scale.factors.array() <= 0.0).any())
    out.push_back({Where::scale, "scale factors must be positive"});
  if (b.attach) {
    const auto& a = *b.attach;
    if (!is_valid_id(a.parent_id))
      out.push_back({Where::attach, "invalid parent id '" + a.parent_id + "'"});
    else if (a.parent_id == b.id)
      out.push_back({Where::attach, "component '" + b.id + "' cannot attach to itself"});
    if (!(a.angle_deg >= 0.0 && a.angle_deg <= 180.0))
      out.push_back({Where::attach, "attach angle must be in [0, 180]"});
    if (!a.offset.allFinite())
      out.push_back({Where::attach, "attach offset must be finite"});
  }
  return out;
}

std::vector<TreeProblem> check_tree(const SceneProgram& p) {
  std::vector<TreeProblem> out;
  std::map<std::string, std::size_t> index;
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    const auto& b = p.components[i];
    if (!index.emplace(b.id, i).second)
      out.push_back({i, Where::header, "duplicate component id '" + b.id + "'"});
    if (!b.attach) roots.push_back(i);
  }
  if (roots.size() > 1) {
    out.push_back({roots[1], Where::header,
                   "multiple root components ('" + p.components[roots[0]].id + "', '" +
                       p.components[roots[1]].id + "')"});
  }
  bool dangling = false;
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    const auto& b = p.components[i];
    if (b.attach && !index.count(b.attach->parent_id)) {
      out.push_back({i, Where::attach, "unknown parent '" + b.attach->parent_id + "'"});
      dangling = true;
    }
  }
  if (roots.empty() && !p.components.empty()) {
    out.push_back({0, Where::header, "no root component (every component has attach)"});
  }
  if (dangling || roots.empty()) return out;
  // Every chain must end at a root within |components| steps.
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    std::size_t cur = i;
    std::size_t steps = 0;
    while (p.components[cur].attach && steps <= p.components.size()) {
      cur = index.at(p.components[cur].attach->parent_id);
      ++steps;
    }
    if (p.components[cur].attach) {
      out.push_back({i, Where::attach,
                     "attachment cycle through '" + p.components[i].id + "'"});
      break;
    }
  }
  return out;
}

struct SyntaxError {
  int line;
  std::string message;
};

struct ParsedBlock {
  ComponentBlock block;
  std::array<int, kWhereCount> lines{};
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::vector<Diagnostic>& diagnostics() { return diags_; }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  const Token& previous() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }

  const Token& next() {
    const Token& t = peek();
    if (t.kind == Tok::error) throw SyntaxError{t.line, t.text};
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  const Token& expect(Tok kind, const char* what) {
    const Token& t = peek();
    if (t.kind == Tok::error) throw SyntaxError{t.line, t.text};
    if (t.kind != kind) throw SyntaxError{t.line, std::string("expected ") + what + found(t)};
    return next();
  }

  void expect_keyword(std::string_view kw) {
    const Token& t = peek();
    if (t.kind != Tok::ident || t.text != kw)
      throw SyntaxError{t.line, "expected '" + std::string(kw) + "'" + found(t)};
    next();
  }

  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::ident && peek().text == kw;
  }

  double number(const char* what) { return expect(Tok::number, what).value; }

  int integer(const char* what) {
    const Token& t = expect(Tok::number, what);
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data() + (t.text[0] == '+'),
                                     t.text.data() + t.text.size(), v);
    if (!t.integral || ec != std::errc() || ptr != t.text.data() + t.text.size())
      throw SyntaxError{t.line, std::string("expected integer ") + what + ", found '" + t.text + "'"};
    return v;
  }

  ParsedBlock component() {
    ParsedBlock out;
    const int header_line = peek().line;
    expect_keyword("component");
    out.block.id = expect(Tok::string, "component id string").text;
    out.lines.fill(header_line);
    expect(Tok::lbrace, "'{'");
    std::set<std::string> seen;
    while (peek().kind != Tok::rbrace) {
      const Token& name = expect(Tok::ident, "field name or '}'");
      const std::string field = name.text;
      const int line = name.line;
      expect(Tok::colon, "':'");
      if (!seen.insert(field).second) {
        diags_.push_back({Severity::warning, line,
                          "field '" + field + "' repeated; last value wins"});
      }
      if (field == "profile") {
        out.block.profile = profile();
        out.lines[static_cast<std::size_t>(Where::profile)] = line;
      } else if (field == "extrude") {
        out.block.extrude_depth = number("extrude depth");
        out.lines[static_cast<std::size_t>(Where::extrude)] = line;
      } else if (field == "color") {
        out.block.color = color(line);
        out.lines[static_cast<std::size_t>(Where::color)] = line;
      } else if (field == "count") {
        out.block.count = integer("count");
        out.lines[static_cast<std::size_t>(Where::count)] = line;
      } else if (field == "scale") {
        const double x = number("scale factor");
        if (peek().kind == Tok::number) {
          const double y = number("scale factor");
          const double z = number("scale factor");
          out.block.scale = Scale::of(x, y, z);
        } else {
          out.block.scale = Scale::of(x);
        }
        out.lines[static_cast<std::size_t>(Where::scale)] = line;
      } else if (field == "attach") {
        out.block.attach = attach();
        out.lines[static_cast<std::size_t>(Where::attach)] = line;
      } else {
        throw SyntaxError{line, "unknown field '" + field + "'"};
      }
    }
    next();  // '}'
    if (!seen.count("profile"))
      diags_.push_back({Severity::error, header_line,
                        "component '" + out.block.id + "' is missing 'profile'"});
    if (!seen.count("extrude"))
      diags_.push_back({Severity::error, header_line,
                        "component '" + out.block.id + "' is missing 'extrude'"});
    for (auto& p : check_block(out.block)) {
      if (!seen.count("profile") && p.where == Where::profile) continue;
      if (!seen.count("extrude") && p.where == Where::extrude) continue;
      diags_.push_back({Severity::error, out.lines[static_cast<std::size_t>(p.where)],
                        std::move(p.message)});
    }
    return out;
  }

 private:
  static std::string found(const Token& t) {
    if (t.kind == Tok::end) return ", found end of input";
    return ", found '" + t.text + "'";
  }

  geom::Profile2D profile() {
    const Token& kind = expect(Tok::ident, "profile kind");
    const std::string k = kind.text;
    const int line = kind.line;
    if (k == "rect") {
      const double w = number("rect width");
      return geom::RectProfile{w, number("rect height")};
    }
    if (k == "ellipse") {
      const double rx = number("ellipse rx");
      const double ry = number("ellipse ry");
      const int segs = integer("ellipse segment count");
      if (segs > kMaxSegments)
        throw SyntaxError{line, "ellipse segment count exceeds " + std::to_string(kMaxSegments)};
      return geom::EllipseProfile{rx, ry, segs};
    }
    if (k == "polygon") {
      geom::PolygonProfile p;
      p.vertices = coordinate_list(line);
      if (p.vertices.size() > kMaxPolygonVertices)
        throw SyntaxError{line, "polygon has too many vertices"};
      return p;
    }
    if (k == "bezier") {
      geom::BezierProfile b;
      b.samples = integer("bezier samples per segment");
      if (b.samples > kMaxBezierSamples)
        throw SyntaxError{line, "bezier sample count exceeds " + std::to_string(kMaxBezierSamples)};
      b.controls = coordinate_list(line);
      if (b.controls.size() > kMaxPolygonVertices)
        throw SyntaxError{line, "bezier has too many control points"};
      return b;
    }
    if (k == "ref") return geom::RefProfile{expect(Tok::string, "shape name string").text};
    throw SyntaxError{line, "unknown profile kind '" + k + "'"};
  }

  std::vector<geom::Vec2> coordinate_list(int line) {
    std::vector<double> values;
    while (peek().kind == Tok::number) values.push_back(next().value);
    if (values.size() % 2 != 0) throw SyntaxError{line, "odd number of coordinates"};
    std::vector<geom::Vec2> pts;
    for (std::size_t i = 0; i < values.size(); i += 2) pts.emplace_back(values[i], values[i + 1]);
    return pts;
  }

  Rgb color(int line) {
    const Token& t = peek();
    if (t.kind != Tok::hex && t.kind != Tok::ident)
      throw SyntaxError{t.line, "expected color" + found(t)};
    const std::string spec = next().text;
    try {
      return resolve_color(spec);
    } catch (const Error& e) {
      diags_.push_back({Severity::error, line, e.what()});
      return {};
    }
  }

  AttachConstraint attach() {
    AttachConstraint a;
    a.parent_id = expect(Tok::string, "parent id string").text;
    expect_keyword("angle");
    a.angle_deg = number("angle in degrees");
    if (at_keyword("radial")) {
      next();
      a.mode = AttachMode::radial;
    } else if (at_keyword("fixed")) {
      next();
      a.mode = AttachMode::fixed;
    }
    if (at_keyword("offset")) {
      next();
      const double x = number("offset x");
      const double y = number("offset y");
      a.offset = geom::Vec3(x, y, number("offset z"));
    }
    return a;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diags_;
};

bool has_error(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::error) return true;
  return false;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + '"';
}

struct ProfilePrinter {
  std::string operator()(const geom::RectProfile& r) const {
    return "rect " + format_number(r.width) + " " + format_number(r.height);
  }
  std::string operator()(const geom::EllipseProfile& e) const {
    return "ellipse " + format_number(e.rx) + " " + format_number(e.ry) + " " +
           std::to_string(e.segments);
  }
  std::string operator()(const geom::PolygonProfile& p) const {
    return "polygon" + coords(p.vertices);
  }
  std::string operator()(const geom::BezierProfile& b) const {
    return "bezier " + std::to_string(b.samples) + coords(b.controls);
  }
  std::string operator()(const geom::RefProfile& r) const { return "ref " + quote(r.name); }

  static std::string coords(const std::vector<geom::Vec2>& pts) {
    std::string out;
    for (const auto& p : pts) out += " " + format_number(p.x()) + " " + format_number(p.y());
    return out;
  }
};

}  // namespace

ParseResult parse_program(std::string_view text) {
  Parser parser(detail::tokenize(text));
  ParseResult result;
  SceneProgram program;
  std::vector<std::array<int, kWhereCount>> lines;
  try {
    const int scene_line = parser.peek().line;
    parser.expect_keyword("scene");
    program.name = parser.expect(Tok::string, "scene name string").text;
    parser.expect(Tok::lbrace, "'{'");
    while (parser.peek().kind != Tok::rbrace) {
      auto parsed = parser.component();
      program.components.push_back(std::move(parsed.block));
      lines.push_back(parsed.lines);
    }
    parser.next();
    parser.expect(Tok::end, "end of input");
    if (program.components.empty())
      parser.diagnostics().push_back({Severity::error, scene_line, "scene has no components"});
  } catch (const SyntaxError& e) {
    parser.diagnostics().push_back({Severity::error, e.line, e.message});
    result.diagnostics = std::move(parser.diagnostics());
    return result;
  }
  for (auto& p : check_tree(program)) {
    parser.diagnostics().push_back(
        {Severity::error, lines[p.index][static_cast<std::size_t>(p.where)], std::move(p.message)});
  }
  result.diagnostics = std::move(parser.diagnostics());
  if (!has_error(result.diagnostics)) result.program = std::move(program);
  return result;
}

BlockParseResult parse_block(std::string_view text) {
  Parser parser(detail::tokenize(text));
  BlockParseResult result;
  std::optional<ComponentBlock> block;
  try {
    block = parser.component().block;
    parser.expect(Tok::end, "end of block");
  } catch (const SyntaxError& e) {
    parser.diagnostics().push_back({Severity::error, e.line, e.message});
    result.diagnostics = std::move(parser.diagnostics());
    return result;
  }
  result.diagnostics = std::move(parser.diagnostics());
  if (!has_error(result.diagnostics)) result.block = std::move(block);
  return result;
}

std::vector<std::string> split_blocks(std::string_view text) {
  Parser parser(detail::tokenize(text));
  std::vector<std::string> out;
  try {
    const bool wrapped = parser.peek().kind == Tok::ident && parser.peek().text == "scene";
    if (wrapped) {
      parser.next();
      parser.expect(Tok::string, "scene name string");
      parser.expect(Tok::lbrace, "'{'");
    }
    const Tok stop = wrapped ? Tok::rbrace : Tok::end;
    while (parser.peek().kind != stop && parser.peek().kind != Tok::end) {
      const std::size_t begin = parser.peek().begin;
      parser.component();
      out.emplace_back(text.substr(begin, parser.previous().end - begin));
    }
    if (wrapped) parser.expect(Tok::rbrace, "'}'");
    parser.expect(Tok::end, "end of input");
  } catch (const SyntaxError& e) {
    throw Error(Errc::parse_error, "line " + std::to_string(e.line) + ": " + e.message);
  }
  return out;
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string print_block(const ComponentBlock& b, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner = pad + "  ";
  std::string out = pad + "component " + quote(b.id) + " {\n";
  out += inner + "profile: " + std::visit(ProfilePrinter{}, b.profile) + "\n";
  out += inner + "extrude: " + format_number(b.extrude_depth) + "\n";
  out += inner + "color: " + to_hex(b.color) + "\n";
  out += inner + "count: " + std::to_string(b.count) + "\n";
  if (!b.scale.is_identity()) {
    out += inner + "scale: " + format_number(b.scale.factors.x());
    if (!b.scale.uniform)
      out += " " + format_number(b.scale.factors.y()) + " " + format_number(b.scale.factors.z());
    out += "\n";
  }
  if (b.attach) {
    const auto& a = *b.attach;
    out += inner + "attach: " + quote(a.parent_id) + " angle " + format_number(a.angle_deg) +
           (a.mode == AttachMode::radial ? " radial" : " fixed");
    if (!a.offset.isZero(0.0)) {
      out += " offset " + format_number(a.offset.x()) + " " + format_number(a.offset.y()) + " " +
             format_number(a.offset.z());
    }
    out += "\n";
  }
  out += pad + "}";
  return out;
}

std::string print_program(const SceneProgram& program) {
  std::string out = "scene " + quote(program.name) + " {\n";
  for (const auto& b : program.components) out += print_block(b, 2) + "\n";
  out += "}\n";
  return out;
}

std::vector<std::string> validate_program(const SceneProgram& program) {
  std::vector<std::string> out;
  if (program.components.empty()) out.emplace_back("scene has no components");
  for (const auto& b : program.components)
    for (auto& p : check_block(b)) out.push_back(b.id + ": " + p.message);
  for (auto& p : check_tree(program)) out.push_back(std::move(p.message));
  return out;
}

}  // namespace d3::sdl
