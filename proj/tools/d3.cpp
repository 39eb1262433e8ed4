// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

// d3 command line: replay scripts, run the service, format SDL files.

#include "d3/batch/script.hpp"
#include "d3/error.hpp"
#include "d3/geometry/export.hpp"
#include "d3/sdl/parser.hpp"
#include "d3/service/server.hpp"

#include <CLI11.hpp>

#include <pthread.h>
#include <signal.h>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int run(const std::string& script, const std::string& out, bool live, const std::string& fixtures) {
  d3::batch::RunOptions options;
  options.cfg = d3::nl::config_from_env();
  options.cfg.mode = live ? d3::nl::ProviderMode::live : d3::nl::ProviderMode::mock;
  if (!fixtures.empty()) options.cfg.fixture_path = fixtures;
  const int code = d3::batch::run_script(script, out, options);
  if (code != d3::batch::kExitOk) {
    std::ifstream marker(out + "/FAILED");
    std::cerr << "d3: " << marker.rdbuf();
  }
  return code;
}

int serve(const std::string& bind, bool live, const std::string& fixtures) {
  auto cfg = d3::service::server_config_from_env();
  if (!bind.empty()) cfg.bind = bind;
  if (live) cfg.provider.mode = d3::nl::ProviderMode::live;
  if (!fixtures.empty()) cfg.provider.fixture_path = fixtures;
  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  d3::service::Server server(cfg);
  server.start();
  std::cout << "listening on " << cfg.bind.substr(0, cfg.bind.rfind(':')) << ":" << server.port() << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  return 0;
}

int fmt(const std::string& path, bool in_place) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "d3: cannot read " << path << "\n";
    return 2;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const auto parsed = d3::sdl::parse_program(ss.str());
  for (const auto& d : parsed.diagnostics) std::cerr << path << ":" << d3::sdl::to_string(d) << "\n";
  if (!parsed.ok()) return 1;
  const auto text = d3::sdl::print_program(*parsed.program);
  if (in_place) {
    std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
  } else {
    std::cout << text;
  }
  return 0;
}

int export_file(const std::string& path, const std::string& format, const std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "d3: cannot read " << path << "\n";
    return 2;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const auto parsed = d3::sdl::parse_program(ss.str());
  if (!parsed.ok()) {
    std::cerr << parsed.error_text() << "\n";
    return 1;
  }
  const auto fmt = format == "obj"    ? d3::geom::ExportFormat::obj
                   : format == "glb"  ? d3::geom::ExportFormat::gltf
                                      : d3::geom::ExportFormat::gltf_embedded;
  const auto bytes = d3::geom::export_mesh(d3::geom::compile_scene(*parsed.program), fmt);
  if (out.empty() || out == "-") {
    std::cout << bytes;
  } else {
    std::ofstream(out, std::ios::binary | std::ios::trunc) << bytes;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"d3: build 3D models from speech, gestures and a scene description language"};
  app.require_subcommand(1);

  std::string script, out, fixtures, bind, fmt_path, format = "obj", export_out;
  bool live = false, in_place = false;

  auto* run_cmd = app.add_subcommand("run", "replay a script and write final.sdl/.obj/.gltf and events.json");
  run_cmd->add_option("--script", script, "script JSON file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out, "output directory")->required();
  run_cmd->add_flag("--live", live, "use the hosted providers from D3_* variables");
  run_cmd->add_option("--fixtures", fixtures, "mock fixture file (default: the script's own)");

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP + WebSocket service");
  serve_cmd->add_option("--bind", bind, "host:port (default D3_BIND or 127.0.0.1:8787)");
  serve_cmd->add_flag("--live", live, "use the hosted providers from D3_* variables");
  serve_cmd->add_option("--fixtures", fixtures, "mock fixture file (default D3_FIXTURES)");

  auto* fmt_cmd = app.add_subcommand("fmt", "print an SDL file in canonical form");
  fmt_cmd->add_option("file", fmt_path, "SDL file")->required();
  fmt_cmd->add_flag("-i,--in-place", in_place, "rewrite the file");

  auto* export_cmd = app.add_subcommand("export", "compile an SDL file to a mesh");
  export_cmd->add_option("file", fmt_path, "SDL file")->required();
  export_cmd->add_option("--format", format, "obj, glb or gltf")->check(CLI::IsMember({"obj", "glb", "gltf"}));
  export_cmd->add_option("-o,--out", export_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return run(script, out, live, fixtures);
    if (*serve_cmd) return serve(bind, live, fixtures);
    if (*fmt_cmd) return fmt(fmt_path, in_place);
    if (*export_cmd) return export_file(fmt_path, format, export_out);
  } catch (const d3::Error& e) {
    std::cerr << "d3: " << d3::error_code_name(e.code()) << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}
