// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/service/server.hpp"

#include "d3/geometry/export.hpp"
#include "d3/sdl/parser.hpp"
#include "d3/service/protocol.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <sys/socket.h>

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <map>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace d3::service {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

// Frames above kMaxMessageBytes get an error reply; only frames above this
// hard cap close the connection.
constexpr std::size_t kHardFrameCap = 16 * kMaxMessageBytes;

struct Connection {
  explicit Connection(tcp::socket& socket) : ws(socket) {}
  websocket::stream<tcp::socket&> ws;
  std::mutex write_mu;

  void send(const std::string& text) {
    std::lock_guard lock(write_mu);
    beast::error_code ec;
    ws.text(true);
    ws.write(asio::buffer(text), ec);
  }
};

struct Slot {
  std::mutex mu;  // serializes events for this session
  LiveSession live;
  std::string token;
  std::vector<std::weak_ptr<Connection>> connections;
};

std::string random_token() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

struct Target {
  std::vector<std::string> parts;
  std::map<std::string, std::string> query;
};

Target split_target(std::string_view target) {
  Target t;
  const auto q = target.find('?');
  std::string_view path = target.substr(0, q);
  std::size_t pos = 0;
  while (pos < path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) t.parts.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  if (q != std::string_view::npos) {
    std::string_view rest = target.substr(q + 1);
    while (!rest.empty()) {
      auto amp = rest.find('&');
      auto item = rest.substr(0, amp);
      auto eq = item.find('=');
      t.query[std::string(item.substr(0, eq))] = eq == std::string_view::npos ? "" : std::string(item.substr(eq + 1));
      if (amp == std::string_view::npos) break;
      rest = rest.substr(amp + 1);
    }
  }
  return t;
}

std::string_view view(beast::string_view s) { return {s.data(), s.size()}; }

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

Response reply(const Request& req, http::status status, std::string body, std::string_view type) {
  Response res{status, req.version()};
  res.set(http::field::content_type, std::string(type));
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(req.keep_alive());
  res.body() = std::move(body);
  res.prepare_payload();
  return res;
}

Response json_reply(const Request& req, http::status status, const json& body) {
  return reply(req, status, body.dump(), "application/json");
}

Response error_reply(const Request& req, http::status status, Errc code, const std::string& message) {
  return json_reply(req, status, encode_error(code, message));
}

std::pair<std::string, std::uint16_t> split_bind(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw Error(Errc::invalid_config, "bind address must be host:port");
  const int port = std::atoi(bind.c_str() + colon + 1);
  if (port < 0 || port > 65535) throw Error(Errc::invalid_config, "bad port in '" + bind + "'");
  return {bind.substr(0, colon), static_cast<std::uint16_t>(port)};
}

}  // namespace

struct Server::Impl {
  ServerConfig cfg;
  asio::io_context ioc;
  std::unique_ptr<tcp::acceptor> acceptor;
  std::thread accept_thread;

  mutable std::mutex registry_mu;
  std::map<std::string, std::shared_ptr<Slot>> sessions;

  struct Worker {
    std::shared_ptr<tcp::socket> socket;
    std::shared_ptr<std::atomic<bool>> done;
    std::thread thread;
  };

  std::mutex conn_mu;
  std::vector<Worker> workers;
  bool stopping = false;
  std::condition_variable stopped_cv;
  bool stopped = false;

  std::shared_ptr<Slot> find(const std::string& id) const {
    std::lock_guard lock(registry_mu);
    auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second;
  }

  void accept_loop() {
    for (;;) {
      auto socket = std::make_shared<tcp::socket>(ioc);
      beast::error_code ec;
      acceptor->accept(*socket, ec);
      std::lock_guard lock(conn_mu);
      if (stopping) return;
      if (ec) continue;
      reap();
      auto done = std::make_shared<std::atomic<bool>>(false);
      workers.push_back({socket, done, std::thread([this, socket, done] {
                           serve(socket);
                           *done = true;
                         })});
    }
  }

  // Joins finished connection threads. Caller holds conn_mu.
  void reap() {
    auto finished = [](Worker& w) {
      if (!*w.done) return false;
      w.thread.join();
      return true;
    };
    workers.erase(std::remove_if(workers.begin(), workers.end(), finished), workers.end());
  }

  void serve(const std::shared_ptr<tcp::socket>& socket) {
    beast::flat_buffer buffer;
    beast::error_code ec;
    for (;;) {
      http::request_parser<http::string_body> parser;
      parser.body_limit(kMaxMessageBytes);
      http::read(*socket, buffer, parser, ec);
      if (ec) break;
      auto req = parser.release();
      if (websocket::is_upgrade(req)) {
        serve_ws(*socket, req);
        break;
      }
      auto res = route(req);
      http::write(*socket, res, ec);
      if (ec || !res.keep_alive()) break;
    }
    socket->shutdown(tcp::socket::shutdown_both, ec);
  }

  Response route(const Request& req) {
    const auto t = split_target(view(req.target()));
    if (t.parts.empty() || t.parts[0] != "session")
      return error_reply(req, http::status::not_found, Errc::bad_request, "no such endpoint");
    if (t.parts.size() == 1) {
      if (req.method() != http::verb::post)
        return error_reply(req, http::status::method_not_allowed, Errc::bad_request, "use POST");
      return create(req);
    }
    auto slot = find(t.parts[1]);
    if (!slot) return error_reply(req, http::status::not_found, Errc::bad_request, "unknown session");
    if (req.method() != http::verb::get)
      return error_reply(req, http::status::method_not_allowed, Errc::bad_request, "use GET");
    if (t.parts.size() == 2) {
      std::lock_guard lock(slot->mu);
      auto body = encode_scene(session::snapshot(slot->live.state), slot->live.revision);
      body["id"] = slot->live.state.id;
      return json_reply(req, http::status::ok, body);
    }
    if (t.parts.size() == 3 && t.parts[2] == "export") {
      auto fmt_it = t.query.find("format");
      const std::string fmt = fmt_it == t.query.end() ? "obj" : fmt_it->second;
      geom::ExportFormat format;
      if (fmt == "obj") {
        format = geom::ExportFormat::obj;
      } else if (fmt == "gltf" || fmt == "glb") {
        format = geom::ExportFormat::gltf;
      } else {
        return error_reply(req, http::status::bad_request, Errc::bad_request, "format must be obj or gltf");
      }
      std::string text;
      {
        std::lock_guard lock(slot->mu);
        text = slot->live.state.program_text;
      }
      if (text.empty()) return error_reply(req, http::status::conflict, Errc::invalid_edit, "program is empty");
      try {
        const auto mesh = geom::compile_scene(*sdl::parse_program(text).program);
        return reply(req, http::status::ok, geom::export_mesh(mesh, format), geom::content_type(format));
      } catch (const Error& e) {
        return error_reply(req, http::status::internal_server_error, e.code(), e.what());
      }
    }
    return error_reply(req, http::status::not_found, Errc::bad_request, "no such endpoint");
  }

  Response create(const Request& req) {
    auto slot = std::make_shared<Slot>();
    try {
      slot->live.state = cfg.provider_override ? session::new_session(cfg.provider, cfg.provider_override)
                                               : session::new_session(cfg.provider);
    } catch (const Error& e) {
      return error_reply(req, http::status::internal_server_error, e.code(), e.what());
    }
    slot->token = random_token();
    const std::string id = slot->live.state.id;
    {
      std::lock_guard lock(registry_mu);
      sessions[id] = slot;
    }
    std::string host(req[http::field::host]);
    if (host.empty()) host = cfg.bind;
    json body = {
        {"id", id},
        {"token", slot->token},
        {"ws_url", "ws://" + host + "/session/" + id + "/ws?token=" + slot->token},
    };
    return json_reply(req, http::status::created, body);
  }

  void serve_ws(tcp::socket& socket, const Request& req) {
    const auto t = split_target(view(req.target()));
    beast::error_code ec;
    auto refuse = [&](http::status status, const std::string& why) {
      auto res = error_reply(req, status, Errc::bad_request, why);
      res.keep_alive(false);
      http::write(socket, res, ec);
    };
    if (t.parts.size() != 3 || t.parts[0] != "session" || t.parts[2] != "ws")
      return refuse(http::status::not_found, "no such endpoint");
    auto slot = find(t.parts[1]);
    if (!slot) return refuse(http::status::not_found, "unknown session");
    auto tok = t.query.find("token");
    if (tok == t.query.end() || tok->second != slot->token) return refuse(http::status::forbidden, "bad token");

    auto conn = std::make_shared<Connection>(socket);
    conn->ws.read_message_max(kHardFrameCap);
    conn->ws.accept(req, ec);
    if (ec) return;
    {
      std::lock_guard lock(slot->mu);
      slot->connections.push_back(conn);
      conn->send(encode_scene(session::snapshot(slot->live.state), slot->live.revision).dump());
    }
    beast::flat_buffer buffer;
    for (;;) {
      buffer.clear();
      conn->ws.read(buffer, ec);
      if (ec) break;
      const std::string text = beast::buffers_to_string(buffer.data());
      std::lock_guard lock(slot->mu);
      const auto outcome = handle_ws_message(slot->live, text);
      const auto payload = outcome.reply.dump();
      if (!outcome.broadcast) {
        conn->send(payload);
        continue;
      }
      auto& conns = slot->connections;
      conns.erase(std::remove_if(conns.begin(), conns.end(), [](const auto& w) { return w.expired(); }), conns.end());
      for (const auto& weak : conns)
        if (auto c = weak.lock()) c->send(payload);
    }
  }
};

ServerConfig server_config_from_env() {
  ServerConfig cfg;
  if (const char* bind = std::getenv("D3_BIND")) cfg.bind = bind;
  cfg.provider = nl::config_from_env();
  return cfg;
}

Server::Server(ServerConfig cfg) : impl_(std::make_unique<Impl>()) { impl_->cfg = std::move(cfg); }

Server::~Server() { stop(); }

void Server::start() {
  if (!impl_->cfg.provider_override) nl::validate(impl_->cfg.provider);
  const auto [host, port] = split_bind(impl_->cfg.bind);
  beast::error_code ec;
  const auto address = asio::ip::make_address(host == "localhost" ? "127.0.0.1" : host, ec);
  if (ec) throw Error(Errc::invalid_config, "bad bind host '" + host + "'");
  try {
    impl_->acceptor = std::make_unique<tcp::acceptor>(impl_->ioc, tcp::endpoint(address, port));
  } catch (const boost::system::system_error& e) {
    throw Error(Errc::io_error, "cannot listen on " + impl_->cfg.bind + ": " + e.what());
  }
  impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
}

void Server::wait() {
  std::unique_lock lock(impl_->conn_mu);
  impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

void Server::stop() {
  if (!impl_->acceptor) return;
  {
    std::lock_guard lock(impl_->conn_mu);
    if (impl_->stopping) return;
    impl_->stopping = true;
    ::shutdown(impl_->acceptor->native_handle(), SHUT_RDWR);
    for (auto& w : impl_->workers) ::shutdown(w.socket->native_handle(), SHUT_RDWR);
  }
  if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
  std::vector<Impl::Worker> workers;
  {
    std::lock_guard lock(impl_->conn_mu);
    workers.swap(impl_->workers);
  }
  for (auto& w : workers) w.thread.join();
  std::lock_guard lock(impl_->conn_mu);
  impl_->stopped = true;
  impl_->stopped_cv.notify_all();
}

std::uint16_t Server::port() const { return impl_->acceptor ? impl_->acceptor->local_endpoint().port() : 0; }

std::size_t Server::session_count() const {
  std::lock_guard lock(impl_->registry_mu);
  return impl_->sessions.size();
}

}  // namespace d3::service
