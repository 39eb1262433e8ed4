// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

// HTTP + WebSocket front end for sessions.
//
//   POST /session                 create; returns {id, token, ws_url}
//   GET  /session/{id}            current scene
//   GET  /session/{id}/export     ?format=obj|gltf
//   WS   /session/{id}/ws?token=  protocol.hpp messages

#pragma once

#include "d3/nl/provider.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace d3::service {

struct ServerConfig {
  std::string bind = "127.0.0.1:8787";  // port 0 picks a free port
  nl::ProviderConfig provider;
  /// Shared by all sessions when set; otherwise built from `provider`.
  std::shared_ptr<nl::Provider> provider_override;
};

/// D3_BIND plus the provider variables.
ServerConfig server_config_from_env();

class Server {
 public:
  explicit Server(ServerConfig cfg);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and accepts on a background thread. Throws Error(io_error) or
  /// Error(invalid_config).
  void start();
  /// Blocks until stop() is called from another thread.
  void wait();
  /// Closes the listener and every open connection, then joins all threads.
  void stop();

  std::uint16_t port() const;
  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace d3::service
