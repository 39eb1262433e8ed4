// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include "d3/error.hpp"
#include "d3/nl/provider.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>

namespace d3::nl {
namespace {

std::atomic<std::uint64_t> g_requests{0};

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(Errc::invalid_config, "endpoint '" + url + "' has no scheme");
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

class Call {
 public:
  Call(const ProviderConfig& cfg, const std::string& url) : target_(split_url(url)), client_(target_.origin) {
    const auto timeout = std::chrono::duration<double>(cfg.timeout_s);
    client_.set_connection_timeout(timeout);
    client_.set_read_timeout(timeout);
    client_.set_write_timeout(timeout);
    client_.set_bearer_token_auth(cfg.api_key);
    timeout_s_ = cfg.timeout_s;
  }

  const std::string& path() const { return target_.path; }
  httplib::Client& client() { return client_; }

  template <typename Send>
  std::string run(Send&& send, std::int64_t* latency_ms) {
    ++g_requests;
    const auto start = std::chrono::steady_clock::now();
    httplib::Result res = send(client_);
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    if (latency_ms) *latency_ms = elapsed;
    if (!res) {
      const auto err = res.error();
      if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
          elapsed >= static_cast<std::int64_t>(timeout_s_ * 1000)) {
        throw Error(Errc::provider_timeout, "provider timed out after " + std::to_string(elapsed) + " ms (" +
                                                httplib::to_string(err) + ")");
      }
      throw Error(Errc::provider_error, "provider request failed: " + httplib::to_string(err));
    }
    if (res->status != 200) {
      throw Error(Errc::provider_error,
                  "provider returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    return res->body;
  }

 private:
  Url target_;
  httplib::Client client_;
  double timeout_s_ = 0;
};

nlohmann::json parse_body(const std::string& body) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::provider_error, std::string("provider returned invalid JSON: ") + e.what());
  }
}

}  // namespace

std::uint64_t outbound_request_count() { return g_requests.load(); }

LiveProvider::LiveProvider(ProviderConfig cfg) : cfg_(std::move(cfg)) { validate(cfg_); }

ChatResponse LiveProvider::chat(const ChatRequest& request) {
  Call call(cfg_, cfg_.chat_endpoint);
  nlohmann::json body = {
      {"model", cfg_.model_name},
      {"temperature", 0},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
  };
  ChatResponse out;
  const auto text = call.run(
      [&](httplib::Client& c) { return c.Post(call.path(), body.dump(), "application/json"); }, &out.latency_ms);
  const auto j = parse_body(text);
  try {
    out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::provider_error, "chat response has no choices[0].message.content");
  }
  return out;
}

std::string LiveProvider::transcribe(std::string_view wav) {
  Call call(cfg_, cfg_.transcription_endpoint);
  httplib::MultipartFormDataItems items = {
      {"file", std::string(wav), "audio.wav", "audio/wav"},
      {"model", cfg_.transcription_model, "", ""},
  };
  const auto text = call.run([&](httplib::Client& c) { return c.Post(call.path(), items); }, nullptr);
  const auto j = parse_body(text);
  if (!j.contains("text") || !j["text"].is_string())
    throw Error(Errc::provider_error, "transcription response has no text");
  return j["text"].get<std::string>();
}

}  // namespace d3::nl
