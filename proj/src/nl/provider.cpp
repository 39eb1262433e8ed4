// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

#include "d3/nl/provider.hpp"

#include "d3/error.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace d3::nl {
namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::move(fallback);
}

std::uint32_t le(std::string_view s, std::size_t at, int bytes) {
  std::uint32_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[at + i]);
  return v;
}

}  // namespace

void validate(const ProviderConfig& cfg) {
  if (cfg.mode == ProviderMode::live) {
    if (cfg.chat_endpoint.empty()) throw Error(Errc::invalid_config, "live mode requires a chat endpoint");
    if (cfg.transcription_endpoint.empty())
      throw Error(Errc::invalid_config, "live mode requires a transcription endpoint");
    if (cfg.api_key.empty()) throw Error(Errc::invalid_config, "live mode requires an API key");
  } else if (cfg.fixture_path.empty()) {
    throw Error(Errc::invalid_config, "mock mode requires a fixture path");
  }
  if (!(cfg.timeout_s > 0)) throw Error(Errc::invalid_config, "timeout must be positive");
}

ProviderConfig config_from_env() {
  ProviderConfig cfg;
  const std::string mode = env_or("D3_MODE", "mock");
  if (mode == "live") {
    cfg.mode = ProviderMode::live;
  } else if (mode != "mock") {
    throw Error(Errc::invalid_config, "D3_MODE must be 'live' or 'mock', got '" + mode + "'");
  }
  cfg.api_key = env_or("D3_API_KEY", "");
  cfg.chat_endpoint = env_or("D3_CHAT_URL", "");
  cfg.transcription_endpoint = env_or("D3_TRANSCRIBE_URL", "");
  cfg.fixture_path = env_or("D3_FIXTURES", "");
  cfg.model_name = env_or("D3_MODEL", cfg.model_name);
  if (const char* t = std::getenv("D3_TIMEOUT_S")) {
    char* end = nullptr;
    cfg.timeout_s = std::strtod(t, &end);
    if (end == t || *end != '\0') throw Error(Errc::invalid_config, "D3_TIMEOUT_S is not a number");
  }
  return cfg;
}

MockProvider::MockProvider(std::map<std::string, std::string> fixtures) : fixtures_(std::move(fixtures)) {}

std::shared_ptr<MockProvider> MockProvider::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read fixture file '" + path + "'");
  std::map<std::string, std::string> fixtures;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& [key, value] : j.items()) fixtures[key] = value.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_config, "fixture file '" + path + "': " + e.what());
  }
  return std::make_shared<MockProvider>(std::move(fixtures));
}

std::string MockProvider::chat_key(std::string_view stage, std::string_view user_text, int attempt) {
  std::string key = std::string(stage) + "|" + normalize_utterance(user_text);
  if (attempt > 0) key += "|retry" + std::to_string(attempt);
  return key;
}

std::string MockProvider::audio_key(std::string_view wav) { return "audio|" + sha256_hex(wav); }

ChatResponse MockProvider::chat(const ChatRequest& request) {
  auto it = fixtures_.end();
  if (request.attempt > 0) it = fixtures_.find(chat_key(request.stage, request.user_text, request.attempt));
  if (it == fixtures_.end()) it = fixtures_.find(chat_key(request.stage, request.user_text));
  if (it == fixtures_.end())
    throw Error(Errc::missing_fixture, "no fixture for '" + chat_key(request.stage, request.user_text) + "'");
  return {it->second, 0};
}

std::string MockProvider::transcribe(std::string_view wav) {
  const auto key = audio_key(wav);
  auto it = fixtures_.find(key);
  if (it == fixtures_.end()) throw Error(Errc::missing_fixture, "no fixture for '" + key + "'");
  return it->second;
}

std::shared_ptr<Provider> make_provider(const ProviderConfig& cfg) {
  validate(cfg);
  if (cfg.mode == ProviderMode::mock) return MockProvider::from_file(cfg.fixture_path);
  return std::make_shared<LiveProvider>(cfg);
}

std::string normalize_utterance(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  while (!out.empty() && (std::ispunct(static_cast<unsigned char>(out.back())) || out.back() == ' ')) {
    if (out.back() == '"' || out.back() == ')' || out.back() == '\'') break;
    out.pop_back();
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error(Errc::io_error, "sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

void check_wav(std::string_view wav) {
  auto fail = [](const std::string& why) { throw Error(Errc::malformed_audio, "audio: " + why); };
  if (wav.empty()) fail("empty");
  if (wav.size() < 12 || wav.substr(0, 4) != "RIFF" || wav.substr(8, 4) != "WAVE") fail("not a RIFF/WAVE file");
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= wav.size()) {
    const auto id = wav.substr(pos, 4);
    const std::size_t size = le(wav, pos + 4, 4);
    const std::size_t body = pos + 8;
    if (size > wav.size() - body) fail("chunk '" + std::string(id) + "' overruns the file");
    if (id == "fmt ") {
      if (size < 16) fail("short fmt chunk");
      if (le(wav, body, 2) != 1) fail("not PCM");
      if (le(wav, body + 2, 2) != 1) fail("not mono");
      const auto rate = le(wav, body + 4, 4);
      if (rate != 16000 && rate != 44100) fail("sample rate " + std::to_string(rate) + " not 16000 or 44100");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) fail("data before fmt");
      if (size == 0) fail("no samples");
      return;
    }
    pos = body + size + (size & 1);
  }
  fail(have_fmt ? "missing data chunk" : "missing fmt chunk");
}

std::string transcribe(std::string_view wav, Provider& provider) {
  check_wav(wav);
  return provider.transcribe(wav);
}

}  // namespace d3::nl
