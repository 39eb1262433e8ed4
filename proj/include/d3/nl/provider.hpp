// Copyright 2026 The d3 Authors
// SPDX-License-Identifier: Apache-2.0

// Chat-completion and transcription backends: a fixture-backed mock for
// offline use and an HTTPS client for hosted endpoints.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace d3::nl {

enum class ProviderMode { live, mock };

struct ProviderConfig {
  std::string chat_endpoint;
  std::string transcription_endpoint;
  std::string api_key;
  std::string model_name = "gpt-4o";
  std::string transcription_model = "whisper-1";
  double timeout_s = 30.0;
  ProviderMode mode = ProviderMode::mock;
  std::string fixture_path;
  bool operator==(const ProviderConfig&) const = default;
};

/// Throws Error(invalid_config) when live mode lacks an endpoint or key, or
/// mock mode lacks a fixture path.
void validate(const ProviderConfig& cfg);

/// Reads D3_MODE, D3_API_KEY, D3_CHAT_URL, D3_TRANSCRIBE_URL, D3_FIXTURES,
/// D3_MODEL and D3_TIMEOUT_S. Unset variables keep the defaults.
ProviderConfig config_from_env();

struct ChatRequest {
  std::string prompt;
  std::string stage;      // "generation", "segmentation" or "modification"
  std::string user_text;  // raw utterance, used for fixture lookup
  int attempt = 0;        // 0 first try, 1 retry after validation errors
};

struct ChatResponse {
  std::string text;
  std::int64_t latency_ms = 0;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual ChatResponse chat(const ChatRequest& request) = 0;
  /// `wav` has already passed check_wav.
  virtual std::string transcribe(std::string_view wav) = 0;
};

/// Fixture keys: `<stage>|<normalized text>` for chat, with an optional
/// `<stage>|<normalized text>|retry1` override for the retry, and
/// `audio|<sha256 hex of the wav bytes>` for transcription.
class MockProvider final : public Provider {
 public:
  explicit MockProvider(std::map<std::string, std::string> fixtures);
  /// Throws Error(io_error) or Error(invalid_config) for unreadable files.
  static std::shared_ptr<MockProvider> from_file(const std::string& path);

  ChatResponse chat(const ChatRequest& request) override;
  std::string transcribe(std::string_view wav) override;

  static std::string chat_key(std::string_view stage, std::string_view user_text, int attempt = 0);
  static std::string audio_key(std::string_view wav);

 private:
  std::map<std::string, std::string> fixtures_;
};

class LiveProvider final : public Provider {
 public:
  explicit LiveProvider(ProviderConfig cfg);
  ChatResponse chat(const ChatRequest& request) override;
  std::string transcribe(std::string_view wav) override;

 private:
  ProviderConfig cfg_;
};

/// Validates `cfg` and builds the matching provider.
std::shared_ptr<Provider> make_provider(const ProviderConfig& cfg);

/// Number of HTTP requests started by LiveProvider in this process.
std::uint64_t outbound_request_count();

/// Lowercase, trimmed, inner whitespace collapsed, trailing punctuation removed.
std::string normalize_utterance(std::string_view text);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// Accepts RIFF/WAVE, PCM, mono, 16 kHz or 44.1 kHz. Throws
/// Error(malformed_audio).
void check_wav(std::string_view wav);

/// Validates the audio, then asks the provider.
std::string transcribe(std::string_view wav, Provider& provider);

}  // namespace d3::nl
