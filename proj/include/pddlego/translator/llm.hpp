#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "pddlego/translator/translator.hpp"

namespace pddlego::translator {

enum class CassetteMode { kOff, kRecord, kReplay };

CassetteMode parse_cassette_mode(std::string_view text);

/// JSON-lines store of `{"request_hash", "response_text"}` records. Shared
/// by every translator of a suite; safe to use from several threads.
class Cassette {
 public:
  /// Replay mode loads `path`; record mode truncates it.
  Cassette(std::string path, CassetteMode mode);

  CassetteMode mode() const { return mode_; }
  std::optional<std::string> find(const std::string& hash) const;
  void record(const std::string& hash, const std::string& response_text);

 private:
  std::string path_;
  CassetteMode mode_;
  mutable std::mutex mutex_;
  std::map<std::string, std::string> entries_;
};

struct LlmConfig {
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "gpt-4-1106-preview";
  double temperature = 1.0;
  bool force_json = true;        // JSON response format for delta requests
  std::size_t max_requests = 0;  // per episode; 0 means no cap
  std::size_t max_tokens = 0;    // per episode, from reported usage; 0 means no cap
  double min_interval_seconds = 0.0;  // process-wide spacing between requests
  int timeout_seconds = 120;
  std::shared_ptr<Cassette> cassette;  // null or kOff: always live
};

/// Name of the environment variable holding the bearer token.
inline constexpr const char* kApiKeyVariable = "PDDLEGO_API_KEY";

/// Chat-completions request body for a translator request.
nlohmann::json build_chat_request(const TranslatorRequest& request, const LlmConfig& config);

/// Pulls the `(define (problem ...))` form out of a reply.
std::string extract_problem(std::string_view reply);
/// Pulls the outermost JSON object out of a reply, dropping code fences.
std::string extract_json(std::string_view reply);
/// First line of a reply, normalized as a command.
std::string extract_action(std::string_view reply);

/// Remote model behind an OpenAI-compatible `/chat/completions` endpoint.
class LlmTranslator : public Translator {
 public:
  explicit LlmTranslator(LlmConfig config);

  /// Throws PreconditionViolation before any I/O on a malformed request or a
  /// missing API key, TransportError on network or HTTP failures (and replay
  /// misses), ModelRefusal on refusals and BudgetExceeded past the caps.
  TranslatorResponse translate(const TranslatorRequest& request) override;
  std::string name() const override { return "llm:" + config_.model; }

  std::size_t requests() const { return requests_; }
  std::size_t tokens() const { return tokens_; }

 private:
  std::string send(const nlohmann::json& body);

  LlmConfig config_;
  std::size_t requests_ = 0;
  std::size_t tokens_ = 0;
  std::map<std::string, int> seen_;  // request hash -> times sent, keys repeated requests apart
};

class LlmFactory : public TranslatorFactory {
 public:
  explicit LlmFactory(LlmConfig config) : config_(std::move(config)) {}
  std::unique_ptr<Translator> make(std::uint64_t seed, int trial) const override;
  std::string name() const override { return "llm"; }

 private:
  LlmConfig config_;
};

}  // namespace pddlego::translator
