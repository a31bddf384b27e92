#include "pddlego/translator/llm.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "pddlego/envs/text.hpp"
#include "pddlego/error.hpp"
#include "pddlego/resources.hpp"

namespace pddlego::translator {
namespace {

using nlohmann::json;

std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out(tmpl);
  for (const auto& [key, value] : values) {
    const std::string marker = "{{" + key + "}}";
    for (auto pos = out.find(marker); pos != std::string::npos; pos = out.find(marker, pos + value.size()))
      out.replace(pos, marker.size(), value);
  }
  return out;
}

std::string fnv_hex(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) h = (h ^ c) * 1099511628211ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Spaces requests process-wide by at least `interval` seconds.
void pace(double interval) {
  if (interval <= 0) return;
  static std::mutex mutex;
  static std::chrono::steady_clock::time_point next{};
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex);
    slot = std::max(next, std::chrono::steady_clock::now());
    next = slot + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(interval));
  }
  std::this_thread::sleep_until(slot);
}

std::string strip_fences(std::string_view reply) {
  std::string out(reply);
  for (auto pos = out.find("```"); pos != std::string::npos; pos = out.find("```")) {
    auto eol = out.find('\n', pos);
    out.erase(pos, (eol == std::string::npos ? out.size() : eol + 1) - pos);
  }
  return out;
}

}  // namespace

CassetteMode parse_cassette_mode(std::string_view text) {
  if (text == "off") return CassetteMode::kOff;
  if (text == "record") return CassetteMode::kRecord;
  if (text == "replay") return CassetteMode::kReplay;
  throw Error("unknown cassette mode: " + std::string(text));
}

Cassette::Cassette(std::string path, CassetteMode mode) : path_(std::move(path)), mode_(mode) {
  if (mode_ == CassetteMode::kRecord) {
    std::ofstream truncate(path_, std::ios::trunc);
    if (!truncate) throw Error("cannot write cassette " + path_);
  } else if (mode_ == CassetteMode::kReplay) {
    std::ifstream in(path_);
    if (!in) throw Error("cannot read cassette " + path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto record = json::parse(line);
      entries_.emplace(record.at("request_hash").get<std::string>(), record.at("response_text").get<std::string>());
    }
  }
}

std::optional<std::string> Cassette::find(const std::string& hash) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(hash);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Cassette::record(const std::string& hash, const std::string& response_text) {
  std::lock_guard lock(mutex_);
  entries_.emplace(hash, response_text);
  std::ofstream out(path_, std::ios::app);
  out << json{{"request_hash", hash}, {"response_text", response_text}}.dump() << '\n';
}

json build_chat_request(const TranslatorRequest& request, const LlmConfig& config) {
  const bool cooking = request.env == envs::EnvKind::kCooking;
  std::string system;
  std::string user;
  if (request.mode == Mode::kAction) {
    system = resource(cooking ? "action_gen_cooking.txt" : "action_gen_coin.txt");
    std::string valid;
    for (const auto& a : request.valid_actions) valid += (valid.empty() ? "" : ", ") + a;
    for (const auto& turn : request.history) user += turn + "\n";
    user += fill(resource("request_action.txt"), {{"observation", request.observation}, {"valid_actions", valid}});
  } else {
    system = fill(resource("pddl_gen.txt"),
                  {{"domain_file", std::string(resource(cooking ? "cooking-domain.pddl" : "coin-domain.pddl"))},
                   {"example_problem", std::string(resource("example_problem_coin.pddl"))}});
    if (request.mode == Mode::kDelta) system += "\n" + std::string(resource("pddl_edit.txt"));
    if (cooking) system += "\n" + std::string(resource("containers.txt"));
    const std::map<std::string, std::string> values{{"problem", request.prior_problem},
                                                    {"observation", request.observation}};
    if (request.mode == Mode::kDelta) user = fill(resource("request_delta.txt"), values);
    else if (request.prior_problem.empty()) user = fill(resource("request_first.txt"), values);
    else user = fill(resource("request_problem.txt"), values);
  }
  json body{{"model", config.model},
            {"messages", json::array({{{"role", "system"}, {"content", system}}, {{"role", "user"}, {"content", user}}})},
            {"temperature", config.temperature}};
  if (config.force_json && request.mode == Mode::kDelta) body["response_format"] = {{"type", "json_object"}};
  return body;
}

std::string extract_problem(std::string_view reply) {
  const std::string text = strip_fences(reply);
  const auto start = text.find("(define");
  if (start == std::string::npos) return text;
  int depth = 0;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] == ';') {
      i = text.find('\n', i);
      if (i == std::string::npos) break;
    } else if (text[i] == '(') {
      ++depth;
    } else if (text[i] == ')' && --depth == 0) {
      return text.substr(start, i - start + 1);
    }
  }
  return text.substr(start);
}

std::string extract_json(std::string_view reply) {
  const std::string text = strip_fences(reply);
  const auto start = text.find('{');
  const auto end = text.rfind('}');
  if (start == std::string::npos || end == std::string::npos || end < start) return text;
  return text.substr(start, end - start + 1);
}

std::string extract_action(std::string_view reply) {
  std::string text = strip_fences(reply);
  const auto b = text.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  text = text.substr(b, text.find('\n', b) - b);
  while (!text.empty() && (text.back() == '.' || text.back() == '"' || text.back() == '\'')) text.pop_back();
  while (!text.empty() && (text.front() == '>' || text.front() == '"' || text.front() == '\'')) text.erase(0, 1);
  return envs::normalize_command(text);
}

LlmTranslator::LlmTranslator(LlmConfig config) : config_(std::move(config)) {}

std::string LlmTranslator::send(const json& body) {
  const std::string payload = body.dump();
  const std::string base = fnv_hex(payload);
  const std::string key = base + "-" + std::to_string(seen_[base]++);
  const auto mode = config_.cassette ? config_.cassette->mode() : CassetteMode::kOff;
  if (mode == CassetteMode::kReplay) {
    auto hit = config_.cassette->find(key);
    if (!hit) throw TransportError("cassette has no response for request " + key);
    return *hit;
  }
  const char* api_key = std::getenv(kApiKeyVariable);
  if (!api_key || !*api_key) throw PreconditionViolation(std::string(kApiKeyVariable) + " is not set");

  const auto scheme = config_.endpoint.find("://");
  const auto slash = config_.endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  const std::string origin = config_.endpoint.substr(0, slash);
  const std::string path = (slash == std::string::npos ? "" : config_.endpoint.substr(slash)) + "/chat/completions";

  pace(config_.min_interval_seconds);
  httplib::Client client(origin);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_bearer_token_auth(api_key);
  auto result = client.Post(path, payload, "application/json");
  if (!result) throw TransportError("request to " + origin + " failed: " + httplib::to_string(result.error()));
  if (result->status != 200)
    throw TransportError("HTTP " + std::to_string(result->status) + ": " + result->body.substr(0, 200));
  if (mode == CassetteMode::kRecord) config_.cassette->record(key, result->body);
  return result->body;
}

TranslatorResponse LlmTranslator::translate(const TranslatorRequest& request) {
  request.check();
  if (config_.max_requests && requests_ >= config_.max_requests)
    throw BudgetExceeded("request cap of " + std::to_string(config_.max_requests) + " reached");
  if (config_.max_tokens && tokens_ >= config_.max_tokens)
    throw BudgetExceeded("token cap of " + std::to_string(config_.max_tokens) + " reached");
  const std::string body = send(build_chat_request(request, config_));
  ++requests_;

  json reply;
  try {
    reply = json::parse(body);
  } catch (const json::exception& e) {
    throw TransportError(std::string("unparseable response: ") + e.what());
  }
  if (reply.contains("usage") && reply["usage"].contains("total_tokens"))
    tokens_ += reply["usage"]["total_tokens"].get<std::size_t>();
  if (!reply.contains("choices") || reply["choices"].empty()) throw TransportError("response has no choices");
  const auto& choice = reply["choices"][0];
  const auto& message = choice.value("message", json::object());
  if (message.contains("refusal") && message["refusal"].is_string())
    throw ModelRefusal(message["refusal"].get<std::string>());
  if (choice.value("finish_reason", "") == "content_filter") throw ModelRefusal("content filter");
  if (!message.contains("content") || !message["content"].is_string()) throw ModelRefusal("empty reply");

  TranslatorResponse response;
  response.mode = request.mode;
  response.raw = message["content"].get<std::string>();
  switch (request.mode) {
    case Mode::kInitProblem: response.text = extract_problem(response.raw); break;
    case Mode::kDelta: response.text = extract_json(response.raw); break;
    case Mode::kAction: response.text = extract_action(response.raw); break;
  }
  return response;
}

std::unique_ptr<Translator> LlmFactory::make(std::uint64_t, int) const {
  return std::make_unique<LlmTranslator>(config_);
}

}  // namespace pddlego::translator
