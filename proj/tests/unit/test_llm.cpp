#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "../support/mock_llm.hpp"
#include "pddlego/edit/delta.hpp"
#include "pddlego/error.hpp"
#include "pddlego/pddl/parser.hpp"
#include "pddlego/translator/faulty.hpp"
#include "pddlego/translator/llm.hpp"
#include "pddlego/translator/oracle.hpp"

namespace pddlego::translator {
namespace {

const char* kAppendixObservation =
    "You are in the kitchen. To the South you see a closed wooden door. To the East you see a closed glass door.";

struct ApiKey {
  explicit ApiKey(const char* value) {
    if (value) setenv(kApiKeyVariable, value, 1);
    else unsetenv(kApiKeyVariable);
  }
  ~ApiKey() { unsetenv(kApiKeyVariable); }
};

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pddlego-" + std::to_string(::getpid()) + "-" + name)).string();
}

TEST(Llm, RequestCarriesPromptsAndJsonFlag) {
  LlmConfig cfg;
  TranslatorRequest r;
  r.mode = Mode::kDelta;
  r.prior_problem = "(define (problem p) (:domain environment) (:objects) (:init) (:goal (and)))";
  r.observation = kAppendixObservation;
  auto body = build_chat_request(r, cfg);
  EXPECT_EQ(body["model"], cfg.model);
  EXPECT_EQ(body["temperature"], 1.0);
  EXPECT_EQ(body["response_format"]["type"], "json_object");
  const std::string system = body["messages"][0]["content"];
  EXPECT_NE(system.find("(:action open_door"), std::string::npos);
  EXPECT_NE(system.find("\"replace\": {}"), std::string::npos);
  const std::string user = body["messages"][1]["content"];
  EXPECT_NE(user.find(kAppendixObservation), std::string::npos);
  r.mode = Mode::kInitProblem;
  EXPECT_FALSE(build_chat_request(r, cfg).contains("response_format"));
  r.env = envs::EnvKind::kCooking;
  const std::string cooking = build_chat_request(r, cfg)["messages"][0]["content"];
  EXPECT_NE(cooking.find("(:action use_stove"), std::string::npos);
  EXPECT_NE(cooking.find("obj_at"), std::string::npos);
}

TEST(Llm, ExtractsPayloadFromChattyReplies) {
  EXPECT_EQ(extract_problem("Sure!\n```pddl\n(define (problem p) ; (\n (:init (at a)))\n```\nDone."),
            "(define (problem p) ; (\n (:init (at a)))");
  EXPECT_EQ(extract_json("```json\n{\"objects\": {}}\n```"), "{\"objects\": {}}");
  EXPECT_EQ(extract_action("> Move  North.\nbecause"), "move north");
}

TEST(Llm, GuardsFireBeforeAnyNetworkCall) {
  ApiKey key(nullptr);
  LlmConfig cfg;
  cfg.endpoint = "http://127.0.0.1:9";  // nothing listens; a call would fail as TransportError
  LlmTranslator llm(cfg);
  TranslatorRequest r;
  r.mode = Mode::kDelta;
  r.observation = kAppendixObservation;
  EXPECT_THROW(llm.translate(r), PreconditionViolation);
  r.mode = Mode::kInitProblem;
  EXPECT_THROW(llm.translate(r), PreconditionViolation);  // no API key
  EXPECT_EQ(llm.requests(), 0u);
}

TEST(Llm, TalksToChatEndpointAndParsesModes) {
  ApiKey key("test-key");
  testing::MockChatServer server;
  LlmConfig cfg;
  cfg.endpoint = server.endpoint();
  LlmTranslator llm(cfg);
  TranslatorRequest r;
  r.mode = Mode::kInitProblem;
  r.observation = "> You are in the kitchen. To the South you see a closed wooden door.";
  auto pf = pddl::parse_problem(llm.translate(r).text);
  EXPECT_TRUE(pf.has_object("unk_1"));
  EXPECT_EQ(server.last_authorization(), "Bearer test-key");

  r.mode = Mode::kDelta;
  r.prior_problem = pddl::read_file(std::string(PDDLEGO_SOURCE_DIR) + "/fixtures/appendix-step1.pddl");
  r.observation = kAppendixObservation;
  auto delta = edit::parse_delta_json(llm.translate(r).text);
  EXPECT_EQ(delta.init.add.size(), 4u);

  r.mode = Mode::kAction;
  r.valid_actions = {"move north", "take coin"};
  EXPECT_EQ(llm.translate(r).text, "take coin");
  EXPECT_EQ(llm.requests(), 3u);
  EXPECT_GT(llm.tokens(), 0u);
}

TEST(Llm, ErrorsMapToTheirKinds) {
  ApiKey key("k");
  TranslatorRequest r;
  r.observation = kAppendixObservation;
  {
    testing::MockChatServer server(503);
    LlmConfig cfg;
    cfg.endpoint = server.endpoint();
    EXPECT_THROW(LlmTranslator(cfg).translate(r), TransportError);
  }
  {
    testing::MockChatServer server(200, true);
    LlmConfig cfg;
    cfg.endpoint = server.endpoint();
    EXPECT_THROW(LlmTranslator(cfg).translate(r), ModelRefusal);
  }
  {
    testing::MockChatServer server;
    LlmConfig cfg;
    cfg.endpoint = server.endpoint();
    cfg.max_requests = 1;
    LlmTranslator llm(cfg);
    llm.translate(r);
    EXPECT_THROW(llm.translate(r), BudgetExceeded);
    EXPECT_EQ(server.requests(), 1);
  }
}

TEST(Llm, CassetteReplaysRecordedRunOffline) {
  const std::string path = temp_path("cassette.jsonl");
  TranslatorRequest r;
  r.observation = kAppendixObservation;
  std::vector<std::string> live;
  {
    ApiKey key("k");
    testing::MockChatServer server;
    LlmConfig cfg;
    cfg.endpoint = server.endpoint();
    cfg.cassette = std::make_shared<Cassette>(path, CassetteMode::kRecord);
    LlmTranslator llm(cfg);
    live.push_back(llm.translate(r).raw);
    live.push_back(llm.translate(r).raw);  // the same request twice gets its own record
  }
  ApiKey no_key(nullptr);
  LlmConfig cfg;
  cfg.endpoint = "http://127.0.0.1:9";
  cfg.cassette = std::make_shared<Cassette>(path, CassetteMode::kReplay);
  LlmTranslator llm(cfg);
  EXPECT_EQ(llm.translate(r).raw, live[0]);
  EXPECT_EQ(llm.translate(r).raw, live[1]);
  EXPECT_THROW(llm.translate(r), TransportError);
  std::filesystem::remove(path);
}

TEST(Faulty, ZeroProbabilityIsTheOracle) {
  FaultyTranslator faulty(std::make_unique<OracleTranslator>(), FaultProfile{0.0, {FaultKind::kSyntaxError}, 3});
  OracleTranslator oracle;
  TranslatorRequest r;
  r.mode = Mode::kDelta;
  r.prior_problem = pddl::read_file(std::string(PDDLEGO_SOURCE_DIR) + "/fixtures/appendix-step1.pddl");
  r.observation = kAppendixObservation;
  EXPECT_EQ(faulty.translate(r).text, oracle.translate(r).text);
  EXPECT_TRUE(faulty.log().empty());
}

TEST(Faulty, EachKindBreaksTheOutputItsOwnWay) {
  TranslatorRequest r;
  r.mode = Mode::kDelta;
  r.prior_problem = pddl::read_file(std::string(PDDLEGO_SOURCE_DIR) + "/fixtures/appendix-step1.pddl");
  r.observation = kAppendixObservation;
  auto run = [&](FaultKind kind) {
    FaultyTranslator f(std::make_unique<OracleTranslator>(OracleOptions{"loc"}), FaultProfile{1.0, {kind}, 1});
    auto text = f.translate(r).text;
    EXPECT_EQ(f.log().size(), 1u);
    EXPECT_EQ(f.log()[0].kind, kind);
    return text;
  };
  EXPECT_THROW(edit::parse_delta_json(run(FaultKind::kSyntaxError)), MalformedDelta);
  auto dropped = edit::parse_delta_json(run(FaultKind::kDropFact));
  EXPECT_EQ(dropped.init.add.size(), 3u);
  auto ghost = edit::parse_delta_json(run(FaultKind::kUndeclaredObject));
  EXPECT_EQ(ghost.init.add.back(), "(visited ghost_room)");
  EXPECT_TRUE(edit::deletes_visited(edit::parse_delta_json(run(FaultKind::kDeleteVisited))));
  EXPECT_THROW((FaultProfile{1.5, {FaultKind::kDropFact}, 0}.check()), PreconditionViolation);
}

}  // namespace
}  // namespace pddlego::translator
