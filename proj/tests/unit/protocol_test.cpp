// Copyright 2026 The cuebar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
///////////////////////////////////////////////////////////////////////////////

#include "cuebar/protocol.hpp"

#include <gtest/gtest.h>

#include <set>

namespace cuebar::protocol {
namespace {

const Method kMethods[] = {Method::kMS1, Method::kMS2, Method::kMU1, Method::kMU2};

std::vector<Party> honest_parties(const SessionKey& k) {
  return {Party::User(), Party::Server(k), Party::Mobile(k), Party::Terminal()};
}

AdversaryConfig terminal_only(const std::string& id) { return {id, std::nullopt}; }
AdversaryConfig mobile_only(const std::string& id) { return {std::nullopt, id}; }

TEST(ChannelGraphTest, HasExactlySevenEdges) {
  EXPECT_EQ(channel_graph().size(), 7u);
  std::set<std::pair<Role, Role>> pairs;
  for (const auto& e : channel_graph()) pairs.insert({e.from, e.to});
  EXPECT_EQ(pairs.size(), 7u);
}

TEST(ChannelGraphTest, MobileCannotReachTerminalOrServer) {
  EXPECT_FALSE(find_edge(Role::kMobile, Role::kTerminal));
  EXPECT_FALSE(find_edge(Role::kMobile, Role::kServer));
  EXPECT_FALSE(find_edge(Role::kServer, Role::kMobile));
  EXPECT_FALSE(find_edge(Role::kServer, Role::kUser));
  EXPECT_EQ(find_edge(Role::kTerminal, Role::kMobile)->medium, Medium::kVisual);
  EXPECT_EQ(find_edge(Role::kUser, Role::kMobile)->medium, Medium::kMobileInput);
}

TEST(ChannelGraphTest, SendOnMissingEdgeIsSimulationError) {
  Session s;
  Port mobile(s, Role::kMobile);
  EXPECT_THROW(mobile.send(Role::kTerminal, {}), SimulationError);
  EXPECT_THROW(mobile.send(Role::kServer, {}), SimulationError);
  EXPECT_NO_THROW(mobile.send(Role::kUser, {}));
  EXPECT_EQ(s.transcript().size(), 1u);
}

// A mobile that tries to smuggle data to the terminal.
class ChattyMobile : public HonestMobile {
 public:
  std::string id() const override { return "chatty"; }
  Message show_capture(const Message& c, const SessionKey& k, Method m, Port& port,
                       Rng& rng) override {
    port.send(Role::kTerminal, {"psst", "", {}, false});
    return HonestMobile::show_capture(c, k, m, port, rng);
  }
};

TEST(ChannelGraphTest, StrategyCannotOpenCovertChannel) {
  const SessionKey k = keygen(1);
  std::vector<Party> parties = {Party::User(), Party::Server(k),
                                Party::DishonestMobile(k, [] { return std::make_unique<ChattyMobile>(); }),
                                Party::Terminal()};
  EXPECT_THROW(run_method(Method::kMS1, parties, "hello", 1), SimulationError);
}

TEST(RunMethodTest, AllHonestAcceptsAuthenticMessage) {
  for (Method method : kMethods) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed);
      const SessionKey k = keygen(rng());
      const std::string m = detail::random_text(rng, 10 + seed * 7);
      SessionOutcome o = run_method(method, honest_parties(k), m, seed);
      EXPECT_TRUE(o.accepted) << method_name(method) << " " << o.note;
      EXPECT_EQ(o.accepted_value, m);
      EXPECT_FALSE(o.attack_succeeded);
    }
  }
}

TEST(RunMethodTest, TranscriptUsesOnlyGraphEdges) {
  const SessionKey k = keygen(3);
  for (Method method : kMethods) {
    SessionOutcome o = run_method(method, honest_parties(k), "pay 10 to bob", 3);
    ASSERT_FALSE(o.transcript.empty());
    for (const auto& e : o.transcript) {
      auto edge = find_edge(e.edge.from, e.edge.to);
      ASSERT_TRUE(edge);
      EXPECT_EQ(*edge, e.edge);
    }
  }
}

TEST(RunMethodTest, MS1CarriesMessageOnlyInBarcodes) {
  const SessionKey k = keygen(4);
  SessionOutcome o = run_method(Method::kMS1, honest_parties(k), "secret balance 1234", 4);
  ASSERT_TRUE(o.accepted);
  for (const auto& e : o.transcript)
    if (e.edge.from == Role::kServer) {
      EXPECT_TRUE(e.message.text.empty());
      EXPECT_FALSE(e.message.barcodes.empty());
    }
}

TEST(RunMethodTest, MultiBlockMessagesUseLinearCues) {
  const SessionKey k = keygen(5);
  ProtocolConfig cfg;
  const std::string m(3 * cfg.spec.max_message_bytes() - 1, 'q');
  SessionOutcome o = run_method(Method::kMS1, honest_parties(k), m, 5, cfg);
  ASSERT_TRUE(o.accepted);
  const auto& shown = o.transcript.at(1).message;
  ASSERT_EQ(shown.barcodes.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    const auto& b = *shown.barcodes[i];
    auto cue = read_cue(observed_cue(barcode_grid(b), b.spec));
    ASSERT_TRUE(cue);
    EXPECT_EQ(*cue, cue_symbols_for(i + 1, ArrangementLayout::Linear(3)));
  }
}

TEST(RunMethodTest, MS2SubstitutedTextIsRejected) {
  const SessionKey k = keygen(6);
  std::vector<Party> parties = {Party::User(), Party::Server(k), Party::Mobile(k),
                                Party::DishonestTerminal(builtin_strategies().terminal("terminal-substitute"))};
  SessionOutcome o = run_method(Method::kMS2, parties, "transfer 5 to alice", 6);
  EXPECT_FALSE(o.accepted);
  EXPECT_FALSE(o.attack_succeeded);
}

TEST(RunMethodTest, MU2WrongCodeIsRejected) {
  const SessionKey k = keygen(7);
  // Terminal that forwards the message honestly but mangles the code.
  class Mangler : public TerminalStrategy {
   public:
    std::string id() const override { return "mangler"; }
    std::optional<Message> forward(const std::optional<Message>& typed, const Context& ctx, Port&,
                                   Rng&) override {
      if (ctx.step != Step::kUserCode || !typed) return typed;
      Message m = *typed;
      m.code[0] = m.code[0] == '0' ? '1' : '0';
      return m;
    }
  };
  std::vector<Party> parties = {Party::User(), Party::Server(k), Party::Mobile(k),
                                Party::DishonestTerminal([] { return std::make_unique<Mangler>(); })};
  SessionOutcome o = run_method(Method::kMU2, parties, "hello", 7);
  EXPECT_FALSE(o.accepted);
  EXPECT_EQ(o.note, "wrong code");
}

TEST(RunMethodTest, MU2CodeIsEightHexDigits) {
  const SessionKey k = keygen(8);
  SessionOutcome o = run_method(Method::kMU2, honest_parties(k), "hello", 8);
  ASSERT_TRUE(o.accepted);
  bool seen = false;
  for (const auto& e : o.transcript)
    if (e.edge.medium == Medium::kKeyboard && !e.message.code.empty()) {
      EXPECT_EQ(e.message.code.size(), 8u);
      EXPECT_EQ(e.message.code.find_first_not_of("0123456789abcdef"), std::string::npos);
      seen = true;
    }
  EXPECT_TRUE(seen);
}

TEST(RunMethodTest, ConfigErrors) {
  const SessionKey k = keygen(9);
  EXPECT_THROW(run_method(Method::kMS1, {Party::User(), Party::Server(k), Party::Mobile(k)}, "x", 1),
               ConfigError);
  EXPECT_THROW(run_method(Method::kMS1,
                          {Party::User(), Party::User(), Party::Server(k), Party::Mobile(k), Party::Terminal()},
                          "x", 1),
               ConfigError);
  Party keyless_server{Role::kServer, true, std::nullopt, {}, {}};
  EXPECT_THROW(run_method(Method::kMS1, {Party::User(), keyless_server, Party::Mobile(k), Party::Terminal()},
                          "x", 1),
               ConfigError);
  Party keyed_user{Role::kUser, true, k, {}, {}};
  EXPECT_THROW(run_method(Method::kMS1, {keyed_user, Party::Server(k), Party::Mobile(k), Party::Terminal()},
                          "x", 1),
               ConfigError);
}

TEST(RunMethodTest, DeterministicGivenSeed) {
  const SessionKey k = keygen(10);
  auto parties = honest_parties(k);
  parties[3] = Party::DishonestTerminal(builtin_strategies().terminal("terminal-substitute"));
  auto a = run_method(Method::kMU2, parties, "abc", 99);
  auto b = run_method(Method::kMU2, parties, "abc", 99);
  ASSERT_EQ(a.transcript.size(), b.transcript.size());
  for (std::size_t i = 0; i < a.transcript.size(); ++i) {
    EXPECT_EQ(a.transcript[i].message.text, b.transcript[i].message.text);
    EXPECT_EQ(a.transcript[i].message.code, b.transcript[i].message.code);
  }
}

TEST(StrategyTest, BuiltinSetContainsRequiredIds) {
  const auto s = builtin_strategies();
  for (const char* id : {"terminal-eavesdrop", "terminal-substitute", "terminal-rearrange",
                         "terminal-replay", "terminal-forge"})
    EXPECT_EQ(s.terminal(id)()->id(), id);
  for (const char* id : {"mobile-always-accept", "mobile-display-constant", "mobile-display-random"})
    EXPECT_EQ(s.mobile(id)()->id(), id);
  EXPECT_THROW(s.terminal("terminal-nope"), ConfigError);
  EXPECT_THROW(s.mobile("mobile-nope"), ConfigError);
}

TEST(EvaluateSecurityTest, ModelConsistencyIsChecked) {
  EXPECT_THROW(evaluate_security(Method::kMS1, 1, mobile_only("mobile-always-accept"), 1, 0), ConfigError);
  EXPECT_THROW(evaluate_security(Method::kMS1, 1, {}, 1, 0), ConfigError);
  EXPECT_THROW(evaluate_security(Method::kMS1, 2, {"terminal-eavesdrop", "mobile-always-accept"}, 1, 0),
               ConfigError);
  EXPECT_THROW(evaluate_security(Method::kMS1, 3, terminal_only("terminal-eavesdrop"), 1, 0), ConfigError);
  EXPECT_THROW(evaluate_security(Method::kMS1, 4, terminal_only("terminal-eavesdrop"), 1, 0), ConfigError);
  EXPECT_THROW(evaluate_security(Method::kMS1, 1, terminal_only("terminal-nope"), 1, 0), ConfigError);
}

TEST(EvaluateSecurityTest, ReportDoesNotDependOnThreadCount) {
  auto adv = AdversaryConfig{"terminal-forge", "mobile-display-random"};
  auto a = evaluate_security(Method::kMS1, 3, adv, 60, 42, {}, 1);
  auto b = evaluate_security(Method::kMS1, 3, adv, 60, 42, {}, 4);
  EXPECT_EQ(a.successes, b.successes);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.seed, 42u);
  EXPECT_EQ(a.strategy, "terminal-forge+mobile-display-random");
}

TEST(EvaluateSecurityTest, MS1Model1EavesdropperLearnsNothing) {
  auto r = evaluate_security(Method::kMS1, 1, terminal_only("terminal-eavesdrop"), 300, 1);
  EXPECT_EQ(r.successes, 0);
  EXPECT_EQ(r.accepted, 300);
  ASSERT_TRUE(r.confidentiality_smoke);
  EXPECT_TRUE(*r.confidentiality_smoke);
}

TEST(EvaluateSecurityTest, SmokeCheckFlagsPlaintextOnScreen) {
  // MS2 shows the message in clear; the check has to notice.
  auto r = evaluate_security(Method::kMS2, 1, terminal_only("terminal-eavesdrop"), 20, 1);
  ASSERT_TRUE(r.confidentiality_smoke);
  EXPECT_FALSE(*r.confidentiality_smoke);
  auto r2 = evaluate_security(Method::kMS2, 2, mobile_only("mobile-always-accept"), 5, 1);
  EXPECT_FALSE(r2.confidentiality_smoke);
}

TEST(EvaluateSecurityTest, DishonestMobileBreaksMethod1) {
  for (Method method : {Method::kMS1, Method::kMU1}) {
    auto r = evaluate_security(method, 2, mobile_only("mobile-always-accept"), 200, 2);
    EXPECT_GE(r.rate, 0.99) << method_name(method);
  }
}

TEST(EvaluateSecurityTest, Method2SurvivesNonCollidingPair) {
  for (Method method : {Method::kMS2, Method::kMU2})
    for (const char* mob : {"mobile-always-accept", "mobile-display-constant", "mobile-display-random"}) {
      auto r = evaluate_security(method, 3, {"terminal-substitute", mob}, 300, 3);
      EXPECT_EQ(r.successes, 0) << method_name(method) << " " << mob;
    }
}

TEST(EvaluateSecurityTest, MU2CodeGuessNeverLands) {
  auto r = evaluate_security(Method::kMU2, 1, terminal_only("terminal-substitute"), 2000, 4);
  EXPECT_EQ(r.successes, 0);
  EXPECT_EQ(r.accepted, 0);
}

TEST(EvaluateSecurityTest, CueCheckIsWhatStopsRearrangement) {
  auto on = evaluate_security(Method::kMS1, 1, terminal_only("terminal-rearrange"), 100, 5);
  EXPECT_EQ(on.successes, 0);
  ProtocolConfig off;
  off.verify_cues = false;
  auto r = evaluate_security(Method::kMS1, 1, terminal_only("terminal-rearrange"), 100, 5, off);
  EXPECT_EQ(r.successes, 100);
  auto replay = evaluate_security(Method::kMS1, 1, terminal_only("terminal-replay"), 100, 5, off);
  EXPECT_EQ(replay.successes, 100);
}

TEST(TableTest, Entries) {
  EXPECT_TRUE(expected_guarantees(Method::kMS1, 1).confidentiality);
  EXPECT_TRUE(expected_guarantees(Method::kMU1, 1).confidentiality);
  EXPECT_FALSE(expected_guarantees(Method::kMS2, 1).confidentiality);
  EXPECT_FALSE(expected_guarantees(Method::kMU2, 1).confidentiality);
  for (Method m : kMethods) EXPECT_TRUE(expected_guarantees(m, 1).authenticity);
  for (int model : {2, 3}) {
    EXPECT_FALSE(expected_guarantees(Method::kMS1, model).authenticity);
    EXPECT_FALSE(expected_guarantees(Method::kMU1, model).authenticity);
    EXPECT_TRUE(expected_guarantees(Method::kMS2, model).authenticity);
    EXPECT_TRUE(expected_guarantees(Method::kMU2, model).authenticity);
    for (Method m : kMethods) EXPECT_FALSE(expected_guarantees(m, model).confidentiality);
  }
  EXPECT_THROW(expected_guarantees(Method::kMS1, 0), ConfigError);
}

TEST(TableTest, AdversariesPerModel) {
  EXPECT_EQ(adversaries_for(1).size(), 5u);
  EXPECT_EQ(adversaries_for(2).size(), 8u);
  EXPECT_EQ(adversaries_for(3).size(), 15u);
  for (int model = 1; model <= 3; ++model)
    for (const auto& a : adversaries_for(model)) EXPECT_NO_THROW(validate_adversary(model, a));
}

TEST(NamesTest, MethodRoundtrip) {
  for (Method m : kMethods) EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_THROW(parse_method("MS3"), ConfigError);
}

}  // namespace
}  // namespace cuebar::protocol
