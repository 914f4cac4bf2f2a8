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

// Four-party protocol simulator: User, Server, Mobile and Terminal exchange
// messages over a fixed channel graph, with pluggable dishonest behaviour
// for the Terminal and the Mobile.

#ifndef CUEBAR_PROTOCOL_HPP_
#define CUEBAR_PROTOCOL_HPP_

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cuebar/arrangement.hpp"
#include "cuebar/barcode.hpp"
#include "cuebar/common.hpp"
#include "cuebar/keys.hpp"
#include "cuebar/payload.hpp"

namespace cuebar::protocol {

enum class Role { kUser, kServer, kMobile, kTerminal };
enum class Medium { kNetwork, kDisplay, kKeyboard, kVisual, kMobileDisplay, kMobileInput };
enum class Method { kMS1, kMS2, kMU1, kMU2 };

inline std::string role_name(Role r) {
  switch (r) {
    case Role::kUser: return "USER";
    case Role::kServer: return "SERVER";
    case Role::kMobile: return "MOBILE";
    case Role::kTerminal: return "TERMINAL";
  }
  return "?";
}

inline std::string medium_name(Medium m) {
  switch (m) {
    case Medium::kNetwork: return "NETWORK";
    case Medium::kDisplay: return "DISPLAY";
    case Medium::kKeyboard: return "KEYBOARD";
    case Medium::kVisual: return "VISUAL";
    case Medium::kMobileDisplay: return "MOBILE_DISPLAY";
    case Medium::kMobileInput: return "MOBILE_INPUT";
  }
  return "?";
}

inline std::string method_name(Method m) {
  switch (m) {
    case Method::kMS1: return "MS1";
    case Method::kMS2: return "MS2";
    case Method::kMU1: return "MU1";
    case Method::kMU2: return "MU2";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  for (auto m : {Method::kMS1, Method::kMS2, Method::kMU1, Method::kMU2})
    if (method_name(m) == s) return m;
  throw ConfigError("unknown method '" + std::string(s) + "'");
}

struct ChannelEdge {
  Role from;
  Role to;
  Medium medium;
  friend bool operator==(const ChannelEdge&, const ChannelEdge&) = default;
};

// The only links that exist. Mobile has no way to reach Terminal or Server.
inline const std::vector<ChannelEdge>& channel_graph() {
  static const std::vector<ChannelEdge> edges = {
      {Role::kServer, Role::kTerminal, Medium::kNetwork},
      {Role::kTerminal, Role::kServer, Medium::kNetwork},
      {Role::kTerminal, Role::kUser, Medium::kDisplay},
      {Role::kUser, Role::kTerminal, Medium::kKeyboard},
      {Role::kTerminal, Role::kMobile, Medium::kVisual},
      {Role::kMobile, Role::kUser, Medium::kMobileDisplay},
      {Role::kUser, Role::kMobile, Medium::kMobileInput},
  };
  return edges;
}

inline std::optional<ChannelEdge> find_edge(Role from, Role to) {
  for (const auto& e : channel_graph())
    if (e.from == from && e.to == to) return e;
  return std::nullopt;
}

using BarcodePtr = std::shared_ptr<const BarcodeImage>;

// Anything that travels over an edge: free text, an optional verification
// code, barcodes, or an explicit refusal.
struct Message {
  std::string text;
  std::string code;
  std::vector<BarcodePtr> barcodes;
  bool reject = false;
};

struct TranscriptEntry {
  ChannelEdge edge;
  Message message;
};

class Session;

// What a party may use to talk outside the scripted steps. Every send is
// checked against the channel graph.
class Port {
 public:
  Port(Session& session, Role self) : session_(session), self_(self) {}
  Role role() const { return self_; }
  inline void send(Role to, Message m);

 private:
  Session& session_;
  Role self_;
};

class Session {
 public:
  Message deliver(Role from, Role to, Message m) {
    auto edge = find_edge(from, to);
    if (!edge)
      throw SimulationError("no channel from " + role_name(from) + " to " + role_name(to));
    transcript_.push_back({*edge, m});
    return m;
  }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  std::vector<TranscriptEntry> take_transcript() { return std::move(transcript_); }

 private:
  std::vector<TranscriptEntry> transcript_;
};

inline void Port::send(Role to, Message m) { session_.deliver(self_, to, std::move(m)); }

// Which protocol step a callback is asked about.
enum class Step {
  kServerContent,  // MS1/MS2 step 1, MU2 step 2: what the Server sent
  kUserMessage,    // MU1 step 3 / MU2 step 1: text typed on the keyboard
  kUserCode,       // MU2 step 6: the code typed on the keyboard (may be absent)
};

struct Context {
  Method method;
  Step step;
};

// --- strategies -------------------------------------------------------------

class TerminalStrategy {
 public:
  virtual ~TerminalStrategy() = default;
  virtual std::string id() const = 0;
  // What the Terminal shows (to the User and to the Mobile's camera) after
  // receiving content from the Server.
  virtual Message display(const Message& from_server, const Context&, Port&, Rng&) {
    return from_server;
  }
  // What the Terminal forwards to the Server after the User typed `typed`;
  // nullopt forwards nothing.
  virtual std::optional<Message> forward(const std::optional<Message>& typed, const Context&,
                                         Port&, Rng&) {
    return typed;
  }
};

class MobileStrategy {
 public:
  virtual ~MobileStrategy() = default;
  virtual std::string id() const = 0;
  // MU1: text typed on the Mobile -> readable protected form shown back.
  virtual Message protect_input(const Message& typed, const SessionKey& key, Method, Port&,
                                Rng& rng) = 0;
  // Barcodes captured from the Terminal -> what the Mobile displays.
  virtual Message show_capture(const Message& captured, const SessionKey& key, Method, Port&,
                               Rng& rng) = 0;
};

using TerminalFactory = std::function<std::unique_ptr<TerminalStrategy>()>;
using MobileFactory = std::function<std::unique_ptr<MobileStrategy>()>;

struct ProtocolConfig {
  BarcodeSpec spec{30, 42};
  ecc::EccPolicy policy;
  int message_bytes = 80;    // length of the random authentic message
  bool verify_cues = true;   // the User checks the arrangement of cues
  int mu2_code_bytes = 4;    // 32-bit nonce, shown as 8 hex digits
};

namespace detail {

inline std::string random_text(Rng& rng, std::size_t n) {
  static constexpr std::string_view kAlphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 ";
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string s(n, ' ');
  for (auto& c : s) c = kAlphabet[pick(rng)];
  return s;
}

inline ArrangementLayout layout_for(int blocks) {
  return blocks == 1 ? ArrangementLayout::Single() : ArrangementLayout::Linear(blocks);
}

// Splits the payload into chunks and renders one barcode per chunk with the
// cue of its position.
inline std::vector<BarcodePtr> make_barcodes(const SessionKey& key, const std::string& payload,
                                             const ProtocolConfig& cfg, Rng& rng) {
  const std::size_t chunk = static_cast<std::size_t>(cfg.spec.max_message_bytes());
  if (chunk == 0) throw CapacityError("barcode spec holds no payload");
  const int blocks = std::max<int>(1, static_cast<int>((payload.size() + chunk - 1) / chunk));
  const auto layout = layout_for(blocks);
  std::vector<BarcodePtr> out;
  for (int i = 0; i < blocks; ++i) {
    const std::string part = payload.substr(i * chunk, chunk);
    out.push_back(std::make_shared<const BarcodeImage>(encode_barcode(
        key, to_bytes(part), cue_symbols_for(i + 1, layout), cfg.spec, random_block(rng))));
  }
  return out;
}

// Decodes every barcode in order and concatenates; nullopt if any is refused.
inline std::optional<std::string> read_barcodes(const std::vector<BarcodePtr>& codes,
                                                const SessionKey& key, const ProtocolConfig& cfg) {
  if (codes.empty()) return std::nullopt;
  std::string out;
  for (const auto& b : codes) {
    try {
      out += to_string(decode_barcode(*b, key, cfg.policy).message);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return out;
}

inline std::string hex_code(const std::string& bytes) { return to_hex(to_bytes(bytes)); }

}  // namespace detail

// --- honest parties ---------------------------------------------------------

class HonestTerminal : public TerminalStrategy {
 public:
  std::string id() const override { return "honest"; }
};

class HonestMobile : public MobileStrategy {
 public:
  explicit HonestMobile(ProtocolConfig cfg = {}) : cfg_(std::move(cfg)) {}
  std::string id() const override { return "honest"; }

  Message protect_input(const Message& typed, const SessionKey& key, Method, Port&,
                        Rng& rng) override {
    return {to_readable(protect(to_bytes(typed.text), key, random_block(rng))), "", {}, false};
  }

  Message show_capture(const Message& captured, const SessionKey& key, Method method, Port&,
                       Rng&) override {
    auto payload = detail::read_barcodes(captured.barcodes, key, cfg_);
    if (!payload) return {"", "", {}, true};
    if (method == Method::kMU2) {
      const std::size_t n = static_cast<std::size_t>(cfg_.mu2_code_bytes);
      if (payload->size() < n) return {"", "", {}, true};
      return {payload->substr(0, payload->size() - n),
              detail::hex_code(payload->substr(payload->size() - n)), {}, false};
    }
    return {*payload, "", {}, false};
  }

 private:
  ProtocolConfig cfg_;
};

// --- dishonest terminals ----------------------------------------------------

// Relays faithfully; what it sees is the transcript.
class EavesdropTerminal : public TerminalStrategy {
 public:
  std::string id() const override { return "terminal-eavesdrop"; }
};

// Tries to get its own random message m' accepted through whatever the
// method lets a Terminal touch.
class SubstituteTerminal : public TerminalStrategy {
 public:
  explicit SubstituteTerminal(ProtocolConfig cfg = {}) : cfg_(std::move(cfg)) {}
  std::string id() const override { return "terminal-substitute"; }

  Message display(const Message& from_server, const Context& ctx, Port&, Rng& rng) override {
    const std::string& target = target_for(rng, from_server.text.size());
    Message out = from_server;
    if (ctx.method == Method::kMS2) {
      out.text = target;  // beside the authentic barcodes
    } else if (ctx.method == Method::kMS1) {
      // without the key the best it can show is a barcode under a guess
      out.barcodes = detail::make_barcodes(keygen(rng()), target, cfg_, rng);
    }
    return out;
  }

  std::optional<Message> forward(const std::optional<Message>& typed, const Context& ctx, Port&,
                                 Rng& rng) override {
    if (ctx.method == Method::kMU1) {
      if (!typed) return typed;
      // re-protect m' under a guessed key, same readable length class
      const std::string& target = target_for(rng, cfg_.message_bytes);
      return Message{to_readable(protect(to_bytes(target), keygen(rng()), random_block(rng))),
                     "", {}, false};
    }
    if (ctx.method == Method::kMU2 && ctx.step == Step::kUserMessage) {
      return Message{target_for(rng, typed ? typed->text.size() : 0), "", {}, false};
    }
    if (ctx.method == Method::kMU2 && ctx.step == Step::kUserCode) {
      // the User refuses to confirm m', so the code has to be guessed
      std::string guess(static_cast<std::size_t>(cfg_.mu2_code_bytes), '\0');
      for (auto& c : guess) c = static_cast<char>(rng() & 0xFF);
      return Message{"", detail::hex_code(guess), {}, false};
    }
    return typed;
  }

 private:
  const std::string& target_for(Rng& rng, std::size_t n) {
    if (!target_) target_ = detail::random_text(rng, std::max<std::size_t>(n, 16));
    return *target_;
  }
  ProtocolConfig cfg_;
  std::optional<std::string> target_;
};

// Shows the authentic barcodes in a different order.
class RearrangeTerminal : public TerminalStrategy {
 public:
  std::string id() const override { return "terminal-rearrange"; }
  Message display(const Message& from_server, const Context&, Port&, Rng&) override {
    Message out = from_server;
    if (out.barcodes.size() >= 2) std::rotate(out.barcodes.begin(), out.barcodes.begin() + 1,
                                              out.barcodes.end());
    return out;
  }
};

// Shows the first authentic barcode again in the second position.
class ReplayTerminal : public TerminalStrategy {
 public:
  std::string id() const override { return "terminal-replay"; }
  Message display(const Message& from_server, const Context&, Port&, Rng&) override {
    Message out = from_server;
    if (out.barcodes.size() >= 2) out.barcodes[1] = out.barcodes[0];
    return out;
  }
};

// Renders fresh barcodes for m' under a key of its own, with correct cues.
class ForgeTerminal : public TerminalStrategy {
 public:
  explicit ForgeTerminal(ProtocolConfig cfg = {}) : cfg_(std::move(cfg)) {}
  std::string id() const override { return "terminal-forge"; }
  Message display(const Message& from_server, const Context& ctx, Port&, Rng& rng) override {
    std::string target = detail::random_text(rng, static_cast<std::size_t>(cfg_.message_bytes));
    if (ctx.method == Method::kMU2) {
      // keep the Server's length so the forged code sits where the real one would
      target.resize(static_cast<std::size_t>(cfg_.message_bytes + cfg_.mu2_code_bytes), 'x');
    }
    Message out = from_server;
    out.barcodes = detail::make_barcodes(keygen(rng()), target, cfg_, rng);
    if (ctx.method == Method::kMS2) out.text = target;
    return out;
  }

 private:
  ProtocolConfig cfg_;
};

// --- dishonest mobiles ------------------------------------------------------

// Base for mobiles that show their own message instead of the authentic one.
// They do hold the key; for MU2 they still pass on the real code so the
// only thing wrong is the message.
class FabricatingMobile : public MobileStrategy {
 public:
  explicit FabricatingMobile(ProtocolConfig cfg) : cfg_(std::move(cfg)) {}

  Message protect_input(const Message&, const SessionKey& key, Method, Port&, Rng& rng) override {
    return {to_readable(protect(to_bytes(fabricate(rng)), key, random_block(rng))), "", {}, false};
  }

  Message show_capture(const Message& captured, const SessionKey& key, Method method, Port&,
                       Rng& rng) override {
    Message out{fabricate(rng), "", {}, false};
    if (method == Method::kMU2) {
      auto payload = detail::read_barcodes(captured.barcodes, key, cfg_);
      const std::size_t n = static_cast<std::size_t>(cfg_.mu2_code_bytes);
      if (payload && payload->size() >= n)
        out.code = detail::hex_code(payload->substr(payload->size() - n));
    }
    return out;
  }

 protected:
  virtual std::string fabricate(Rng& rng) = 0;
  ProtocolConfig cfg_;
};

// Says "authentic" to everything and shows a message of its own choosing.
class AlwaysAcceptMobile : public FabricatingMobile {
 public:
  using FabricatingMobile::FabricatingMobile;
  std::string id() const override { return "mobile-always-accept"; }

 protected:
  std::string fabricate(Rng& rng) override {
    if (!chosen_) chosen_ = "pay attacker " + detail::random_text(rng, 12);
    return *chosen_;
  }
  std::optional<std::string> chosen_;
};

class DisplayConstantMobile : public FabricatingMobile {
 public:
  using FabricatingMobile::FabricatingMobile;
  std::string id() const override { return "mobile-display-constant"; }

 protected:
  std::string fabricate(Rng&) override { return "transfer approved"; }
};

class DisplayRandomMobile : public FabricatingMobile {
 public:
  using FabricatingMobile::FabricatingMobile;
  std::string id() const override { return "mobile-display-random"; }

 protected:
  std::string fabricate(Rng& rng) override {
    return detail::random_text(rng, static_cast<std::size_t>(cfg_.message_bytes));
  }
};

struct StrategySet {
  std::vector<std::pair<std::string, TerminalFactory>> terminals;
  std::vector<std::pair<std::string, MobileFactory>> mobiles;

  TerminalFactory terminal(const std::string& id) const {
    for (const auto& [name, f] : terminals)
      if (name == id) return f;
    throw ConfigError("unknown terminal strategy '" + id + "'");
  }
  MobileFactory mobile(const std::string& id) const {
    for (const auto& [name, f] : mobiles)
      if (name == id) return f;
    throw ConfigError("unknown mobile strategy '" + id + "'");
  }
};

inline StrategySet builtin_strategies(const ProtocolConfig& cfg = {}) {
  StrategySet s;
  s.terminals = {
      {"terminal-eavesdrop", [] { return std::make_unique<EavesdropTerminal>(); }},
      {"terminal-substitute", [cfg] { return std::make_unique<SubstituteTerminal>(cfg); }},
      {"terminal-rearrange", [] { return std::make_unique<RearrangeTerminal>(); }},
      {"terminal-replay", [] { return std::make_unique<ReplayTerminal>(); }},
      {"terminal-forge", [cfg] { return std::make_unique<ForgeTerminal>(cfg); }},
  };
  s.mobiles = {
      {"mobile-always-accept", [cfg] { return std::make_unique<AlwaysAcceptMobile>(cfg); }},
      {"mobile-display-constant", [cfg] { return std::make_unique<DisplayConstantMobile>(cfg); }},
      {"mobile-display-random", [cfg] { return std::make_unique<DisplayRandomMobile>(cfg); }},
  };
  return s;
}

// --- one session --------------------------------------------------------------

struct Party {
  Role role;
  bool honest = true;
  std::optional<SessionKey> key;          // Server and Mobile only
  TerminalFactory terminal;               // used when role == kTerminal and !honest
  MobileFactory mobile;                   // used when role == kMobile and !honest

  static Party User() { return {Role::kUser, true, std::nullopt, {}, {}}; }
  static Party Server(const SessionKey& k) { return {Role::kServer, true, k, {}, {}}; }
  static Party Mobile(const SessionKey& k) { return {Role::kMobile, true, k, {}, {}}; }
  static Party Terminal() { return {Role::kTerminal, true, std::nullopt, {}, {}}; }
  static Party DishonestTerminal(TerminalFactory f) {
    return {Role::kTerminal, false, std::nullopt, std::move(f), {}};
  }
  static Party DishonestMobile(const SessionKey& k, MobileFactory f) {
    return {Role::kMobile, false, k, {}, std::move(f)};
  }
};

struct SessionOutcome {
  std::vector<TranscriptEntry> transcript;
  bool accepted = false;
  std::string accepted_value;
  std::string authentic;
  bool attack_succeeded = false;
  std::string note;  // why the accepting party refused, if it did
};

namespace detail {

// The User's look at the Terminal's display: cues read off every barcode
// and checked against the arrangement implied by their number.
inline bool user_checks_cues(const Message& shown, const ProtocolConfig& cfg, std::string& why) {
  if (!cfg.verify_cues) return true;
  if (shown.barcodes.empty()) {
    why = "no barcode shown";
    return false;
  }
  std::vector<SymbolSeq> seen;
  for (const auto& b : shown.barcodes) {
    auto cue = read_cue(observed_cue(barcode_grid(*b), b->spec));
    if (!cue) {
      why = "unreadable cue";
      return false;
    }
    seen.push_back(*cue);
  }
  if (auto v = verify_arrangement(seen, layout_for(static_cast<int>(seen.size())))) {
    why = "arrangement violation at " + std::to_string(v->position) + " (" + rule_name(v->rule) + ")";
    return false;
  }
  return true;
}

}  // namespace detail

// Runs one session of `method` carrying `m` (the User's message for MU1/MU2,
// the Server's for MS1/MS2). Randomness for each party comes from its own
// stream of `seed`.
inline SessionOutcome run_method(Method method, const std::vector<Party>& parties,
                                 const std::string& m, std::uint64_t seed,
                                 const ProtocolConfig& cfg = {}) {
  const Party* user = nullptr;
  const Party* server = nullptr;
  const Party* mobile = nullptr;
  const Party* terminal = nullptr;
  for (const auto& p : parties) {
    const Party** slot = p.role == Role::kUser     ? &user
                         : p.role == Role::kServer ? &server
                         : p.role == Role::kMobile ? &mobile
                                                   : &terminal;
    if (*slot) throw ConfigError("duplicate " + role_name(p.role));
    *slot = &p;
  }
  if (!user || !server || !mobile || !terminal) throw ConfigError("all four roles are required");
  if (!server->key || !mobile->key) throw ConfigError("Server and Mobile need the session key");
  if (user->key || terminal->key) throw ConfigError("only Server and Mobile may hold keys");
  if (!user->honest || !server->honest) throw ConfigError("User and Server are always honest");
  if (!terminal->honest && !terminal->terminal) throw ConfigError("dishonest Terminal needs a strategy");
  if (!mobile->honest && !mobile->mobile) throw ConfigError("dishonest Mobile needs a strategy");

  const SessionKey& ks = *server->key;
  const SessionKey& km = *mobile->key;
  Rng server_rng(derive_seed(seed, 1)), terminal_rng(derive_seed(seed, 2)),
      mobile_rng(derive_seed(seed, 3));

  std::unique_ptr<TerminalStrategy> term =
      terminal->honest ? std::make_unique<HonestTerminal>() : terminal->terminal();
  std::unique_ptr<MobileStrategy> mob =
      mobile->honest ? std::make_unique<HonestMobile>(cfg) : mobile->mobile();

  Session session;
  Port term_port(session, Role::kTerminal), mob_port(session, Role::kMobile);
  SessionOutcome out;
  out.authentic = m;

  // Terminal shows the same frame to the User and to the Mobile's camera.
  auto show = [&](const Message& shown) {
    session.deliver(Role::kTerminal, Role::kUser, shown);
    return session.deliver(Role::kTerminal, Role::kMobile, shown);
  };

  switch (method) {
    case Method::kMS1:
    case Method::kMS2: {
      Message content{method == Method::kMS2 ? m : "", "",
                      detail::make_barcodes(ks, m, cfg, server_rng), false};
      Message got = session.deliver(Role::kServer, Role::kTerminal, content);
      Message shown = term->display(got, {method, Step::kServerContent}, term_port, terminal_rng);
      Message captured = show(shown);
      Message mobile_view = session.deliver(
          Role::kMobile, Role::kUser,
          mob->show_capture(captured, km, method, mob_port, mobile_rng));
      std::string why;
      if (!detail::user_checks_cues(shown, cfg, why)) {
        out.note = why;
      } else if (mobile_view.reject) {
        out.note = "mobile rejected the barcode";
      } else if (method == Method::kMS2 && shown.text != mobile_view.text) {
        out.note = "terminal and mobile disagree";
      } else {
        out.accepted = true;
        out.accepted_value = method == Method::kMS2 ? shown.text : mobile_view.text;
      }
      break;
    }
    case Method::kMU1: {
      session.deliver(Role::kUser, Role::kMobile, {m, "", {}, false});
      Message readable = session.deliver(
          Role::kMobile, Role::kUser,
          mob->protect_input({m, "", {}, false}, km, method, mob_port, mobile_rng));
      Message typed = session.deliver(Role::kUser, Role::kTerminal, {readable.text, "", {}, false});
      auto fwd = term->forward(typed, {method, Step::kUserMessage}, term_port, terminal_rng);
      if (!fwd) {
        out.note = "nothing reached the server";
        break;
      }
      Message at_server = session.deliver(Role::kTerminal, Role::kServer, *fwd);
      try {
        out.accepted_value = to_string(unprotect(from_readable(at_server.text), ks));
        out.accepted = true;
      } catch (const Error& e) {
        out.note = e.what();
      }
      break;
    }
    case Method::kMU2: {
      Message typed = session.deliver(Role::kUser, Role::kTerminal, {m, "", {}, false});
      auto fwd = term->forward(typed, {method, Step::kUserMessage}, term_port, terminal_rng);
      if (!fwd) {
        out.note = "nothing reached the server";
        break;
      }
      const std::string received = session.deliver(Role::kTerminal, Role::kServer, *fwd).text;
      std::string code(static_cast<std::size_t>(cfg.mu2_code_bytes), '\0');
      for (auto& c : code) c = static_cast<char>(server_rng() & 0xFF);
      Message content{"", "", detail::make_barcodes(ks, received + code, cfg, server_rng), false};
      Message got = session.deliver(Role::kServer, Role::kTerminal, content);
      Message shown = term->display(got, {method, Step::kServerContent}, term_port, terminal_rng);
      Message captured = show(shown);
      Message mobile_view = session.deliver(
          Role::kMobile, Role::kUser,
          mob->show_capture(captured, km, method, mob_port, mobile_rng));
      std::string why;
      std::optional<Message> confirm;
      if (!detail::user_checks_cues(shown, cfg, why)) {
        out.note = why;
      } else if (mobile_view.reject) {
        out.note = "mobile rejected the barcode";
      } else if (mobile_view.text != m) {
        out.note = "mobile shows a different message";
      } else {
        confirm = session.deliver(Role::kUser, Role::kTerminal, {"", mobile_view.code, {}, false});
      }
      auto code_fwd = term->forward(confirm, {method, Step::kUserCode}, term_port, terminal_rng);
      if (!code_fwd) break;
      const Message at_server = session.deliver(Role::kTerminal, Role::kServer, *code_fwd);
      if (at_server.code == detail::hex_code(code)) {
        out.accepted = true;
        out.accepted_value = received;
        out.note.clear();
      } else if (out.note.empty()) {
        out.note = "wrong code";
      }
      break;
    }
  }
  out.attack_succeeded = out.accepted && out.accepted_value != out.authentic;
  out.transcript = session.take_transcript();
  return out;
}

// --- security evaluation ------------------------------------------------------

struct AdversaryConfig {
  std::optional<std::string> terminal;  // strategy id, absent = honest
  std::optional<std::string> mobile;

  std::string label() const {
    std::string s = terminal.value_or("");
    if (mobile) s += (s.empty() ? "" : "+") + *mobile;
    return s.empty() ? "honest" : s;
  }
};

struct SecurityReport {
  Method method = Method::kMS1;
  int model = 1;
  std::string strategy;
  long trials = 0;
  long successes = 0;
  long accepted = 0;
  double rate = 0;
  std::optional<bool> confidentiality_smoke;  // Model 1 only
  std::uint64_t seed = 0;
};

// What each cell of the methods-by-models summary promises.
struct TableEntry {
  bool confidentiality = false;
  bool authenticity = false;
};

inline TableEntry expected_guarantees(Method method, int model) {
  if (model < 1 || model > 3) throw ConfigError("model must be 1, 2 or 3");
  const bool trusted_mobile_only = method == Method::kMS1 || method == Method::kMU1;
  if (model == 1) return {trusted_mobile_only, true};
  return {false, !trusted_mobile_only};
}

inline void validate_adversary(int model, const AdversaryConfig& adv) {
  switch (model) {
    case 1:
      if (!adv.terminal || adv.mobile)
        throw ConfigError("model 1: the Terminal alone is dishonest");
      break;
    case 2:
      if (adv.terminal.has_value() == adv.mobile.has_value())
        throw ConfigError("model 2: exactly one of Terminal and Mobile is dishonest");
      break;
    case 3:
      if (!adv.terminal || !adv.mobile)
        throw ConfigError("model 3: both Terminal and Mobile are dishonest");
      break;
    default:
      throw ConfigError("model must be 1, 2 or 3");
  }
}

namespace detail {

inline bool contains_window(const std::string& hay, const std::string& plain, std::size_t w) {
  if (plain.size() < w) return false;
  for (std::size_t i = 0; i + w <= plain.size(); ++i)
    if (hay.find(plain.substr(i, w)) != std::string::npos) return true;
  return false;
}

// Everything the Terminal could read off its traffic without the key:
// typed and shown text, the Base32 decoding of it, and the barcode bits
// read under the identity codebook.
inline std::string terminal_view(const std::vector<TranscriptEntry>& transcript) {
  std::string seen;
  for (const auto& e : transcript) {
    if (e.edge.from != Role::kTerminal && e.edge.to != Role::kTerminal) continue;
    seen += e.message.text + '\n' + e.message.code + '\n';
    try {
      seen += to_string(base32_decode(e.message.text)) + '\n';
    } catch (const DecodeError&) {
    }
    for (const auto& b : e.message.barcodes) {
      Extraction ex = extract(barcode_grid(*b), LBlockCodebook::identity(), b->spec);
      seen += to_string(bits_to_bytes(ex.bits)) + '\n';
    }
  }
  return seen;
}

}  // namespace detail

// Runs `trials` independent sessions with fresh keys, messages and nonces.
// Trial i uses derive_seed(seed, i), so the report does not depend on how
// trials are spread over threads.
inline SecurityReport evaluate_security(Method method, int model, const AdversaryConfig& adv,
                                        long trials, std::uint64_t seed,
                                        const ProtocolConfig& cfg = {}, int threads = 0) {
  validate_adversary(model, adv);
  if (trials < 0) throw ConfigError("trials must be non-negative");
  const StrategySet strategies = builtin_strategies(cfg);
  TerminalFactory tf = adv.terminal ? strategies.terminal(*adv.terminal) : TerminalFactory{};
  MobileFactory mf = adv.mobile ? strategies.mobile(*adv.mobile) : MobileFactory{};

  std::vector<std::uint8_t> success(static_cast<std::size_t>(trials)), accepted(success.size()),
      leaked(success.size());
  auto run_range = [&](long begin, long step) {
    for (long i = begin; i < trials; i += step) {
      const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
      Rng rng(derive_seed(s, 0));
      const SessionKey key = keygen(rng());
      const std::string m =
          detail::random_text(rng, static_cast<std::size_t>(cfg.message_bytes));
      std::vector<Party> parties = {
          Party::User(), Party::Server(key),
          mf ? Party::DishonestMobile(key, mf) : Party::Mobile(key),
          tf ? Party::DishonestTerminal(tf) : Party::Terminal()};
      SessionOutcome o = run_method(method, parties, m, s, cfg);
      success[i] = o.attack_succeeded;
      accepted[i] = o.accepted;
      if (model == 1) leaked[i] = detail::contains_window(detail::terminal_view(o.transcript), m, 8);
    }
  };
  int n = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n = static_cast<int>(std::min<long>(n, std::max<long>(1, trials)));
  if (n == 1) {
    run_range(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
      pool.emplace_back([&, t] {
        try {
          run_range(t, n);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  SecurityReport r;
  r.method = method;
  r.model = model;
  r.strategy = adv.label();
  r.trials = trials;
  r.seed = seed;
  for (std::size_t i = 0; i < success.size(); ++i) {
    r.successes += success[i];
    r.accepted += accepted[i];
  }
  r.rate = trials ? static_cast<double>(r.successes) / static_cast<double>(trials) : 0.0;
  if (model == 1)
    r.confidentiality_smoke = std::none_of(leaked.begin(), leaked.end(), [](auto v) { return v; });
  return r;
}

// Every adversary configuration the built-in strategies allow under a model.
inline std::vector<AdversaryConfig> adversaries_for(int model, const ProtocolConfig& cfg = {}) {
  const StrategySet s = builtin_strategies(cfg);
  std::vector<AdversaryConfig> out;
  if (model == 1 || model == 2)
    for (const auto& [t, f] : s.terminals) out.push_back({t, std::nullopt});
  if (model == 2)
    for (const auto& [mname, f] : s.mobiles) out.push_back({std::nullopt, mname});
  if (model == 3)
    for (const auto& [t, tf] : s.terminals)
      for (const auto& [mname, mf] : s.mobiles) out.push_back({t, mname});
  if (out.empty()) throw ConfigError("model must be 1, 2 or 3");
  return out;
}

}  // namespace cuebar::protocol

#endif  // CUEBAR_PROTOCOL_HPP_
