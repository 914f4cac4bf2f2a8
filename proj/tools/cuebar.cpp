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

// cuebar: encode, transmit, attack, verify and decode cue-bearing barcodes,
// and run protocol simulations.
//
// Exit codes: 0 success, 1 verification or authentication failure,
// 2 usage or input error.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cuebar/arrangement.hpp"
#include "cuebar/barcode.hpp"
#include "cuebar/channel.hpp"
#include "cuebar/io.hpp"
#include "cuebar/keys.hpp"
#include "cuebar/protocol.hpp"
#include "cuebar/registration.hpp"
#include "cuebar/stats.hpp"

namespace fs = std::filesystem;
using cuebar::io::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Options shared by several subcommands.
struct Common {
  std::uint64_t seed = 0;
  std::string spec = "60x42";
  std::string key;
  std::string layout;
  std::string policy = "t_reject=3";
  std::string report;
};

cuebar::ecc::EccPolicy parse_policy(const std::string& s) {
  const std::string prefix = "t_reject=";
  if (s.rfind(prefix, 0) != 0) throw cuebar::ConfigError("policy must look like t_reject=N");
  cuebar::ecc::EccPolicy p;
  try {
    std::size_t used = 0;
    p.t_reject = std::stoi(s.substr(prefix.size()), &used);
    if (used != s.size() - prefix.size()) throw std::invalid_argument(s);
  } catch (const std::logic_error&) {
    throw cuebar::ConfigError("policy must look like t_reject=N");
  }
  p.validate();
  return p;
}

cuebar::BarcodeSpec parse_spec(const std::string& s) {
  auto spec = cuebar::BarcodeSpec::parse(s);
  spec.validate();
  return spec;
}

std::string error_name(const std::exception& e) {
  using namespace cuebar;
#define CUEBAR_NAME(T) \
  if (dynamic_cast<const T*>(&e)) return #T
  CUEBAR_NAME(AuthError);
  CUEBAR_NAME(RejectError);
  CUEBAR_NAME(DecodeError);
  CUEBAR_NAME(LengthError);
  CUEBAR_NAME(FormatError);
  CUEBAR_NAME(FitError);
  CUEBAR_NAME(RangeError);
  CUEBAR_NAME(CapacityError);
  CUEBAR_NAME(TooFewPointsError);
  CUEBAR_NAME(DegenerateError);
  CUEBAR_NAME(CardinalityError);
  CUEBAR_NAME(BoundsError);
  CUEBAR_NAME(ConfigError);
  CUEBAR_NAME(SimulationError);
#undef CUEBAR_NAME
  return "Error";
}

void emit_report(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    cuebar::io::write_text(path, j.dump(2) + "\n");
  }
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    try {
      out.push_back(std::stoi(item));
    } catch (const std::logic_error&) {
      throw cuebar::ConfigError("expected a comma-separated list of integers, got '" + s + "'");
    }
  return out;
}

// --- keygen -----------------------------------------------------------------

int run_keygen(const Common& c, const std::string& out) {
  const cuebar::SessionKey key = cuebar::keygen(c.seed);
  if (out.empty()) {
    std::cout << cuebar::format_key_file(key);
  } else {
    cuebar::io::write_text(out, cuebar::format_key_file(key));
    std::cout << json{{"key", out},
                      {"seed", c.seed},
                      {"codebook", cuebar::codebook_index_for(key.cue_key())}}
                     .dump()
              << "\n";
  }
  return kOk;
}

// --- encode -----------------------------------------------------------------

int run_encode(const Common& c, const std::string& message_file, const std::optional<std::string>& text,
               const std::string& out_dir) {
  const auto spec = parse_spec(c.spec);
  const auto key = cuebar::read_key_file(c.key);
  std::string message;
  if (text) {
    message = *text;
  } else if (!message_file.empty()) {
    message = cuebar::io::read_text(message_file);
  } else {
    throw cuebar::ConfigError("encode needs --in FILE or --text STRING");
  }
  const std::size_t chunk = static_cast<std::size_t>(spec.max_message_bytes());
  if (chunk == 0) throw cuebar::CapacityError("spec " + spec.to_string() + " holds no payload");
  const int needed = std::max<int>(1, static_cast<int>((message.size() + chunk - 1) / chunk));
  const auto layout = c.layout.empty() ? (needed == 1 ? cuebar::ArrangementLayout::Single()
                                                      : cuebar::ArrangementLayout::Linear(needed))
                                       : cuebar::ArrangementLayout::parse(c.layout);
  if (layout.block_count() < needed)
    throw cuebar::CapacityError("message needs " + std::to_string(needed) + " blocks, layout " +
                                layout.spec_string() + " has " + std::to_string(layout.block_count()));

  fs::create_directories(out_dir);
  cuebar::Rng rng(cuebar::derive_seed(c.seed, 0));
  cuebar::io::Manifest m;
  m.layout = layout;
  m.spec = spec;
  m.seed = c.seed;
  m.key_file = fs::absolute(c.key).string();
  for (int i = 1; i <= layout.block_count(); ++i) {
    const std::size_t from = std::min(message.size(), (i - 1) * chunk);
    const std::string part = message.substr(from, chunk);
    const auto cue = cuebar::cue_symbols_for(i, layout);
    const auto img = cuebar::encode_barcode(key, cuebar::to_bytes(part), cue, spec, cuebar::random_block(rng));
    const std::string file = "block_" + std::to_string(i) + ".ppm";
    cuebar::write_ppm((fs::path(out_dir) / file).string(), img.raster());
    m.blocks.push_back({i, file, cue});
  }
  const std::string manifest = (fs::path(out_dir) / "manifest.json").string();
  cuebar::io::write_manifest(manifest, m);
  std::cout << json{{"manifest", manifest}, {"blocks", m.blocks.size()}, {"bytes", message.size()},
                    {"seed", c.seed}}
                   .dump()
            << "\n";
  return kOk;
}

// --- shared image loading ---------------------------------------------------

struct Inputs {
  std::vector<std::string> files;
  cuebar::BarcodeSpec spec;
  cuebar::ArrangementLayout layout;
  std::string key_file;
};

Inputs gather_inputs(const Common& c, const std::string& manifest, const std::vector<std::string>& images) {
  Inputs in;
  if (!manifest.empty()) {
    const auto m = cuebar::io::read_manifest(manifest);
    for (const auto& b : m.blocks) in.files.push_back(cuebar::io::resolve(manifest, b.file));
    in.spec = m.spec;
    in.layout = m.layout;
    in.key_file = m.key_file;
  } else {
    if (images.empty()) throw cuebar::ConfigError("give --manifest or image files");
    in.files = images;
    in.spec = parse_spec(c.spec);
    const int n = static_cast<int>(images.size());
    in.layout = n == 1 ? cuebar::ArrangementLayout::Single() : cuebar::ArrangementLayout::Linear(n);
  }
  if (!c.layout.empty()) in.layout = cuebar::ArrangementLayout::parse(c.layout);
  if (!c.key.empty()) in.key_file = c.key;
  return in;
}

json cue_json(const std::optional<cuebar::SymbolSeq>& s) {
  return s ? cuebar::io::symbols_to_json(*s) : json(nullptr);
}

// Observed cues for every file. Unreadable cues are nullopt.
std::vector<std::optional<cuebar::SymbolSeq>> observe_cues(const Inputs& in, json& blocks) {
  std::vector<std::optional<cuebar::SymbolSeq>> cues;
  for (std::size_t i = 0; i < in.files.size(); ++i) {
    json b{{"position", i + 1}, {"file", in.files[i]}};
    std::optional<cuebar::SymbolSeq> cue;
    try {
      const auto r = cuebar::io::normalize_capture(cuebar::read_ppm(in.files[i]), in.spec);
      cue = cuebar::read_cue(cuebar::observed_cue(cuebar::read_superpixels(r, in.spec), in.spec));
    } catch (const cuebar::Error& e) {
      b["error"] = error_name(e);
      b["detail"] = e.what();
    }
    b["observed_cue"] = cue_json(cue);
    blocks.push_back(b);
    cues.push_back(cue);
  }
  return cues;
}

json check_arrangement(const std::vector<std::optional<cuebar::SymbolSeq>>& cues,
                       const cuebar::ArrangementLayout& layout) {
  std::vector<cuebar::SymbolSeq> seen;
  for (std::size_t i = 0; i < cues.size(); ++i) {
    if (!cues[i]) return {{"status", "VIOLATION"}, {"position", i + 1}, {"rule", "UNREADABLE"}};
    seen.push_back(*cues[i]);
  }
  return cuebar::io::violation_to_json(cuebar::verify_arrangement(seen, layout));
}

// --- decode -----------------------------------------------------------------

int run_decode(const Common& c, const std::string& manifest, const std::vector<std::string>& images,
               const std::string& out) {
  const Inputs in = gather_inputs(c, manifest, images);
  if (in.key_file.empty()) throw cuebar::ConfigError("decode needs --key");
  const auto key = cuebar::read_key_file(in.key_file);
  const auto policy = parse_policy(c.policy);

  json report{{"spec", in.spec.to_string()}, {"layout", cuebar::io::layout_to_json(in.layout)}};
  json blocks = json::array();
  std::vector<std::optional<cuebar::SymbolSeq>> cues;
  std::string message;
  std::string first_error;
  for (std::size_t i = 0; i < in.files.size(); ++i) {
    json b{{"position", i + 1}, {"file", in.files[i]}};
    std::optional<cuebar::SymbolSeq> cue;
    try {
      const auto r = cuebar::io::normalize_capture(cuebar::read_ppm(in.files[i]), in.spec);
      const auto grid = cuebar::read_superpixels(r, in.spec);
      cue = cuebar::read_cue(cuebar::observed_cue(grid, in.spec));
      const auto d = cuebar::decode_grid(grid, key, policy, in.spec);
      message += cuebar::to_string(d.message);
      b["status"] = "OK";
      b["corrected"] = d.corrected;
      b["bytes"] = d.message.size();
    } catch (const cuebar::Error& e) {
      b["status"] = error_name(e);
      b["detail"] = e.what();
      if (first_error.empty()) first_error = error_name(e);
    }
    b["observed_cue"] = cue_json(cue);
    cues.push_back(cue);
    blocks.push_back(b);
  }
  report["blocks"] = blocks;
  report["arrangement"] = check_arrangement(cues, in.layout);
  const bool arranged = report["arrangement"]["status"] == "OK";
  report["status"] = !first_error.empty() ? first_error : arranged ? "OK" : "VIOLATION";
  const bool ok = report["status"] == "OK";
  if (ok) {
    if (out.empty()) {
      std::cout << message;
    } else {
      cuebar::io::write_text(out, message);
    }
  }
  if (c.report.empty()) {
    std::cerr << report.dump(2) << "\n";
  } else {
    cuebar::io::write_text(c.report, report.dump(2) + "\n");
  }
  return ok ? kOk : kFailed;
}

// --- verify-arrangement -----------------------------------------------------

int run_verify(const Common& c, const std::string& manifest, const std::vector<std::string>& images,
               const std::string& cues_file) {
  const Inputs in = gather_inputs(c, manifest, images);
  json report{{"layout", cuebar::io::layout_to_json(in.layout)}};
  std::vector<std::optional<cuebar::SymbolSeq>> cues;
  if (!cues_file.empty()) {
    const json j = cuebar::io::parse_json(cuebar::io::read_text(cues_file));
    if (!j.is_array()) throw cuebar::FormatError("cues file must be a JSON array of symbol arrays");
    for (const auto& s : j) cues.push_back(cuebar::io::symbols_from_json(s));
  } else {
    json blocks = json::array();
    cues = observe_cues(in, blocks);
    report["blocks"] = blocks;
  }
  const json verdict = check_arrangement(cues, in.layout);
  report.update(verdict);
  emit_report(report, c.report);
  return verdict["status"] == "OK" ? kOk : kFailed;
}

// --- channel ----------------------------------------------------------------

struct ChannelFlags {
  std::map<std::string, std::string> values;  // config key -> flag value
  std::string config;
  std::string in;
  std::string out;
  std::string manifest;
  std::string out_dir;
};

cuebar::ChannelModel channel_model(const ChannelFlags& f, const Common& c, std::uint64_t stream, int rows,
                                   int cols) {
  cuebar::io::Config cfg;
  for (const auto& [k, v] : f.values)
    if (!v.empty()) cfg[k] = v;
  cfg["seed"] = std::to_string(cuebar::derive_seed(c.seed, stream));
  return cuebar::io::channel_model_from_config(cfg, rows, cols);
}

int run_channel(const Common& c, const ChannelFlags& f) {
  json report{{"seed", c.seed}};
  auto one = [&](const std::string& from, const std::string& to, std::uint64_t stream) {
    const auto raster = cuebar::read_ppm(from);
    const auto model = channel_model(f, c, stream, raster.rows(), raster.cols());
    cuebar::TransmitStats st;
    cuebar::write_ppm(to, cuebar::transmit(raster, model, &st));
    return json{{"in", from}, {"out", to}, {"cells", st.cells}, {"flipped", st.flipped}};
  };
  if (!f.manifest.empty()) {
    if (f.out_dir.empty()) throw cuebar::ConfigError("channel --manifest needs --out-dir");
    fs::create_directories(f.out_dir);
    auto m = cuebar::io::read_manifest(f.manifest);
    json files = json::array();
    for (std::size_t i = 0; i < m.blocks.size(); ++i) {
      const std::string src = cuebar::io::resolve(f.manifest, m.blocks[i].file);
      const std::string name = fs::path(m.blocks[i].file).filename().string();
      files.push_back(one(src, (fs::path(f.out_dir) / name).string(), i));
      m.blocks[i].file = name;
    }
    const std::string out_manifest = (fs::path(f.out_dir) / "manifest.json").string();
    cuebar::io::write_manifest(out_manifest, m);
    report["manifest"] = out_manifest;
    report["files"] = files;
  } else {
    if (f.in.empty() || f.out.empty()) throw cuebar::ConfigError("channel needs --in and --out, or --manifest");
    report["files"] = json::array({one(f.in, f.out, 0)});
  }
  emit_report(report, c.report);
  return kOk;
}

// --- attack -----------------------------------------------------------------

struct AttackFlags {
  std::string manifest;
  std::string out_dir;
  std::string attack_json;
  std::string type;
  std::string perm;
  int row = 0;
  int cols = 0;
  int block = 0;
  std::string lblocks;
  std::string offset;
  std::string replacement;
};

int run_attack(const Common& c, const AttackFlags& f) {
  cuebar::AttackSpec spec;
  bool cols_given = f.cols > 0;
  if (!f.attack_json.empty()) {
    const std::string text =
        f.attack_json.front() == '{' ? f.attack_json : cuebar::io::read_text(f.attack_json);
    const json j = cuebar::io::parse_json(text);
    spec = cuebar::io::attack_from_json(j);
    cols_given = cols_given || j.contains("cols");
  } else if (!f.type.empty()) {
    spec.kind = cuebar::parse_attack_kind(f.type);
  } else {
    throw cuebar::ConfigError("attack needs --attack JSON or --type");
  }
  if (!f.perm.empty()) spec.perm = parse_int_list(f.perm);
  if (!f.lblocks.empty()) spec.lblocks = parse_int_list(f.lblocks);
  if (f.row) spec.row = f.row;
  if (f.block) spec.block = f.block;
  if (!f.offset.empty()) {
    const auto off = parse_int_list(f.offset);
    if (off.size() != 2) throw cuebar::ConfigError("--offset needs ROWS,COLS");
    spec.offset_row = off[0];
    spec.offset_col = off[1];
  }

  const auto m = cuebar::io::read_manifest(f.manifest);
  if (f.cols) {
    spec.cols = f.cols;
  } else if (!cols_given) {
    spec.cols = m.layout.kind == cuebar::ArrangementLayout::Kind::kTable ? m.layout.cols : 1;
  }
  if (spec.kind == cuebar::AttackKind::kSubstitute) {
    if (f.replacement.empty()) throw cuebar::ConfigError("SUBSTITUTE needs --replacement FILE");
    spec.replacement = cuebar::io::barcode_from_raster(
        cuebar::io::normalize_capture(cuebar::read_ppm(f.replacement), m.spec), m.spec);
  }

  std::vector<cuebar::BarcodeImage> blocks;
  for (const auto& b : m.blocks)
    blocks.push_back(cuebar::io::barcode_from_raster(
        cuebar::io::normalize_capture(cuebar::read_ppm(cuebar::io::resolve(f.manifest, b.file)), m.spec),
        m.spec));
  // Tag each block with its source position so the new manifest can say
  // where every block came from.
  std::vector<cuebar::BarcodeImage> tagged = blocks;
  for (std::size_t i = 0; i < tagged.size(); ++i) tagged[i].control_points.push_back({-1.0, double(i)});
  if (spec.replacement) spec.replacement->control_points.push_back({-1.0, -1.0});
  const auto attacked = cuebar::apply_attack(tagged, spec);

  fs::create_directories(f.out_dir);
  cuebar::io::Manifest out = m;
  out.blocks.clear();
  json sources = json::array();
  for (std::size_t i = 0; i < attacked.size(); ++i) {
    cuebar::BarcodeImage img = attacked[i];
    const int src = static_cast<int>(img.control_points.back().col);
    img.control_points.pop_back();
    const std::string file = "block_" + std::to_string(i + 1) + ".ppm";
    cuebar::write_ppm((fs::path(f.out_dir) / file).string(), img.raster());
    const cuebar::SymbolSeq cue = src >= 0 ? m.blocks[src].cue : cuebar::SymbolSeq{};
    out.blocks.push_back({src >= 0 ? m.blocks[src].index : 0, file, cue});
    sources.push_back(src >= 0 ? json(m.blocks[src].index) : json("replacement"));
  }
  const std::string out_manifest = (fs::path(f.out_dir) / "manifest.json").string();
  cuebar::io::write_manifest(out_manifest, out);
  emit_report({{"attack", cuebar::io::attack_to_json(spec)},
               {"manifest", out_manifest},
               {"sources", sources},
               {"seed", c.seed}},
              c.report);
  return kOk;
}

// --- simulate ---------------------------------------------------------------

struct SimulateFlags {
  std::string method = "MS1";
  int model = 1;
  std::string terminal;
  std::string mobile;
  long trials = 1000;
  int threads = 0;
  int message_bytes = 80;
  bool no_cue_check = false;
};

int run_simulate(const Common& c, const SimulateFlags& f, bool spec_given) {
  namespace p = cuebar::protocol;
  p::ProtocolConfig cfg;
  cfg.spec = spec_given ? parse_spec(c.spec) : cuebar::BarcodeSpec{30, 42};
  cfg.policy = parse_policy(c.policy);
  cfg.verify_cues = !f.no_cue_check;
  cfg.message_bytes = f.message_bytes;
  const p::Method method = p::parse_method(f.method);
  std::vector<p::AdversaryConfig> advs;
  if (f.terminal.empty() && f.mobile.empty()) {
    advs = p::adversaries_for(f.model, cfg);
  } else {
    p::AdversaryConfig a;
    if (!f.terminal.empty()) a.terminal = f.terminal;
    if (!f.mobile.empty()) a.mobile = f.mobile;
    advs.push_back(a);
  }
  json reports = json::array();
  for (const auto& a : advs)
    reports.push_back(cuebar::io::security_report_to_json(
        p::evaluate_security(method, f.model, a, f.trials, c.seed, cfg, f.threads)));
  emit_report(reports.size() == 1 ? reports[0] : reports, c.report);
  return kOk;
}

// --- stats ------------------------------------------------------------------

int run_stats(const Common& c, const std::string& kind, long trials, double flip_prob,
              const cuebar::stats::WarpRange& w) {
  const auto spec = parse_spec(c.spec);
  cuebar::Rng rng(cuebar::derive_seed(c.seed, 0));
  const auto key = cuebar::keygen(rng());
  json report{{"kind", kind}, {"trials", trials}, {"spec", spec.to_string()}, {"seed", c.seed}};
  auto frame = [&](cuebar::Rng& r) {
    const auto msg = cuebar::random_bytes(r, static_cast<std::size_t>(spec.max_message_bytes()));
    return cuebar::encode_barcode(key, msg, {cuebar::Symbol::Single()}, spec, cuebar::random_block(r));
  };
  if (kind == "displacement") {
    std::vector<double> all;
    for (long t = 0; t < trials; ++t) {
      cuebar::Rng r(cuebar::derive_seed(c.seed, static_cast<std::uint64_t>(t) + 1));
      const auto d = cuebar::stats::displacement_trial(frame(r), w, r);
      all.insert(all.end(), d.begin(), d.end());
    }
    report["displacement"] = cuebar::io::displacement_report_to_json(cuebar::io::displacement_report(all));
    report["point_sigma"] = w.point_sigma;
    report["max_rot_deg"] = w.max_rot_deg;
    report["scale"] = {w.min_scale, w.max_scale};
  } else if (kind == "error-rate") {
    std::vector<double> rates;
    double sum = 0;
    for (long t = 0; t < trials; ++t) {
      cuebar::Rng r(cuebar::derive_seed(c.seed, static_cast<std::uint64_t>(t) + 1));
      rates.push_back(cuebar::stats::error_rate_trial(frame(r), flip_prob, r()));
      sum += rates.back();
    }
    report["flip_prob"] = flip_prob;
    report["mean_error_rate"] = trials ? sum / static_cast<double>(trials) : 0.0;
    report["per_trial"] = rates;
  } else {
    throw cuebar::ConfigError("stats kind must be displacement or error-rate");
  }
  emit_report(report, c.report);
  return kOk;
}

// --- config file ------------------------------------------------------------

// Config keys and the flag each one stands for.
const std::map<std::string, std::string>& config_flags() {
  static const std::map<std::string, std::string> m = {
      {"seed", "--seed"},         {"spec", "--spec"},          {"key", "--key"},
      {"layout", "--layout"},     {"policy", "--policy"},      {"t_reject", "--policy"},
      {"report", "--report"},     {"trials", "--trials"},      {"method", "--method"},
      {"model", "--model"},       {"flip_prob", "--flip-prob"}, {"jitter", "--jitter"},
      {"warp.rot_deg", "--rot-deg"}, {"warp.scale", "--scale"}, {"warp.t_row", "--t-row"},
      {"warp.t_col", "--t-col"},  {"margin", "--margin"},      {"cell", "--cell"},
  };
  return m;
}

// Appends config values as flags for options the command line left unset,
// so explicit flags win.
std::vector<std::string> apply_config(std::vector<std::string> args, CLI::App& app) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || it + 1 == args.end()) return args;
  const std::string path = *(it + 1);
  args.erase(it, it + 2);
  const auto cfg = cuebar::io::parse_config(cuebar::io::read_text(path));
  CLI::App* sub = nullptr;
  for (const auto& a : args)
    if (auto* s = app.get_subcommand_no_throw(a); s) {
      sub = s;
      break;
    }
  if (!sub) return args;
  for (const auto& [k, v] : cfg) {
    auto f = config_flags().find(k);
    if (f == config_flags().end()) throw cuebar::ConfigError("unknown config key '" + k + "'");
    if (!sub->get_option_no_throw(f->second)) continue;
    if (std::find(args.begin(), args.end(), f->second) != args.end()) continue;
    args.push_back(f->second);
    args.push_back(k == "t_reject" ? "t_reject=" + v : v);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cuebar: authenticated 2D barcodes with visual cues"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common c;
  auto add_common = [&](CLI::App* s, bool key, bool spec, bool layout, bool policy) {
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--report", c.report, "write the JSON report here instead of stdout");
    s->add_option("--config", "flat key=value file; flags override it");
    if (key) s->add_option("--key", c.key, "session key file");
    if (spec) s->add_option("--spec", c.spec, "barcode message matrix XxY");
    if (layout) s->add_option("--layout", c.layout, "single, linear:N or table:RxC");
    if (policy) s->add_option("--policy", c.policy, "ECC policy, t_reject=N");
  };

  auto* keygen = app.add_subcommand("keygen", "derive a session key from --seed");
  std::string key_out;
  add_common(keygen, false, false, false, false);
  keygen->add_option("--out", key_out, "key file to write (stdout if absent)");

  auto* encode = app.add_subcommand("encode", "message -> barcode PPMs + manifest");
  std::string enc_in, enc_out = "out";
  std::optional<std::string> enc_text;
  add_common(encode, true, true, true, false);
  encode->add_option("--in", enc_in, "message file");
  encode->add_option("--text", enc_text, "message given inline");
  encode->add_option("--out-dir", enc_out, "directory for blocks and manifest.json");

  auto* decode = app.add_subcommand("decode", "barcode images -> message + cue report");
  std::string dec_manifest, dec_out;
  std::vector<std::string> dec_images;
  add_common(decode, true, true, true, true);
  decode->add_option("--manifest", dec_manifest, "manifest listing blocks in display order");
  decode->add_option("--out", dec_out, "message file to write (stdout if absent)");
  decode->add_option("images", dec_images, "barcode images in display order");

  auto* verify = app.add_subcommand("verify-arrangement", "check observed cues against the layout");
  std::string ver_manifest, ver_cues;
  std::vector<std::string> ver_images;
  add_common(verify, false, true, true, false);
  verify->add_option("--manifest", ver_manifest, "manifest listing blocks in display order");
  verify->add_option("--cues", ver_cues, "JSON array of observed symbol arrays");
  verify->add_option("images", ver_images, "barcode images in display order");

  auto* channel = app.add_subcommand("channel", "simulate display-to-camera capture");
  ChannelFlags ch;
  add_common(channel, false, false, false, false);
  for (const auto& [key, flag] : std::vector<std::pair<std::string, std::string>>{
           {"flip_prob", "--flip-prob"}, {"jitter", "--jitter"}, {"warp.rot_deg", "--rot-deg"},
           {"warp.scale", "--scale"}, {"warp.t_row", "--t-row"}, {"warp.t_col", "--t-col"},
           {"margin", "--margin"}, {"cell", "--cell"}})
    channel->add_option(flag, ch.values[key], key);
  channel->add_option("--in", ch.in, "input PPM");
  channel->add_option("--out", ch.out, "output PPM");
  channel->add_option("--manifest", ch.manifest, "transmit every block of a manifest");
  channel->add_option("--out-dir", ch.out_dir, "output directory for --manifest");

  auto* attack = app.add_subcommand("attack", "apply an attack to a manifest's blocks");
  AttackFlags af;
  add_common(attack, false, false, false, false);
  attack->add_option("--manifest", af.manifest, "source manifest")->required();
  attack->add_option("--out-dir", af.out_dir, "directory for attacked blocks")->required();
  attack->add_option("--attack", af.attack_json, "attack JSON, inline or a file");
  attack->add_option("--type", af.type, "REARRANGE, ROW_DELETE, ROW_DUPLICATE, CUE_FLIP, SUBSTITUTE, "
                                        "CONTROL_POINT_TAMPER");
  attack->add_option("--perm", af.perm, "REARRANGE: new order, e.g. 1,0,2");
  attack->add_option("--row", af.row, "row for row attacks");
  attack->add_option("--cols", af.cols, "table width for row attacks");
  attack->add_option("--block", af.block, "0-based target block");
  attack->add_option("--lblocks", af.lblocks, "CUE_FLIP: L-block indices");
  attack->add_option("--offset", af.offset, "CONTROL_POINT_TAMPER: ROWS,COLS");
  attack->add_option("--replacement", af.replacement, "SUBSTITUTE: replacement PPM");

  auto* simulate = app.add_subcommand("simulate", "protocol security evaluation");
  SimulateFlags sf;
  add_common(simulate, false, true, false, true);
  simulate->add_option("--method", sf.method, "MS1, MS2, MU1 or MU2");
  simulate->add_option("--model", sf.model, "trust model 1, 2 or 3");
  simulate->add_option("--terminal", sf.terminal, "dishonest terminal strategy");
  simulate->add_option("--mobile", sf.mobile, "dishonest mobile strategy");
  simulate->add_option("--trials", sf.trials, "sessions to run");
  simulate->add_option("--threads", sf.threads, "worker threads (0 = all cores)");
  simulate->add_option("--message-bytes", sf.message_bytes, "length of the authentic message");
  simulate->add_flag("--no-cue-check", sf.no_cue_check, "user skips the arrangement check");

  auto* capacity = app.add_subcommand("capacity", "payload bits for a number of display pixels");
  std::int64_t pixels = 0;
  capacity->add_option("--pixels", pixels, "display pixels")->required();

  auto* stats = app.add_subcommand("stats", "displacement or superpixel error-rate reports");
  std::string stats_kind = "displacement";
  long stats_trials = 100;
  double stats_flip = 0.0;
  cuebar::stats::WarpRange w;
  add_common(stats, false, true, false, false);
  stats->add_option("kind", stats_kind, "displacement or error-rate");
  stats->add_option("--trials", stats_trials, "frames");
  stats->add_option("--flip-prob", stats_flip, "error-rate: per-superpixel flip probability");
  stats->add_option("--max-rot", w.max_rot_deg, "displacement: max rotation, degrees");
  stats->add_option("--min-scale", w.min_scale, "displacement: min scale");
  stats->add_option("--max-scale", w.max_scale, "displacement: max scale");
  stats->add_option("--sigma", w.point_sigma, "displacement: landmark jitter, pixels");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config(args, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const cuebar::Error& e) {
    std::cerr << "cuebar: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*keygen) return run_keygen(c, key_out);
    if (*encode) return run_encode(c, enc_in, enc_text, enc_out);
    if (*decode) return run_decode(c, dec_manifest, dec_images, dec_out);
    if (*verify) return run_verify(c, ver_manifest, ver_images, ver_cues);
    if (*channel) return run_channel(c, ch);
    if (*attack) return run_attack(c, af);
    if (*simulate) return run_simulate(c, sf, simulate->count("--spec") > 0);
    if (*capacity) {
      std::cout << cuebar::capacity(pixels) << "\n";
      return kOk;
    }
    if (*stats) return run_stats(c, stats_kind, stats_trials, stats_flip, w);
  } catch (const cuebar::Error& e) {
    std::cerr << "cuebar: " << error_name(e) << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "cuebar: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
