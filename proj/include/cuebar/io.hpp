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

// File formats: JSON for layouts, attacks, manifests and reports, flat
// key=value config files, PPM barcode images.

#ifndef CUEBAR_IO_HPP_
#define CUEBAR_IO_HPP_

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cuebar/arrangement.hpp"
#include "cuebar/barcode.hpp"
#include "cuebar/channel.hpp"
#include "cuebar/common.hpp"
#include "cuebar/protocol.hpp"
#include "cuebar/registration.hpp"

namespace cuebar::io {

using nlohmann::json;

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad JSON: ") + e.what());
  }
}

// Runs `f` and turns JSON type/key errors into FormatError.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad JSON field: ") + e.what());
  }
}

// --- layouts, cues, specs ---------------------------------------------------

inline json layout_to_json(const ArrangementLayout& l) {
  switch (l.kind) {
    case ArrangementLayout::Kind::kTable: return {{"kind", "TABLE"}, {"rows", l.rows}, {"cols", l.cols}};
    case ArrangementLayout::Kind::kLinear: return {{"kind", "LINEAR"}, {"length", l.length}};
    case ArrangementLayout::Kind::kSingle: return {{"kind", "SINGLE"}};
  }
  return {};
}

inline ArrangementLayout layout_from_json(const json& j) {
  return guarded([&] {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "TABLE") return ArrangementLayout::Table(j.at("rows").get<int>(), j.at("cols").get<int>());
    if (kind == "LINEAR") return ArrangementLayout::Linear(j.at("length").get<int>());
    if (kind == "SINGLE") return ArrangementLayout::Single();
    throw FormatError("unknown layout kind '" + kind + "'");
  });
}

inline json symbols_to_json(const SymbolSeq& s) {
  json out = json::array();
  for (const auto& sym : s) out.push_back(sym.name());
  return out;
}

inline SymbolSeq symbols_from_json(const json& j) {
  return guarded([&] {
    SymbolSeq out;
    for (const auto& v : j) out.push_back(Symbol::parse(v.get<std::string>()));
    return out;
  });
}

inline json spec_to_json(const BarcodeSpec& s) {
  return {{"x", s.x}, {"y", s.y}, {"superpixel", s.superpixel}, {"border", s.border}};
}

inline BarcodeSpec spec_from_json(const json& j) {
  return guarded([&] {
    BarcodeSpec s;
    if (j.is_string()) {
      s = BarcodeSpec::parse(j.get<std::string>());
    } else {
      s.x = j.at("x").get<int>();
      s.y = j.at("y").get<int>();
      s.superpixel = j.value("superpixel", s.superpixel);
      s.border = j.value("border", s.border);
    }
    s.validate();
    return s;
  });
}

inline json violation_to_json(const ArrangementCheck& v) {
  if (!v) return {{"status", "OK"}};
  return {{"status", "VIOLATION"}, {"position", v->position}, {"rule", rule_name(v->rule)}};
}

// --- attacks ----------------------------------------------------------------

// {"attack":"REARRANGE","perm":[...]}, {"attack":"ROW_DELETE","row":0,"cols":2},
// {"attack":"CUE_FLIP","block":0,"lblocks":[...]}, {"attack":"SUBSTITUTE","block":1},
// {"attack":"CONTROL_POINT_TAMPER","block":0,"offset":[2,0]}
inline json attack_to_json(const AttackSpec& a) {
  json j{{"attack", attack_name(a.kind)}};
  switch (a.kind) {
    case AttackKind::kRearrange: j["perm"] = a.perm; break;
    case AttackKind::kRowDelete:
    case AttackKind::kRowDuplicate:
      j["row"] = a.row;
      j["cols"] = a.cols;
      break;
    case AttackKind::kCueFlip:
      j["block"] = a.block;
      j["lblocks"] = a.lblocks;
      break;
    case AttackKind::kSubstitute: j["block"] = a.block; break;
    case AttackKind::kControlPointTamper:
      j["block"] = a.block;
      j["offset"] = {a.offset_row, a.offset_col};
      break;
  }
  return j;
}

inline AttackSpec attack_from_json(const json& j) {
  return guarded([&] {
    AttackSpec a;
    a.kind = parse_attack_kind(j.at("attack").get<std::string>());
    a.perm = j.value("perm", std::vector<int>{});
    a.row = j.value("row", 0);
    a.cols = j.value("cols", 1);
    a.block = j.value("block", 0);
    a.lblocks = j.value("lblocks", std::vector<int>{});
    if (j.contains("offset")) {
      const auto off = j.at("offset").get<std::vector<int>>();
      if (off.size() != 2) throw FormatError("offset needs [rows, cols]");
      a.offset_row = off[0];
      a.offset_col = off[1];
    }
    return a;
  });
}

// --- barcode images ---------------------------------------------------------

// Reads a clean (already registered) barcode raster back into colors.
inline BarcodeImage barcode_from_raster(const Raster& r, const BarcodeSpec& spec) {
  if (r.rows() != spec.raster_rows() || r.cols() != spec.raster_cols())
    throw FormatError("image is " + std::to_string(r.rows()) + "x" + std::to_string(r.cols()) +
                      ", spec " + spec.to_string() + " expects " + std::to_string(spec.raster_rows()) +
                      "x" + std::to_string(spec.raster_cols()));
  BarcodeImage img;
  img.spec = spec;
  img.pixels = Grid<Color>(r.rows(), r.cols());
  for (std::size_t i = 0; i < r.data().size(); ++i) {
    const Rgb& p = r.data()[i];
    img.pixels.data()[i] = is_red(p) ? Color::kRed : luminance_bit(p) ? Color::kWhite : Color::kBlack;
  }
  img.control_points = detect_control_points(r);
  return img;
}

// A capture at the barcode's raster size is read as is; anything else goes
// through control-point registration first.
inline Raster normalize_capture(const Raster& capture, const BarcodeSpec& spec) {
  if (capture.rows() == spec.raster_rows() && capture.cols() == spec.raster_cols()) return capture;
  return register_capture(capture, spec);
}

// --- manifest ---------------------------------------------------------------

struct ManifestBlock {
  int index = 0;  // 1-based layout position
  std::string file;
  SymbolSeq cue;
};

struct Manifest {
  ArrangementLayout layout;
  std::vector<ManifestBlock> blocks;
  BarcodeSpec spec;
  std::string key_file;
  std::uint64_t seed = 0;

  void validate() const {
    if (static_cast<int>(blocks.size()) != layout.block_count())
      throw FormatError("manifest has " + std::to_string(blocks.size()) + " blocks, layout needs " +
                        std::to_string(layout.block_count()));
  }
};

inline json manifest_to_json(const Manifest& m) {
  json blocks = json::array();
  for (const auto& b : m.blocks)
    blocks.push_back({{"index", b.index}, {"file", b.file}, {"cue", symbols_to_json(b.cue)}});
  return {{"layout", layout_to_json(m.layout)},
          {"spec", spec_to_json(m.spec)},
          {"key", m.key_file},
          {"seed", m.seed},
          {"blocks", blocks}};
}

// Does not require the block count to match the layout: an attacked
// manifest legitimately has blocks added or removed.
inline Manifest manifest_from_json(const json& j) {
  return guarded([&] {
    Manifest m;
    m.layout = layout_from_json(j.at("layout"));
    m.spec = spec_from_json(j.at("spec"));
    m.key_file = j.value("key", "");
    m.seed = j.value("seed", std::uint64_t{0});
    for (const auto& b : j.at("blocks"))
      m.blocks.push_back({b.at("index").get<int>(), b.at("file").get<std::string>(),
                          symbols_from_json(b.value("cue", json::array()))});
    return m;
  });
}

inline Manifest read_manifest(const std::string& path) {
  return manifest_from_json(parse_json(read_text(path)));
}

inline void write_manifest(const std::string& path, const Manifest& m) {
  write_text(path, manifest_to_json(m).dump(2) + "\n");
}

// Block files are stored relative to the manifest.
inline std::string resolve(const std::string& manifest_path, const std::string& file) {
  const std::filesystem::path f(file);
  if (f.is_absolute()) return file;
  return (std::filesystem::path(manifest_path).parent_path() / f).string();
}

// --- reports ----------------------------------------------------------------

inline json security_report_to_json(const protocol::SecurityReport& r) {
  json j{{"method", protocol::method_name(r.method)},
         {"model", r.model},
         {"strategy", r.strategy},
         {"trials", r.trials},
         {"successes", r.successes},
         {"accepted", r.accepted},
         {"rate", r.rate},
         {"seed", r.seed}};
  if (r.confidentiality_smoke) j["confidentiality_smoke"] = *r.confidentiality_smoke;
  return j;
}

struct DisplacementReport {
  std::vector<double> displacements;
  double mean = 0;
  double max = 0;
  std::vector<long> histogram;  // counts per bin
  double bin_width = 0.1;
};

inline DisplacementReport displacement_report(const std::vector<double>& d, double bin_width = 0.1,
                                              int bins = 20) {
  if (bin_width <= 0 || bins <= 0) throw ConfigError("histogram needs positive bins");
  DisplacementReport r;
  r.displacements = d;
  r.bin_width = bin_width;
  r.histogram.assign(static_cast<std::size_t>(bins), 0);
  for (double v : d) {
    r.mean += v;
    r.max = std::max(r.max, v);
    const int b = std::min(bins - 1, static_cast<int>(v / bin_width));
    ++r.histogram[static_cast<std::size_t>(b)];
  }
  if (!d.empty()) r.mean /= static_cast<double>(d.size());
  return r;
}

inline json displacement_report_to_json(const DisplacementReport& r) {
  return {{"points", r.displacements.size()}, {"mean", r.mean},           {"max", r.max},
          {"bin_width", r.bin_width},         {"histogram", r.histogram}};
}

// --- flat config ------------------------------------------------------------

using Config = std::map<std::string, std::string>;

// key=value per line; blank lines and lines starting with # are skipped.
inline Config parse_config(const std::string& text) {
  Config out;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++n;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("config line " + std::to_string(n) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

inline double config_double(const Config& c, const std::string& key, double fallback) {
  auto it = c.find(key);
  if (it == c.end()) return fallback;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("config key '" + key + "' is not a number");
  }
}

inline std::uint64_t config_u64(const Config& c, const std::string& key, std::uint64_t fallback) {
  auto it = c.find(key);
  if (it == c.end()) return fallback;
  try {
    std::size_t used = 0;
    auto v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("config key '" + key + "' is not an integer");
  }
}

inline const std::vector<std::string>& channel_config_keys() {
  static const std::vector<std::string> keys = {
      "flip_prob", "jitter", "warp.rot_deg", "warp.scale", "warp.t_row", "warp.t_col",
      "seed",      "cell",   "margin"};
  return keys;
}

// Builds a ChannelModel for images of the given size; rotation and scale
// are about the image center.
inline ChannelModel channel_model_from_config(const Config& c, int rows, int cols) {
  for (const auto& [k, v] : c)
    if (std::find(channel_config_keys().begin(), channel_config_keys().end(), k) ==
        channel_config_keys().end())
      throw ConfigError("unknown channel key '" + k + "'");
  ChannelModel m;
  m.flip_prob = config_double(c, "flip_prob", 0.0);
  m.color_jitter = static_cast<int>(config_double(c, "jitter", 0.0));
  m.seed = config_u64(c, "seed", 0);
  m.cell = static_cast<int>(config_u64(c, "cell", 2));
  m.canvas_margin = static_cast<int>(config_u64(c, "margin", 0));
  const Point center{(rows - 1) / 2.0, (cols - 1) / 2.0};
  m.warp = AffineTransform::similarity(config_double(c, "warp.rot_deg", 0.0),
                                       config_double(c, "warp.scale", 1.0), center,
                                       config_double(c, "warp.t_row", 0.0),
                                       config_double(c, "warp.t_col", 0.0));
  m.validate();
  return m;
}

}  // namespace cuebar::io

#endif  // CUEBAR_IO_HPP_
