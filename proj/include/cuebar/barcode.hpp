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

// The full barcode pipeline: Encrypt-then-MAC, BCH stream, L-block cue
// embedding, superpixel rasterization and red control points.
//
// Geometry, in barcode pixels (one barcode pixel = superpixel x superpixel
// display pixels):
//
//   +--------------------------- W = y + 2*border ---------------------------+
//   | border ring, white, red control points on the line border/2 in         |
//   |   +------------------- interior: 3x/2 rows x y cols ---------------+   |
//   |   | 3x2 cells, row-major; each holds L-block A {(0,0),(0,1),(1,0)} |   |
//   |   | and L-block B {(1,1),(2,0),(2,1)}. Message pair i lives in     |   |
//   |   | cell i/2, block A for even i, B for odd i. Cue pixel (r, c)    |   |
//   |   | governs pair r*y + c, so the cue appears upright.              |   |
//   |   +----------------------------------------------------------------+   |
//   +------------------------------------------------------------------------+

#ifndef CUEBAR_BARCODE_HPP_
#define CUEBAR_BARCODE_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cuebar/common.hpp"
#include "cuebar/ecc.hpp"
#include "cuebar/glyphs.hpp"
#include "cuebar/image.hpp"
#include "cuebar/keys.hpp"
#include "cuebar/lblock.hpp"
#include "cuebar/payload.hpp"

namespace cuebar {

struct Point {
  double row = 0;
  double col = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct BarcodeSpec {
  int x = 60;          // message-matrix rows (even)
  int y = 42;          // message-matrix columns (even, for the 3x2 tiling)
  int superpixel = 2;  // display pixels per barcode pixel, per axis
  int border = 4;      // control-point margin, barcode pixels

  void validate() const {
    if (x <= 0 || y <= 0) throw FormatError("barcode spec: dimensions must be positive");
    if (x % 2 != 0) throw FormatError("barcode spec: x must be even");
    if (y % 2 != 0) throw FormatError("barcode spec: y must be even for the 3x2 L-block tiling");
    if (x * y < ecc::kN) throw FormatError("barcode spec: fewer bits than one codeword");
    if (superpixel < 1) throw FormatError("barcode spec: superpixel must be >= 1");
    if (border < 2) throw FormatError("barcode spec: border must be >= 2");
  }

  int message_bits() const { return x * y; }
  int pairs() const { return x * y / 2; }
  int cue_rows() const { return x / 2; }
  int cue_cols() const { return y; }
  int interior_rows() const { return 3 * x / 2; }
  int interior_cols() const { return y; }
  int grid_rows() const { return interior_rows() + 2 * border; }  // barcode pixels
  int grid_cols() const { return interior_cols() + 2 * border; }
  int raster_rows() const { return grid_rows() * superpixel; }     // display pixels
  int raster_cols() const { return grid_cols() * superpixel; }
  int stream_bits() const { return message_bits() / ecc::kN * ecc::kN; }

  // Largest plaintext that fits after nonce, tag and stream header.
  int max_message_bytes() const {
    int data_bits = stream_bits() / ecc::kN * ecc::kK - ecc::kHeaderBits;
    return std::max(0, data_bits / 8 - static_cast<int>(kPayloadOverhead));
  }

  std::string to_string() const { return std::to_string(x) + "x" + std::to_string(y); }

  static BarcodeSpec parse(std::string_view s) {
    BarcodeSpec spec;
    auto pos = s.find('x');
    if (pos == std::string_view::npos) throw ConfigError("spec must look like XxY");
    try {
      spec.x = std::stoi(std::string(s.substr(0, pos)));
      spec.y = std::stoi(std::string(s.substr(pos + 1)));
    } catch (const std::logic_error&) {
      throw ConfigError("spec must look like XxY");
    }
    return spec;
  }

  friend bool operator==(const BarcodeSpec&, const BarcodeSpec&) = default;
};

// Idealized payload bits for a block of display pixels: 2x2 superpixels,
// 2 payload bits per 3-pixel L-block, 36 data bits per 63-bit codeword.
// Ignores the border, stream header, nonce and tag.
inline std::int64_t capacity(std::int64_t display_pixels) {
  if (display_pixels < 0) throw RangeError("display_pixels must be non-negative");
  return display_pixels * 2 / 21;  // 1/4 * 2/3 * 36/63 = 2/21
}

struct BarcodeImage {
  Grid<Color> pixels;
  BarcodeSpec spec;
  std::vector<Point> control_points;  // display-pixel centroids, canonical walk order

  Raster raster() const { return to_raster(pixels); }
};

// --- geometry helpers -------------------------------------------------------

struct PixelPos {
  int row = 0;
  int col = 0;
};

// Interior barcode-pixel coordinates of the three pixels of pair i.
inline std::array<PixelPos, 3> lblock_pixels(int pair_index, const BarcodeSpec& spec) {
  const int cell = pair_index / 2;
  const int cells_per_row = spec.y / 2;
  const int r = 3 * (cell / cells_per_row);
  const int c = 2 * (cell % cells_per_row);
  if (pair_index % 2 == 0) return {{{r, c}, {r, c + 1}, {r + 1, c}}};
  return {{{r + 1, c + 1}, {r + 2, c}, {r + 2, c + 1}}};
}

inline std::pair<int, int> cue_position(int pair_index, const BarcodeSpec& spec) {
  return {pair_index / spec.y, pair_index % spec.y};
}

// Control points on the ring border/2 pixels in from the edge, about every
// 8th barcode pixel and at least 4 per edge (corners shared), in the walk
// order top L->R, right T->B, bottom R->L, left B->T.
inline std::vector<PixelPos> control_point_cells(const BarcodeSpec& spec) {
  const int top = spec.border / 2, left = spec.border / 2;
  const int bottom = spec.grid_rows() - 1 - spec.border / 2;
  const int right = spec.grid_cols() - 1 - spec.border / 2;
  auto stops = [](int a, int b) {
    const int len = b - a;
    const int n = std::max(3, (len + 7) / 8);
    std::vector<int> out;
    for (int k = 0; k <= n; ++k)
      out.push_back(a + static_cast<int>(std::lround(static_cast<double>(k) * len / n)));
    return out;
  };
  std::vector<PixelPos> pts;
  const auto hs = stops(left, right);
  const auto vs = stops(top, bottom);
  for (int c : hs) pts.push_back({top, c});
  for (std::size_t k = 1; k < vs.size(); ++k) pts.push_back({vs[k], right});
  for (std::size_t k = hs.size() - 1; k-- > 0;) pts.push_back({bottom, hs[k]});
  for (std::size_t k = vs.size() - 1; k-- > 1;) pts.push_back({vs[k], left});
  return pts;
}

inline Point cell_center(const PixelPos& p, int superpixel) {
  const double half = (superpixel - 1) / 2.0;
  return {p.row * superpixel + half, p.col * superpixel + half};
}

inline std::vector<Point> reference_control_points(const BarcodeSpec& spec) {
  std::vector<Point> out;
  for (const auto& p : control_point_cells(spec)) out.push_back(cell_center(p, spec.superpixel));
  return out;
}

// --- encoding ---------------------------------------------------------------

// Payload bits m_1 (protect + BCH stream, zero-padded to x*y).
inline BitVec payload_bits(const SessionKey& key, std::span<const std::uint8_t> message,
                           const BarcodeSpec& spec, const Block128& nonce) {
  BitVec stream = ecc::encode_stream(bytes_to_bits(serialize(protect(message, key, nonce))));
  if (stream.size() > static_cast<std::size_t>(spec.stream_bits()))
    throw CapacityError("message of " + std::to_string(message.size()) +
                        " bytes needs " + std::to_string(stream.size()) +
                        " coded bits; spec " + spec.to_string() + " holds " +
                        std::to_string(spec.stream_bits()));
  stream.resize(spec.message_bits(), 0);
  return stream;
}

// Barcode-pixel grid (border included) from payload bits and a cue.
inline Bitmap embed(const BitVec& m1, const CueImage& cue, const LBlockCodebook& cb,
                    const BarcodeSpec& spec) {
  Bitmap grid(spec.grid_rows(), spec.grid_cols(), 1);
  for (int i = 0; i < spec.pairs(); ++i) {
    const int pair = m1[2 * i] << 1 | m1[2 * i + 1];
    const auto [cr, cc] = cue_position(i, spec);
    const LBlock blk = encode_pair(pair, cue(cr, cc), cb);
    const auto px = lblock_pixels(i, spec);
    const std::array<std::uint8_t, 3> vals = {blk.p1, blk.p2, blk.p3};
    for (int k = 0; k < 3; ++k) grid(spec.border + px[k].row, spec.border + px[k].col) = vals[k];
  }
  return grid;
}

inline BarcodeImage rasterize(const Bitmap& grid, const BarcodeSpec& spec) {
  BarcodeImage img;
  img.spec = spec;
  const int s = spec.superpixel;
  img.pixels = Grid<Color>(spec.raster_rows(), spec.raster_cols(), Color::kWhite);
  for (int r = 0; r < spec.grid_rows(); ++r)
    for (int c = 0; c < spec.grid_cols(); ++c) {
      const Color col = grid(r, c) ? Color::kWhite : Color::kBlack;
      for (int dr = 0; dr < s; ++dr)
        for (int dc = 0; dc < s; ++dc) img.pixels(r * s + dr, c * s + dc) = col;
    }
  for (const auto& p : control_point_cells(spec)) {
    for (int dr = 0; dr < s; ++dr)
      for (int dc = 0; dc < s; ++dc) img.pixels(p.row * s + dr, p.col * s + dc) = Color::kRed;
  }
  img.control_points = reference_control_points(spec);
  return img;
}

inline BarcodeImage encode_barcode(const SessionKey& key, std::span<const std::uint8_t> message,
                                   const SymbolSeq& symbols, const BarcodeSpec& spec,
                                   const Block128& nonce, const GlyphSet& glyphs = default_glyphs()) {
  spec.validate();
  const CueImage cue = render_cue(symbols, spec.cue_rows(), spec.cue_cols(), glyphs);
  const BitVec m1 = payload_bits(key, message, spec, nonce);
  return rasterize(embed(m1, cue, derive_codebook(key.cue_key()), spec), spec);
}

// --- decoding ---------------------------------------------------------------

// Majority of the non-red pixels in each superpixel; ties go to black.
inline Bitmap read_superpixels(const Raster& raster, const BarcodeSpec& spec) {
  if (raster.rows() != spec.raster_rows() || raster.cols() != spec.raster_cols())
    throw FormatError("raster is " + std::to_string(raster.rows()) + "x" +
                      std::to_string(raster.cols()) + ", spec expects " +
                      std::to_string(spec.raster_rows()) + "x" + std::to_string(spec.raster_cols()));
  const int s = spec.superpixel;
  Bitmap out(spec.grid_rows(), spec.grid_cols());
  for (int r = 0; r < spec.grid_rows(); ++r)
    for (int c = 0; c < spec.grid_cols(); ++c) {
      int white = 0, black = 0;
      for (int dr = 0; dr < s; ++dr)
        for (int dc = 0; dc < s; ++dc) {
          const Rgb& p = raster(r * s + dr, c * s + dc);
          if (is_red(p)) continue;
          (luminance_bit(p) ? white : black)++;
        }
      out(r, c) = white > black ? 1 : 0;
    }
  return out;
}

inline LBlock read_lblock(const Bitmap& grid, int pair_index, const BarcodeSpec& spec) {
  const auto px = lblock_pixels(pair_index, spec);
  return {grid(spec.border + px[0].row, spec.border + px[0].col),
          grid(spec.border + px[1].row, spec.border + px[1].col),
          grid(spec.border + px[2].row, spec.border + px[2].col)};
}

// The cue as a human sees it: each L-block's majority brightness. Needs no
// key.
inline CueImage observed_cue(const Bitmap& grid, const BarcodeSpec& spec) {
  CueImage cue(spec.cue_rows(), spec.cue_cols());
  for (int i = 0; i < spec.pairs(); ++i) {
    const auto [cr, cc] = cue_position(i, spec);
    cue(cr, cc) = read_lblock(grid, i, spec).white() ? 1 : 0;
  }
  return cue;
}

struct Extraction {
  BitVec bits;  // m_1 as read, x*y bits
  CueImage cue;
};

inline Extraction extract(const Bitmap& grid, const LBlockCodebook& cb, const BarcodeSpec& spec) {
  Extraction out{BitVec(spec.message_bits()), CueImage(spec.cue_rows(), spec.cue_cols())};
  for (int i = 0; i < spec.pairs(); ++i) {
    const DecodedPair d = decode_pair(read_lblock(grid, i, spec), cb);
    out.bits[2 * i] = static_cast<std::uint8_t>(d.pair >> 1);
    out.bits[2 * i + 1] = static_cast<std::uint8_t>(d.pair & 1);
    const auto [cr, cc] = cue_position(i, spec);
    out.cue(cr, cc) = static_cast<std::uint8_t>(d.cue);
  }
  return out;
}

struct DecodedBarcode {
  Bytes message;
  CueImage cue;
  int corrected = 0;
};

// Everything after the raster: ECC under the policy (all codewords, padding
// included, and the sub-codeword tail must be zero), MAC check, decryption.
inline DecodedBarcode decode_grid(const Bitmap& grid, const SessionKey& key,
                                  const ecc::EccPolicy& policy, const BarcodeSpec& spec) {
  Extraction ex = extract(grid, derive_codebook(key.cue_key()), spec);
  const std::size_t coded = static_cast<std::size_t>(spec.stream_bits());
  for (std::size_t i = coded; i < ex.bits.size(); ++i)
    if (ex.bits[i]) throw RejectError("non-zero bits after the last codeword");
  ecc::StreamDecode sd =
      ecc::decode_stream_detailed(std::span<const std::uint8_t>(ex.bits).first(coded), policy);
  if (sd.bits.size() % 8 != 0) throw FormatError("payload is not a whole number of bytes");
  ProtectedPayload p;
  try {
    p = deserialize(bits_to_bytes(sd.bits));
  } catch (const DecodeError& e) {
    throw FormatError(e.what());
  }
  return {unprotect(p, key), std::move(ex.cue), sd.corrected};
}

inline DecodedBarcode decode_barcode(const Raster& raster, const SessionKey& key,
                                     const ecc::EccPolicy& policy, const BarcodeSpec& spec) {
  spec.validate();
  return decode_grid(read_superpixels(raster, spec), key, policy, spec);
}

inline Bitmap barcode_grid(const BarcodeImage& img);

inline DecodedBarcode decode_barcode(const BarcodeImage& img, const SessionKey& key,
                                     const ecc::EccPolicy& policy = {}) {
  img.spec.validate();
  return decode_grid(barcode_grid(img), key, policy, img.spec);
}

// Same majority rule as read_superpixels, straight from the color grid.
inline Bitmap barcode_grid(const BarcodeImage& img) {
  const BarcodeSpec& spec = img.spec;
  if (img.pixels.rows() != spec.raster_rows() || img.pixels.cols() != spec.raster_cols())
    throw FormatError("barcode image does not match its spec");
  const int s = spec.superpixel;
  Bitmap out(spec.grid_rows(), spec.grid_cols());
  for (int r = 0; r < spec.grid_rows(); ++r)
    for (int c = 0; c < spec.grid_cols(); ++c) {
      int balance = 0;
      for (int dr = 0; dr < s; ++dr)
        for (int dc = 0; dc < s; ++dc) {
          const Color px = img.pixels(r * s + dr, c * s + dc);
          if (px != Color::kRed) balance += px == Color::kWhite ? 1 : -1;
        }
      out(r, c) = balance > 0 ? 1 : 0;
    }
  return out;
}

}  // namespace cuebar

#endif  // CUEBAR_BARCODE_HPP_
