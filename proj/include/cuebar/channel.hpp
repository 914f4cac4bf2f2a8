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

// Synthetic display-to-camera channel: affine warp, colour jitter, then
// independent inversion of superpixel-aligned cells.

#ifndef CUEBAR_CHANNEL_HPP_
#define CUEBAR_CHANNEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "cuebar/barcode.hpp"
#include "cuebar/registration.hpp"

namespace cuebar {

struct ChannelModel {
  double flip_prob = 0.0;
  AffineTransform warp;  // source -> capture coordinates (before the margin)
  int color_jitter = 0;  // max per-channel perturbation, 0..255
  std::uint64_t seed = 0;
  int cell = 2;           // flip granularity in display pixels
  int canvas_margin = 0;  // black pixels added on every side of the capture

  void validate() const {
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) throw ConfigError("flip_prob must lie in [0,1]");
    if (color_jitter < 0 || color_jitter > 255) throw ConfigError("jitter must lie in [0,255]");
    if (cell < 1) throw ConfigError("cell must be >= 1");
    if (canvas_margin < 0) throw ConfigError("canvas margin must be >= 0");
    if (!warp.usable()) throw ConfigError("warp is not invertible");
  }
};

struct TransmitStats {
  long cells = 0;
  long flipped = 0;
};

inline Raster transmit(const Raster& input, const ChannelModel& model, TransmitStats* stats = nullptr) {
  model.validate();
  Rng rng(model.seed);
  const int m = model.canvas_margin;
  const AffineTransform to_capture =
      AffineTransform::translation(m, m).compose(model.warp);
  Raster out = rectify(input, to_capture, input.rows() + 2 * m, input.cols() + 2 * m);

  if (model.color_jitter > 0) {
    std::uniform_int_distribution<int> jitter(-model.color_jitter, model.color_jitter);
    auto shift = [&](std::uint8_t v) {
      return static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + jitter(rng), 0, 255));
    };
    for (Rgb& p : out.data()) {
      p.r = shift(p.r);
      p.g = shift(p.g);
      p.b = shift(p.b);
    }
  }

  TransmitStats local;
  if (model.flip_prob > 0.0) {
    std::bernoulli_distribution flip(model.flip_prob);
    for (int r0 = 0; r0 < out.rows(); r0 += model.cell)
      for (int c0 = 0; c0 < out.cols(); c0 += model.cell) {
        ++local.cells;
        if (!flip(rng)) continue;
        ++local.flipped;
        for (int r = r0; r < std::min(r0 + model.cell, out.rows()); ++r)
          for (int c = c0; c < std::min(c0 + model.cell, out.cols()); ++c) {
            Rgb& p = out(r, c);
            if (is_red(p)) continue;
            p = {static_cast<std::uint8_t>(255 - p.r), static_cast<std::uint8_t>(255 - p.g),
                 static_cast<std::uint8_t>(255 - p.b)};
          }
      }
  }
  if (stats) *stats = local;
  return out;
}

// Fraction of interior superpixels of an already-registered capture whose
// majority value differs from the original barcode pixel.
inline double measure_superpixel_error(const Bitmap& original_grid, const Raster& received,
                                       const BarcodeSpec& spec) {
  if (original_grid.rows() != spec.grid_rows() || original_grid.cols() != spec.grid_cols())
    throw FormatError("original grid does not match the spec");
  const Bitmap got = read_superpixels(received, spec);
  long wrong = 0;
  const long total = static_cast<long>(spec.interior_rows()) * spec.interior_cols();
  for (int r = 0; r < spec.interior_rows(); ++r)
    for (int c = 0; c < spec.interior_cols(); ++c)
      wrong += got(spec.border + r, spec.border + c) != original_grid(spec.border + r, spec.border + c);
  return static_cast<double>(wrong) / static_cast<double>(total);
}

}  // namespace cuebar

#endif  // CUEBAR_CHANNEL_HPP_
