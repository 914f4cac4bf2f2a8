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

// Synthetic measurements over the capture pipeline: control-point
// displacement after registration and superpixel error rate.

#ifndef CUEBAR_STATS_HPP_
#define CUEBAR_STATS_HPP_

#include <random>
#include <vector>

#include "cuebar/barcode.hpp"
#include "cuebar/channel.hpp"
#include "cuebar/registration.hpp"

namespace cuebar::stats {

struct WarpRange {
  double max_rot_deg = 5.0;
  double min_scale = 0.9;
  double max_scale = 1.1;
  double max_shift = 4.0;    // display pixels, each axis
  double point_sigma = 0.3;  // landmark jitter, display pixels
  int margin = 30;           // capture canvas border
};

// Random similarity warp about the raster center.
inline AffineTransform random_warp(const BarcodeSpec& spec, const WarpRange& w, Rng& rng) {
  std::uniform_real_distribution<double> rot(-w.max_rot_deg, w.max_rot_deg);
  std::uniform_real_distribution<double> scale(w.min_scale, w.max_scale);
  std::uniform_real_distribution<double> shift(-w.max_shift, w.max_shift);
  const Point center{(spec.raster_rows() - 1) / 2.0, (spec.raster_cols() - 1) / 2.0};
  const double deg = rot(rng), s = scale(rng), dr = shift(rng), dc = shift(rng);
  return AffineTransform::similarity(deg, s, center, dr, dc);
}

// One frame: render, warp, detect, jitter the landmarks, fit. Returns the
// per-point distance between the fitted landmarks and the reference.
inline std::vector<double> displacement_trial(const BarcodeImage& img, const WarpRange& w, Rng& rng) {
  ChannelModel model;
  model.warp = random_warp(img.spec, w, rng);
  model.canvas_margin = w.margin;
  model.seed = rng();
  const Raster capture = transmit(img.raster(), model);
  ControlPointSet detected = detect_control_points(capture);
  const ControlPointSet reference = reference_control_points(img.spec);
  if (detected.size() != reference.size())
    throw CardinalityError("detected " + std::to_string(detected.size()) + " control points, expected " +
                           std::to_string(reference.size()));
  if (w.point_sigma > 0) {
    std::normal_distribution<double> noise(0.0, w.point_sigma);
    for (auto& p : detected) {
      p.row += noise(rng);
      p.col += noise(rng);
    }
  }
  const AffineTransform t = estimate_transform(detected, reference);
  ControlPointSet mapped;
  for (const auto& p : detected) mapped.push_back(t.apply(p));
  return displacements(mapped, reference);
}

// Fraction of interior superpixels read wrongly after a flip-only channel.
inline double error_rate_trial(const BarcodeImage& img, double flip_prob, std::uint64_t seed) {
  ChannelModel model;
  model.flip_prob = flip_prob;
  model.cell = img.spec.superpixel;
  model.seed = seed;
  const Raster out = transmit(img.raster(), model);
  return measure_superpixel_error(read_superpixels(img.raster(), img.spec), out, img.spec);
}

}  // namespace cuebar::stats

#endif  // CUEBAR_STATS_HPP_
