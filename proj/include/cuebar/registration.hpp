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

// Landmark registration: find the red control points in a capture, fit the
// least-squares affine map back to their reference positions, resample.
//
// Coordinates are (row, col) in display pixels; pixel (r, c) has its center
// at (r, c).

#ifndef CUEBAR_REGISTRATION_HPP_
#define CUEBAR_REGISTRATION_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cuebar/barcode.hpp"
#include "cuebar/image.hpp"

namespace cuebar {

struct AffineTransform {
  double a11 = 1, a12 = 0, a21 = 0, a22 = 1;
  double t_row = 0, t_col = 0;

  static AffineTransform identity() { return {}; }
  static AffineTransform translation(double dr, double dc) { return {1, 0, 0, 1, dr, dc}; }

  // Rotation by deg (counter-clockwise on screen) and uniform scale about
  // center, then translation.
  static AffineTransform similarity(double deg, double scale, Point center, double dr = 0,
                                    double dc = 0) {
    const double th = deg * M_PI / 180.0;
    const double c = std::cos(th) * scale, s = std::sin(th) * scale;
    AffineTransform t{c, s, -s, c, 0, 0};
    // keep center fixed
    t.t_row = center.row - (t.a11 * center.row + t.a12 * center.col) + dr;
    t.t_col = center.col - (t.a21 * center.row + t.a22 * center.col) + dc;
    return t;
  }

  double det() const { return a11 * a22 - a12 * a21; }
  bool usable() const { return std::abs(det()) > 1e-6; }

  Point apply(const Point& p) const {
    return {a11 * p.row + a12 * p.col + t_row, a21 * p.row + a22 * p.col + t_col};
  }

  AffineTransform inverse() const {
    const double d = det();
    if (std::abs(d) <= 1e-6) throw DegenerateError("transform is not invertible");
    AffineTransform inv{a22 / d, -a12 / d, -a21 / d, a11 / d, 0, 0};
    inv.t_row = -(inv.a11 * t_row + inv.a12 * t_col);
    inv.t_col = -(inv.a21 * t_row + inv.a22 * t_col);
    return inv;
  }

  // this after other
  AffineTransform compose(const AffineTransform& other) const {
    AffineTransform r;
    r.a11 = a11 * other.a11 + a12 * other.a21;
    r.a12 = a11 * other.a12 + a12 * other.a22;
    r.a21 = a21 * other.a11 + a22 * other.a21;
    r.a22 = a21 * other.a12 + a22 * other.a22;
    const Point t = apply({other.t_row, other.t_col});
    r.t_row = t.row;
    r.t_col = t.col;
    return r;
  }
};

using ControlPointSet = std::vector<Point>;

// Orders points along the border walk: angle about the centroid ascending
// (top edge first in image coordinates), starting from the top-left-most
// point.
inline ControlPointSet order_border_walk(ControlPointSet pts) {
  if (pts.empty()) return pts;
  Point mean{};
  for (const auto& p : pts) {
    mean.row += p.row;
    mean.col += p.col;
  }
  mean.row /= static_cast<double>(pts.size());
  mean.col /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) {
    return std::atan2(a.row - mean.row, a.col - mean.col) <
           std::atan2(b.row - mean.row, b.col - mean.col);
  });
  auto start = std::min_element(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.row + a.col < b.row + b.col;
  });
  std::rotate(pts.begin(), start, pts.end());
  return pts;
}

// Red connected components (8-neighbour) reduced to centroids.
inline ControlPointSet detect_control_points(const Raster& raster) {
  Grid<std::uint8_t> seen(raster.rows(), raster.cols());
  ControlPointSet pts;
  std::vector<std::pair<int, int>> stack;
  for (int r = 0; r < raster.rows(); ++r)
    for (int c = 0; c < raster.cols(); ++c) {
      if (seen(r, c) || !is_red(raster(r, c))) continue;
      double sr = 0, sc = 0;
      long n = 0;
      stack.assign(1, {r, c});
      seen(r, c) = 1;
      while (!stack.empty()) {
        auto [pr, pc] = stack.back();
        stack.pop_back();
        sr += pr;
        sc += pc;
        ++n;
        constexpr int kDr[] = {-1, -1, -1, 0, 0, 1, 1, 1}, kDc[] = {-1, 0, 1, -1, 1, -1, 0, 1};
        for (int k = 0; k < 8; ++k) {
          const int nr = pr + kDr[k], nc = pc + kDc[k];
          if (raster.contains(nr, nc) && !seen(nr, nc) && is_red(raster(nr, nc))) {
            seen(nr, nc) = 1;
            stack.push_back({nr, nc});
          }
        }
      }
      pts.push_back({sr / static_cast<double>(n), sc / static_cast<double>(n)});
    }
  if (pts.size() < 3)
    throw TooFewPointsError("found " + std::to_string(pts.size()) + " control points, need 3");
  return order_border_walk(std::move(pts));
}

// Least-squares affine map taking detected[i] onto reference[i].
inline AffineTransform estimate_transform(const ControlPointSet& detected,
                                          const ControlPointSet& reference) {
  if (detected.size() != reference.size() || detected.size() < 3)
    throw DegenerateError("need two equal-size point sets of at least 3 points");
  const double n = static_cast<double>(detected.size());
  Point md{}, mr{};
  for (std::size_t i = 0; i < detected.size(); ++i) {
    md.row += detected[i].row / n;
    md.col += detected[i].col / n;
    mr.row += reference[i].row / n;
    mr.col += reference[i].col / n;
  }
  double srr = 0, src = 0, scc = 0, sRr = 0, sRc = 0, sCr = 0, sCc = 0;
  for (std::size_t i = 0; i < detected.size(); ++i) {
    const double dr = detected[i].row - md.row, dc = detected[i].col - md.col;
    const double Rr = reference[i].row - mr.row, Rc = reference[i].col - mr.col;
    srr += dr * dr;
    src += dr * dc;
    scc += dc * dc;
    sRr += Rr * dr;
    sRc += Rr * dc;
    sCr += Rc * dr;
    sCc += Rc * dc;
  }
  const double det = srr * scc - src * src;
  const double scale = srr + scc;
  if (scale <= 0 || det <= 1e-12 * scale * scale)
    throw DegenerateError("control points are collinear");
  AffineTransform t;
  t.a11 = (sRr * scc - sRc * src) / det;
  t.a12 = (sRc * srr - sRr * src) / det;
  t.a21 = (sCr * scc - sCc * src) / det;
  t.a22 = (sCc * srr - sCr * src) / det;
  t.t_row = mr.row - (t.a11 * md.row + t.a12 * md.col);
  t.t_col = mr.col - (t.a21 * md.row + t.a22 * md.col);
  return t;
}

// t maps capture coordinates to output coordinates; each output pixel is
// pulled from t^-1 by nearest neighbour, black outside the capture.
inline Raster rectify(const Raster& raster, const AffineTransform& t, int out_rows, int out_cols) {
  const AffineTransform inv = t.inverse();
  Raster out(out_rows, out_cols, kRgbBlack);
  for (int r = 0; r < out_rows; ++r)
    for (int c = 0; c < out_cols; ++c) {
      const Point src = inv.apply({static_cast<double>(r), static_cast<double>(c)});
      const int sr = static_cast<int>(std::lround(src.row));
      const int sc = static_cast<int>(std::lround(src.col));
      if (raster.contains(sr, sc)) out(r, c) = raster(sr, sc);
    }
  return out;
}

// Like rectify, but samples once per superpixel at its center and fills the
// whole cell. Half-pixel fit errors then stay inside the cell instead of
// splitting it between neighbours.
inline Raster rectify_cells(const Raster& raster, const AffineTransform& t, const BarcodeSpec& spec) {
  const AffineTransform inv = t.inverse();
  const int s = spec.superpixel;
  const double half = (s - 1) / 2.0;
  Raster out(spec.raster_rows(), spec.raster_cols(), kRgbBlack);
  for (int r = 0; r < spec.grid_rows(); ++r)
    for (int c = 0; c < spec.grid_cols(); ++c) {
      const Point src = inv.apply({r * s + half, c * s + half});
      const int sr = static_cast<int>(std::lround(src.row));
      const int sc = static_cast<int>(std::lround(src.col));
      if (!raster.contains(sr, sc)) continue;
      const Rgb v = raster(sr, sc);
      for (int dr = 0; dr < s; ++dr)
        for (int dc = 0; dc < s; ++dc) out(r * s + dr, c * s + dc) = v;
    }
  return out;
}

inline std::vector<double> displacements(const ControlPointSet& a, const ControlPointSet& b) {
  if (a.size() != b.size()) throw CardinalityError("point sets differ in size");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    d[i] = std::hypot(a[i].row - b[i].row, a[i].col - b[i].col);
  return d;
}

inline double mean_displacement(const ControlPointSet& a, const ControlPointSet& b) {
  auto d = displacements(a, b);
  if (d.empty()) return 0.0;
  return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

// Detect, fit against the spec's reference points, resample one value per
// superpixel into the spec's raster size.
inline Raster register_capture(const Raster& capture, const BarcodeSpec& spec,
                               AffineTransform* fitted = nullptr) {
  const ControlPointSet reference = reference_control_points(spec);
  const ControlPointSet detected = detect_control_points(capture);
  if (detected.size() != reference.size())
    throw CardinalityError("detected " + std::to_string(detected.size()) +
                           " control points, expected " + std::to_string(reference.size()));
  const AffineTransform t = estimate_transform(detected, reference);
  if (fitted) *fitted = t;
  return rectify_cells(capture, t, spec);
}

}  // namespace cuebar

#endif  // CUEBAR_REGISTRATION_HPP_
