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

#ifndef CUEBAR_IMAGE_HPP_
#define CUEBAR_IMAGE_HPP_

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cuebar/common.hpp"

namespace cuebar {

// Dense row-major 2D array.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw FormatError("negative grid dimensions");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  bool contains(int r, int c) const { return r >= 0 && c >= 0 && r < rows_ && c < cols_; }

  T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  T& at(int r, int c) {
    if (!contains(r, c)) throw BoundsError("grid index out of range");
    return (*this)(r, c);
  }
  const T& at(int r, int c) const {
    if (!contains(r, c)) throw BoundsError("grid index out of range");
    return (*this)(r, c);
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using Bitmap = Grid<std::uint8_t>;  // 0/1 entries

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

using Raster = Grid<Rgb>;

enum class Color : std::uint8_t { kBlack = 0, kWhite = 1, kRed = 2 };

inline constexpr Rgb kRgbBlack{0, 0, 0};
inline constexpr Rgb kRgbWhite{255, 255, 255};
inline constexpr Rgb kRgbRed{255, 0, 0};

inline Rgb to_rgb(Color c) {
  switch (c) {
    case Color::kBlack: return kRgbBlack;
    case Color::kWhite: return kRgbWhite;
    case Color::kRed: return kRgbRed;
  }
  return kRgbBlack;
}

// Threshold-red: robust to mild color jitter, exact on clean renders.
inline bool is_red(const Rgb& p) { return p.r >= 200 && p.g <= 80 && p.b <= 80; }

inline int luminance_bit(const Rgb& p) {
  return (static_cast<int>(p.r) + p.g + p.b) >= 3 * 128 ? 1 : 0;
}

inline Raster to_raster(const Grid<Color>& g) {
  Raster out(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.data().size(); ++i) out.data()[i] = to_rgb(g.data()[i]);
  return out;
}

// --- PPM (P6, maxval 255) ---------------------------------------------------

inline std::string encode_ppm(const Raster& img) {
  std::string out = "P6\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) +
                    "\n255\n";
  out.reserve(out.size() + img.data().size() * 3);
  for (const Rgb& p : img.data()) {
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

inline Raster decode_ppm(const std::string& bytes) {
  std::size_t pos = 0;
  auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space_and_comments();
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
      throw FormatError("PPM: malformed header");
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > 1'000'000) throw FormatError("PPM: dimension too large");
    }
    return static_cast<int>(v);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6')
    throw FormatError("PPM: only binary P6 is supported");
  pos = 2;
  int cols = read_int();
  int rows = read_int();
  int maxval = read_int();
  if (maxval != 255) throw FormatError("PPM: maxval must be 255");
  ++pos;  // single whitespace before the raster
  const std::size_t need = static_cast<std::size_t>(rows) * cols * 3;
  if (bytes.size() < pos + need) throw FormatError("PPM: truncated raster");
  Raster img(rows, cols);
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    img.data()[i] = {static_cast<std::uint8_t>(bytes[pos + 3 * i]),
                     static_cast<std::uint8_t>(bytes[pos + 3 * i + 1]),
                     static_cast<std::uint8_t>(bytes[pos + 3 * i + 2])};
  }
  return img;
}

inline void write_ppm(const std::string& path, const Raster& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << encode_ppm(img);
}

inline Raster read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_ppm(bytes);
}

}  // namespace cuebar

#endif  // CUEBAR_IMAGE_HPP_
