// Copyright 2026 LedgerLens Authors
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

#ifndef LEDGERLENS_IMAGE_HPP
#define LEDGERLENS_IMAGE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ledgerlens/errors.hpp"

namespace ledgerlens {

struct PointF {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const PointF& a, const PointF& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// 8-bit single-channel raster, row-major. The universal currency of the
/// vision pipeline; treated as an immutable value once built.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(int width, int height, std::uint8_t fill = 255)
      : width_(width), height_(height) {
    if (width < 1 || height < 1)
      throw DimensionError("GrayImage dimensions must be >= 1");
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1)
      throw DimensionError("GrayImage dimensions must be >= 1");
    if (pixels_.size() != static_cast<std::size_t>(width) * height)
      throw DimensionError("pixel buffer length must equal width*height");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(int x, int y) const {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }

  /// Clamp-to-edge access, handy for filters near the border.
  std::uint8_t at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return at(x, y);
  }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::vector<std::uint8_t>& pixels() { return pixels_; }

  bool operator==(const GrayImage& o) const {
    return width_ == o.width_ && height_ == o.height_ && pixels_ == o.pixels_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// 8-bit interleaved RGB raster; only used at the ingestion edge before
/// grayscale conversion.
class RgbImage {
 public:
  RgbImage() = default;

  RgbImage(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1)
      throw DimensionError("RgbImage dimensions must be >= 1");
    pixels_.assign(static_cast<std::size_t>(width) * height * 3, 255);
  }

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t* rgb(int x, int y) {
    return pixels_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
  }
  const std::uint8_t* rgb(int x, int y) const {
    return pixels_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  std::vector<std::uint8_t>& pixels() { return pixels_; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Four corners ordered top-left, top-right, bottom-right, bottom-left.
/// Valid quads are convex with strictly positive signed area in this order
/// (image y axis points down).
struct Quad {
  std::array<PointF, 4> corners;

  double signed_area() const {
    double a = 0.0;
    for (int i = 0; i < 4; ++i) {
      const PointF& p = corners[i];
      const PointF& q = corners[(i + 1) % 4];
      a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
  }

  bool convex() const {
    int sign = 0;
    for (int i = 0; i < 4; ++i) {
      const PointF& a = corners[i];
      const PointF& b = corners[(i + 1) % 4];
      const PointF& c = corners[(i + 2) % 4];
      const double cross =
          (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
      if (cross != 0.0) {
        const int s = cross > 0 ? 1 : -1;
        if (sign == 0)
          sign = s;
        else if (s != sign)
          return false;
      }
    }
    return sign != 0;
  }

  bool valid() const { return signed_area() > 0.0 && convex(); }

  static Quad from_rect(double x, double y, double w, double h) {
    return Quad{{PointF{x, y}, PointF{x + w, y}, PointF{x + w, y + h},
                 PointF{x, y + h}}};
  }
};

/// Axis-aligned rectangle in pixel coordinates.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double x1() const { return x + w; }
  double y1() const { return y + h; }
  Quad quad() const { return Quad::from_rect(x, y, w, h); }
};

inline double rect_iou(const Rect& a, const Rect& b) {
  const double ix = std::max(0.0, std::min(a.x1(), b.x1()) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y1(), b.y1()) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

/// luma = round(0.299 R + 0.587 G + 0.114 B), clamped to [0,255].
inline GrayImage to_grayscale(const RgbImage& rgb) {
  if (rgb.width() < 1 || rgb.height() < 1)
    throw DimensionError("to_grayscale: zero-dimension input");
  GrayImage out(rgb.width(), rgb.height());
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      const std::uint8_t* p = rgb.rgb(x, y);
      const double luma = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
      out.at(x, y) =
          static_cast<std::uint8_t>(std::clamp(std::lround(luma), 0L, 255L));
    }
  }
  return out;
}

/// Linearly rescales pixels below `threshold` from [0, threshold) onto
/// [0, target); pixels at or above `threshold` pass through. Scans of dark
/// cards gain contrast in shadowed regions without touching the paper tone.
inline GrayImage brighten_dark_regions(const GrayImage& img, int threshold,
                                       int target) {
  if (!(0 <= threshold && threshold <= target && target <= 255))
    throw ParameterError("brighten_dark_regions: need 0 <= threshold <= target <= 255");
  GrayImage out = img;
  if (threshold == 0) return out;
  const double scale = static_cast<double>(target) / threshold;
  for (auto& p : out.pixels()) {
    if (p < threshold)
      p = static_cast<std::uint8_t>(
          std::clamp(std::lround(p * scale), 0L, 255L));
  }
  return out;
}

/// Rotate by a multiple of 90 degrees clockwise. Coarse deskew for scans fed
/// in sideways; anything finer is the alignment module's job.
inline GrayImage rotate90(const GrayImage& img, int quarter_turns) {
  int q = ((quarter_turns % 4) + 4) % 4;
  if (q == 0) return img;
  const int w = img.width(), h = img.height();
  GrayImage out = (q == 2) ? GrayImage(w, h) : GrayImage(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      switch (q) {
        case 1: out.at(h - 1 - y, x) = img.at(x, y); break;
        case 2: out.at(w - 1 - x, h - 1 - y) = img.at(x, y); break;
        default: out.at(y, w - 1 - x) = img.at(x, y); break;
      }
    }
  }
  return out;
}

inline GrayImage crop(const GrayImage& img, int x0, int y0, int w, int h) {
  if (w < 1 || h < 1) throw DimensionError("crop: empty region");
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(x, y) = img.at_clamped(x0 + x, y0 + y);
  return out;
}

}  // namespace ledgerlens

#endif  // LEDGERLENS_IMAGE_HPP
