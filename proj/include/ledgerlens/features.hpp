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

#ifndef LEDGERLENS_FEATURES_HPP
#define LEDGERLENS_FEATURES_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ledgerlens/errors.hpp"
#include "ledgerlens/image.hpp"
#include "ledgerlens/imgproc.hpp"
#include "ledgerlens/rng.hpp"

namespace ledgerlens {

// Self-contained binary feature pipeline: FAST-9 corner test, Harris
// response ranking, intensity-centroid orientation, and 256 rotated
// intensity comparisons on a box-smoothed 31x31 patch.

struct Keypoint {
  PointF position;
  double response = 0.0;     // Harris corner score used for ranking
  double orientation = 0.0;  // radians, from the patch intensity centroid
};

/// 256 binary intensity-comparison outcomes packed into 4 words.
struct BinaryDescriptor {
  std::array<std::uint64_t, 4> bits{};

  int hamming(const BinaryDescriptor& o) const {
    int d = 0;
    for (int i = 0; i < 4; ++i)
      d += std::popcount(bits[i] ^ o.bits[i]);
    return d;
  }
};

struct Feature {
  Keypoint keypoint;
  BinaryDescriptor descriptor;
};

namespace detail {

// Bresenham circle of radius 3 used by the segment test.
inline constexpr std::array<std::array<int, 2>, 16> kFastCircle = {{
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0}, {3, 1}, {2, 2}, {1, 3},
    {0, 3}, {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3},
}};

inline bool fast9_corner(const GrayImage& img, int x, int y, int threshold) {
  const int c = img.at(x, y);
  const int hi = c + threshold;
  const int lo = c - threshold;

  // Cheap cardinal-direction reject before the full ring walk.
  int brighter = 0, darker = 0;
  for (const int i : {0, 4, 8, 12}) {
    const int v = img.at(x + kFastCircle[i][0], y + kFastCircle[i][1]);
    if (v > hi) ++brighter;
    if (v < lo) ++darker;
  }
  if (brighter < 3 && darker < 3) return false;

  std::array<int, 16> ring;
  for (int i = 0; i < 16; ++i)
    ring[i] = img.at(x + kFastCircle[i][0], y + kFastCircle[i][1]);

  const auto has_run = [&](auto pred) {
    int run = 0;
    for (int i = 0; i < 16 + 9; ++i) {
      if (pred(ring[i % 16])) {
        if (++run >= 9) return true;
      } else {
        run = 0;
      }
    }
    return false;
  };
  return has_run([&](int v) { return v > hi; }) ||
         has_run([&](int v) { return v < lo; });
}

/// Harris response from Sobel gradients accumulated over a 7x7 window.
inline double harris_response(const GrayImage& img, int x, int y) {
  double sxx = 0, syy = 0, sxy = 0;
  for (int dy = -3; dy <= 3; ++dy)
    for (int dx = -3; dx <= 3; ++dx) {
      const int px = x + dx, py = y + dy;
      const double gx =
          (img.at_clamped(px + 1, py - 1) + 2.0 * img.at_clamped(px + 1, py) +
           img.at_clamped(px + 1, py + 1)) -
          (img.at_clamped(px - 1, py - 1) + 2.0 * img.at_clamped(px - 1, py) +
           img.at_clamped(px - 1, py + 1));
      const double gy =
          (img.at_clamped(px - 1, py + 1) + 2.0 * img.at_clamped(px, py + 1) +
           img.at_clamped(px + 1, py + 1)) -
          (img.at_clamped(px - 1, py - 1) + 2.0 * img.at_clamped(px, py - 1) +
           img.at_clamped(px + 1, py - 1));
      sxx += gx * gx;
      syy += gy * gy;
      sxy += gx * gy;
    }
  constexpr double k = 0.04;
  const double det = sxx * syy - sxy * sxy;
  const double trace = sxx + syy;
  return det - k * trace * trace;
}

constexpr int kPatchRadius = 15;  // orientation disc and descriptor patch
constexpr int kBorder = 22;       // keeps rotated pattern samples in bounds

/// Subpixel peak of the Harris surface: quadratic fit over the 3x3
/// neighbourhood, offset clamped to half a pixel per axis.
inline PointF refine_subpixel(const GrayImage& img, int x, int y,
                              double center_response) {
  const double rxm = harris_response(img, x - 1, y);
  const double rxp = harris_response(img, x + 1, y);
  const double rym = harris_response(img, x, y - 1);
  const double ryp = harris_response(img, x, y + 1);
  const double dxx = rxp + rxm - 2.0 * center_response;
  const double dyy = ryp + rym - 2.0 * center_response;
  double ox = 0.0, oy = 0.0;
  if (dxx < -1e-12) ox = std::clamp(-0.5 * (rxp - rxm) / dxx, -0.5, 0.5);
  if (dyy < -1e-12) oy = std::clamp(-0.5 * (ryp - rym) / dyy, -0.5, 0.5);
  return PointF{x + ox, y + oy};
}

inline double intensity_centroid_angle(const GrayImage& img, int x, int y) {
  double m10 = 0.0, m01 = 0.0;
  for (int dy = -kPatchRadius; dy <= kPatchRadius; ++dy) {
    const int span = static_cast<int>(
        std::sqrt(static_cast<double>(kPatchRadius * kPatchRadius - dy * dy)));
    for (int dx = -span; dx <= span; ++dx) {
      const double v = img.at_clamped(x + dx, y + dy);
      m10 += dx * v;
      m01 += dy * v;
    }
  }
  return std::atan2(m01, m10);
}

struct PatternPair {
  int ax, ay, bx, by;
};

/// Fixed comparison pattern: 256 point pairs drawn once from a seeded
/// Gaussian centred on the keypoint and clipped to a disc of radius 13, so
/// rotated samples stay inside the 31x31 patch. Concentrating samples near
/// the corner structure makes the bits far more informative on sparse
/// ink-on-paper content than a uniform spread.
inline const std::array<PatternPair, 256>& comparison_pattern() {
  static const std::array<PatternPair, 256> pattern = [] {
    std::array<PatternPair, 256> p{};
    Rng rng(0x9d2c5680u);
    constexpr int kMax = 13;
    constexpr double kSigma = 6.0;
    auto draw = [&](int& px, int& py) {
      for (;;) {
        const int x = static_cast<int>(std::lround(rng.normal(0.0, kSigma)));
        const int y = static_cast<int>(std::lround(rng.normal(0.0, kSigma)));
        if (x * x + y * y <= kMax * kMax) {
          px = x;
          py = y;
          return;
        }
      }
    };
    for (auto& pair : p) {
      draw(pair.ax, pair.ay);
      do {
        draw(pair.bx, pair.by);
      } while (pair.bx == pair.ax && pair.by == pair.ay);
    }
    return p;
  }();
  return pattern;
}

/// 5x5 box smoothing of the full frame once, via integral image. Descriptor
/// comparisons read this, not raw pixels.
inline GrayImage box_smooth5(const GrayImage& img) {
  IntegralImage integral(img);
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      out.at(x, y) = static_cast<std::uint8_t>(
          std::lround(integral.mean(x - 2, y - 2, x + 2, y + 2)));
  return out;
}

}  // namespace detail

struct DetectParams {
  int fast_threshold = 10;
};

/// At most `n_features` keypoints ranked by Harris response, each with a
/// rotation-compensated 256-bit descriptor. Deterministic: same image in,
/// byte-identical feature set out.
inline std::vector<Feature> detect_and_describe(const GrayImage& img,
                                                int n_features,
                                                const DetectParams& params = {}) {
  if (img.width() < 31 || img.height() < 31)
    throw DimensionError("detect_and_describe: image must be at least 31x31");
  if (n_features < 1) throw ParameterError("n_features must be >= 1");

  // FAST corners with Harris scores, away from the border so the whole
  // rotated patch stays in bounds.
  struct Candidate {
    int x, y;
    double response;
  };
  std::vector<Candidate> candidates;
  const int w = img.width(), h = img.height();
  for (int y = detail::kBorder; y < h - detail::kBorder; ++y)
    for (int x = detail::kBorder; x < w - detail::kBorder; ++x)
      if (detail::fast9_corner(img, x, y, params.fast_threshold))
        candidates.push_back({x, y, detail::harris_response(img, x, y)});

  if (candidates.empty()) return {};

  // 3x3 non-maximum suppression on the Harris score.
  std::vector<double> score(static_cast<std::size_t>(w) * h,
                            -std::numeric_limits<double>::infinity());
  for (const auto& c : candidates)
    score[static_cast<std::size_t>(c.y) * w + c.x] = c.response;
  std::vector<Candidate> peaks;
  for (const auto& c : candidates) {
    bool is_peak = true;
    for (int dy = -1; dy <= 1 && is_peak; ++dy)
      for (int dx = -1; dx <= 1 && is_peak; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const double other =
            score[static_cast<std::size_t>(c.y + dy) * w + (c.x + dx)];
        if (other > c.response ||
            (other == c.response && (dy < 0 || (dy == 0 && dx < 0))))
          is_peak = false;
      }
    if (is_peak) peaks.push_back(c);
  }

  std::sort(peaks.begin(), peaks.end(), [](const Candidate& a,
                                           const Candidate& b) {
    if (a.response != b.response) return a.response > b.response;
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  if (static_cast<int>(peaks.size()) > n_features) peaks.resize(n_features);

  const GrayImage smoothed = detail::box_smooth5(img);
  const auto& pattern = detail::comparison_pattern();

  std::vector<Feature> features;
  features.reserve(peaks.size());
  for (const auto& c : peaks) {
    Feature f;
    f.keypoint.position = detail::refine_subpixel(img, c.x, c.y, c.response);
    f.keypoint.response = c.response;
    f.keypoint.orientation = detail::intensity_centroid_angle(img, c.x, c.y);
    const double ca = std::cos(f.keypoint.orientation);
    const double sa = std::sin(f.keypoint.orientation);
    for (int i = 0; i < 256; ++i) {
      const auto& p = pattern[i];
      const int ax = c.x + static_cast<int>(std::lround(ca * p.ax - sa * p.ay));
      const int ay = c.y + static_cast<int>(std::lround(sa * p.ax + ca * p.ay));
      const int bx = c.x + static_cast<int>(std::lround(ca * p.bx - sa * p.by));
      const int by = c.y + static_cast<int>(std::lround(sa * p.bx + ca * p.by));
      if (smoothed.at_clamped(ax, ay) < smoothed.at_clamped(bx, by))
        f.descriptor.bits[i / 64] |= (std::uint64_t{1} << (i % 64));
    }
    features.push_back(f);
  }
  return features;
}

}  // namespace ledgerlens

#endif  // LEDGERLENS_FEATURES_HPP
