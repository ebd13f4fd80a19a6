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

#ifndef LEDGERLENS_IMGPROC_HPP
#define LEDGERLENS_IMGPROC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "ledgerlens/image.hpp"

namespace ledgerlens {

/// Summed-area table with a zero top row/left column, so
/// sum(x0..x1, y0..y1) is four lookups.
class IntegralImage {
 public:
  explicit IntegralImage(const GrayImage& img)
      : width_(img.width()), height_(img.height()),
        sums_(static_cast<std::size_t>(width_ + 1) * (height_ + 1), 0) {
    for (int y = 0; y < height_; ++y) {
      std::uint64_t row = 0;
      for (int x = 0; x < width_; ++x) {
        row += img.at(x, y);
        at(x + 1, y + 1) = at(x + 1, y) + row;
      }
    }
  }

  /// Inclusive-rectangle sum, clamped to the image.
  std::uint64_t sum(int x0, int y0, int x1, int y1) const {
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, width_ - 1);
    y1 = std::min(y1, height_ - 1);
    if (x0 > x1 || y0 > y1) return 0;
    return at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0);
  }

  double mean(int x0, int y0, int x1, int y1) const {
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, width_ - 1);
    y1 = std::min(y1, height_ - 1);
    if (x0 > x1 || y0 > y1) return 0.0;
    const auto count = static_cast<double>((x1 - x0 + 1)) * (y1 - y0 + 1);
    return static_cast<double>(sum(x0, y0, x1, y1)) / count;
  }

 private:
  std::uint64_t& at(int x, int y) {
    return sums_[static_cast<std::size_t>(y) * (width_ + 1) + x];
  }
  std::uint64_t at(int x, int y) const {
    return sums_[static_cast<std::size_t>(y) * (width_ + 1) + x];
  }

  int width_;
  int height_;
  std::vector<std::uint64_t> sums_;
};

/// Binary mask: true = ink (dark). A pixel is ink when it sits `offset`
/// below the mean of its window. Adaptive, because scanned cards carry
/// brightness gradients that defeat any global threshold.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> fg;  // 1 = ink

  bool at(int x, int y) const {
    return fg[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    fg[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
};

inline BinaryMask adaptive_binarize(const GrayImage& img, int window = 15,
                                    int offset = 10) {
  const int r = window / 2;
  IntegralImage integral(img);
  BinaryMask mask{img.width(), img.height(),
                  std::vector<std::uint8_t>(
                      static_cast<std::size_t>(img.width()) * img.height(), 0)};
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const double m = integral.mean(x - r, y - r, x + r, y + r);
      mask.set(x, y, img.at(x, y) < m - offset);
    }
  return mask;
}

/// Drops ink pixels with no 8-connected ink neighbour. Kills most
/// salt-and-pepper specks before component analysis.
inline BinaryMask remove_isolated(const BinaryMask& mask) {
  BinaryMask out = mask;
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      bool any = false;
      for (int dy = -1; dy <= 1 && !any; ++dy)
        for (int dx = -1; dx <= 1 && !any; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx, ny = y + dy;
          if (nx >= 0 && ny >= 0 && nx < mask.width && ny < mask.height &&
              mask.at(nx, ny))
            any = true;
        }
      if (!any) out.set(x, y, false);
    }
  return out;
}

struct Component {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive bounding box
  int area = 0;

  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
};

/// 8-connected components of the ink mask, left-to-right by bounding box.
inline std::vector<Component> connected_components(const BinaryMask& mask,
                                                   int min_area = 1) {
  std::vector<int> label(static_cast<std::size_t>(mask.width) * mask.height,
                         -1);
  std::vector<Component> comps;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * mask.width + x;
      if (!mask.at(x, y) || label[idx] >= 0) continue;
      const int id = static_cast<int>(comps.size());
      Component c{x, y, x, y, 0};
      stack.clear();
      stack.emplace_back(x, y);
      label[idx] = id;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        ++c.area;
        c.x0 = std::min(c.x0, cx);
        c.y0 = std::min(c.y0, cy);
        c.x1 = std::max(c.x1, cx);
        c.y1 = std::max(c.y1, cy);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height)
              continue;
            const std::size_t nidx =
                static_cast<std::size_t>(ny) * mask.width + nx;
            if (mask.at(nx, ny) && label[nidx] < 0) {
              label[nidx] = id;
              stack.emplace_back(nx, ny);
            }
          }
      }
      comps.push_back(c);
    }
  }
  std::erase_if(comps, [&](const Component& c) { return c.area < min_area; });
  std::sort(comps.begin(), comps.end(),
            [](const Component& a, const Component& b) {
              return a.x0 != b.x0 ? a.x0 < b.x0 : a.y0 < b.y0;
            });
  return comps;
}

inline GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h) {
  GrayImage out(out_w, out_h);
  const double sx = static_cast<double>(img.width()) / out_w;
  const double sy = static_cast<double>(img.height()) / out_h;
  for (int y = 0; y < out_h; ++y)
    for (int x = 0; x < out_w; ++x) {
      const double src_x = (x + 0.5) * sx - 0.5;
      const double src_y = (y + 0.5) * sy - 0.5;
      const int x0 = static_cast<int>(std::floor(src_x));
      const int y0 = static_cast<int>(std::floor(src_y));
      const double fx = src_x - x0;
      const double fy = src_y - y0;
      const double v =
          (1 - fx) * (1 - fy) * img.at_clamped(x0, y0) +
          fx * (1 - fy) * img.at_clamped(x0 + 1, y0) +
          (1 - fx) * fy * img.at_clamped(x0, y0 + 1) +
          fx * fy * img.at_clamped(x0 + 1, y0 + 1);
      out.at(x, y) =
          static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  return out;
}

/// Zero-mean normalized cross-correlation of `patch` against the window of
/// `img` at (x0, y0). Returns 0 for flat windows.
inline double ncc_at(const GrayImage& img, const GrayImage& patch, int x0,
                     int y0) {
  const int pw = patch.width(), ph = patch.height();
  double sum_i = 0, sum_p = 0;
  for (int y = 0; y < ph; ++y)
    for (int x = 0; x < pw; ++x) {
      sum_i += img.at_clamped(x0 + x, y0 + y);
      sum_p += patch.at(x, y);
    }
  const double n = static_cast<double>(pw) * ph;
  const double mean_i = sum_i / n, mean_p = sum_p / n;
  double num = 0, den_i = 0, den_p = 0;
  for (int y = 0; y < ph; ++y)
    for (int x = 0; x < pw; ++x) {
      const double a = img.at_clamped(x0 + x, y0 + y) - mean_i;
      const double b = patch.at(x, y) - mean_p;
      num += a * b;
      den_i += a * a;
      den_p += b * b;
    }
  const double den = std::sqrt(den_i * den_p);
  return den > 1e-12 ? num / den : 0.0;
}

struct NccPeak {
  int x = 0;
  int y = 0;
  double score = -1.0;
};

/// Coarse-to-fine NCC search for `patch` anywhere in `img`. Windows with
/// near-zero variance (blank paper) are skipped via an integral-image
/// prefilter; the stride-2 coarse pass is refined exhaustively around the
/// best coarse hits.
inline std::optional<NccPeak> ncc_search(const GrayImage& img,
                                         const GrayImage& patch,
                                         double min_score) {
  const int pw = patch.width(), ph = patch.height();
  if (pw > img.width() || ph > img.height()) return std::nullopt;

  IntegralImage integral(img);
  // Squared-sum integral for variance screening.
  std::vector<std::uint64_t> sq(
      static_cast<std::size_t>(img.width() + 1) * (img.height() + 1), 0);
  const int iw = img.width();
  for (int y = 0; y < img.height(); ++y) {
    std::uint64_t row = 0;
    for (int x = 0; x < iw; ++x) {
      const std::uint64_t v = img.at(x, y);
      row += v * v;
      sq[static_cast<std::size_t>(y + 1) * (iw + 1) + x + 1] =
          sq[static_cast<std::size_t>(y) * (iw + 1) + x + 1] + row;
    }
  }
  const auto window_var = [&](int x0, int y0) {
    const double n = static_cast<double>(pw) * ph;
    const double s = static_cast<double>(integral.sum(x0, y0, x0 + pw - 1,
                                                      y0 + ph - 1));
    const std::uint64_t s2 =
        sq[static_cast<std::size_t>(y0 + ph) * (iw + 1) + x0 + pw] -
        sq[static_cast<std::size_t>(y0) * (iw + 1) + x0 + pw] -
        sq[static_cast<std::size_t>(y0 + ph) * (iw + 1) + x0] +
        sq[static_cast<std::size_t>(y0) * (iw + 1) + x0];
    return static_cast<double>(s2) / n - (s / n) * (s / n);
  };

  NccPeak best;
  constexpr int kStride = 2;
  for (int y = 0; y + ph <= img.height(); y += kStride)
    for (int x = 0; x + pw <= img.width(); x += kStride) {
      if (window_var(x, y) < 4.0) continue;
      const double s = ncc_at(img, patch, x, y);
      if (s > best.score) best = NccPeak{x, y, s};
    }
  if (best.score <= -1.0) return std::nullopt;

  // Refine around the coarse winner.
  NccPeak refined = best;
  for (int dy = -kStride; dy <= kStride; ++dy)
    for (int dx = -kStride; dx <= kStride; ++dx) {
      const int x = best.x + dx, y = best.y + dy;
      if (x < 0 || y < 0 || x + pw > img.width() || y + ph > img.height())
        continue;
      const double s = ncc_at(img, patch, x, y);
      if (s > refined.score) refined = NccPeak{x, y, s};
    }
  if (refined.score < min_score) return std::nullopt;
  return refined;
}

}  // namespace ledgerlens

#endif  // LEDGERLENS_IMGPROC_HPP
