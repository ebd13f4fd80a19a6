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

#ifndef LEDGERLENS_HOUGH_HPP
#define LEDGERLENS_HOUGH_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ledgerlens/image.hpp"
#include "ledgerlens/imgproc.hpp"

namespace ledgerlens {

/// Line in normal form x cos(theta) + y sin(theta) = rho, theta in [0, pi).
/// Card rules are axis-aligned after coarse deskew, so detection is
/// restricted to near-0 (vertical) and near-90-degree (horizontal) angles;
/// handwriting strokes at other angles never reach the accumulator peaks.
struct LineRT {
  double rho = 0.0;    // signed pixels
  double theta = 0.0;  // radians in [0, pi)
  int votes = 0;

  bool horizontal() const {
    return std::abs(theta - std::numbers::pi / 2) < std::numbers::pi / 4;
  }
};

struct HoughParams {
  int binarize_window = 15;
  int binarize_offset = 10;
  double theta_tolerance_deg = 2.0;  // accumulate within +/- this of 0 and 90
  double theta_step_deg = 1.0;
  double rho_step = 1.0;
  double peak_fraction = 0.5;  // of the relevant image dimension
  double merge_rho = 10.0;     // merge peaks closer than this, same class
};

namespace detail {

struct ThetaBin {
  double theta;  // radians, may be negative for near-vertical other-tilt
  bool horizontal;
};

inline std::vector<ThetaBin> theta_bins(const HoughParams& p) {
  std::vector<ThetaBin> bins;
  const double step = p.theta_step_deg;
  for (double d = -p.theta_tolerance_deg; d <= p.theta_tolerance_deg + 1e-9;
       d += step)
    bins.push_back({d * std::numbers::pi / 180.0, false});
  for (double d = 90.0 - p.theta_tolerance_deg;
       d <= 90.0 + p.theta_tolerance_deg + 1e-9; d += step)
    bins.push_back({d * std::numbers::pi / 180.0, true});
  return bins;
}

}  // namespace detail

/// Standard accumulator Hough over the adaptively binarized ink mask.
/// Peaks need votes >= peak_fraction * (width for horizontal lines, height
/// for vertical); close parallel peaks collapse to the strongest.
inline std::vector<LineRT> hough_lines(const GrayImage& img,
                                       const HoughParams& params = {}) {
  const BinaryMask mask =
      adaptive_binarize(img, params.binarize_window, params.binarize_offset);

  const auto bins = detail::theta_bins(params);
  const int n_theta = static_cast<int>(bins.size());
  const double max_rho = std::hypot(img.width(), img.height());
  const int n_rho =
      static_cast<int>(std::ceil(2.0 * max_rho / params.rho_step)) + 1;
  const int rho_offset = n_rho / 2;

  std::vector<int> accum(static_cast<std::size_t>(n_theta) * n_rho, 0);
  std::vector<double> cos_t(n_theta), sin_t(n_theta);
  for (int t = 0; t < n_theta; ++t) {
    cos_t[t] = std::cos(bins[t].theta);
    sin_t[t] = std::sin(bins[t].theta);
  }

  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      if (!mask.at(x, y)) continue;
      for (int t = 0; t < n_theta; ++t) {
        const double rho = x * cos_t[t] + y * sin_t[t];
        const int r =
            static_cast<int>(std::lround(rho / params.rho_step)) + rho_offset;
        if (r >= 0 && r < n_rho)
          ++accum[static_cast<std::size_t>(t) * n_rho + r];
      }
    }

  // Collect peaks above the dimension-relative threshold.
  std::vector<LineRT> peaks;
  for (int t = 0; t < n_theta; ++t) {
    const double dim = bins[t].horizontal ? img.width() : img.height();
    const int threshold = std::max(
        1, static_cast<int>(std::ceil(params.peak_fraction * dim)));
    for (int r = 0; r < n_rho; ++r) {
      const int votes = accum[static_cast<std::size_t>(t) * n_rho + r];
      if (votes < threshold) continue;
      LineRT line;
      line.rho = (r - rho_offset) * params.rho_step;
      line.theta = bins[t].theta;
      line.votes = votes;
      // Canonical form theta in [0, pi).
      if (line.theta < 0.0) {
        line.theta += std::numbers::pi;
        line.rho = -line.rho;
      }
      peaks.push_back(line);
    }
  }

  // Merge near-duplicates of the same orientation class to the strongest.
  std::sort(peaks.begin(), peaks.end(), [](const LineRT& a, const LineRT& b) {
    if (a.votes != b.votes) return a.votes > b.votes;
    if (a.rho != b.rho) return a.rho < b.rho;
    return a.theta < b.theta;
  });
  std::vector<LineRT> merged;
  for (const auto& line : peaks) {
    // Compare rho against merged lines using the signed distance that is
    // meaningful for the class (negative-rho verticals flip sign).
    const double pos = line.horizontal()
                           ? line.rho / std::sin(line.theta)
                           : line.rho / std::cos(line.theta);
    bool absorbed = false;
    for (const auto& kept : merged) {
      if (kept.horizontal() != line.horizontal()) continue;
      const double kept_pos = kept.horizontal()
                                  ? kept.rho / std::sin(kept.theta)
                                  : kept.rho / std::cos(kept.theta);
      if (std::abs(kept_pos - pos) < params.merge_rho) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(line);
  }
  std::sort(merged.begin(), merged.end(), [](const LineRT& a, const LineRT& b) {
    if (a.horizontal() != b.horizontal()) return !a.horizontal();
    return a.rho < b.rho;
  });
  return merged;
}

/// Intersections of each (horizontal, vertical) pair, rows sorted by y and
/// columns by x. Near-parallel pairs (angle below 1 degree) are skipped.
inline std::vector<std::vector<PointF>> line_intersections(
    const std::vector<LineRT>& horizontals,
    const std::vector<LineRT>& verticals) {
  std::vector<LineRT> hs = horizontals;
  std::vector<LineRT> vs = verticals;
  std::sort(hs.begin(), hs.end(), [](const LineRT& a, const LineRT& b) {
    return a.rho / std::sin(a.theta) < b.rho / std::sin(b.theta);
  });
  std::sort(vs.begin(), vs.end(), [](const LineRT& a, const LineRT& b) {
    return a.rho / std::cos(a.theta) < b.rho / std::cos(b.theta);
  });

  std::vector<std::vector<PointF>> grid;
  constexpr double kMinAngle = 1.0 * std::numbers::pi / 180.0;
  for (const auto& h : hs) {
    std::vector<PointF> row;
    for (const auto& v : vs) {
      const double det = std::cos(v.theta) * std::sin(h.theta) -
                         std::cos(h.theta) * std::sin(v.theta);
      if (std::abs(det) < std::sin(kMinAngle)) continue;
      const double x =
          (v.rho * std::sin(h.theta) - h.rho * std::sin(v.theta)) / det;
      const double y =
          (h.rho * std::cos(v.theta) - v.rho * std::cos(h.theta)) / det;
      row.push_back(PointF{x, y});
    }
    if (!row.empty()) grid.push_back(std::move(row));
  }
  return grid;
}

}  // namespace ledgerlens

#endif  // LEDGERLENS_HOUGH_HPP
