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

#ifndef LEDGERLENS_WARP_HPP
#define LEDGERLENS_WARP_HPP

#include <cmath>

#include "ledgerlens/homography.hpp"
#include "ledgerlens/image.hpp"

namespace ledgerlens {

namespace detail {

/// Bilinear sample with white (paper background) outside the image, so warped
/// margins binarize as empty rather than as ink.
inline double sample_bilinear(const GrayImage& img, double x, double y) {
  if (x < -0.5 || y < -0.5 || x > img.width() - 0.5 || y > img.height() - 0.5)
    return 255.0;
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  const double p00 = img.at_clamped(x0, y0);
  const double p10 = img.at_clamped(x0 + 1, y0);
  const double p01 = img.at_clamped(x0, y0 + 1);
  const double p11 = img.at_clamped(x0 + 1, y0 + 1);
  return (1 - fx) * (1 - fy) * p00 + fx * (1 - fy) * p10 +
         (1 - fx) * fy * p01 + fx * fy * p11;
}

}  // namespace detail

/// Output pixel (u,v) is sampled from the source at h^-1 (u,v,1). `h` maps
/// source coordinates to output coordinates.
inline GrayImage warp_perspective(const GrayImage& img, const Homography& h,
                                  int out_width, int out_height) {
  if (!h.invertible())
    throw SingularTransformError("warp_perspective: singular homography");
  const Homography inv = h.inverse();
  GrayImage out(out_width, out_height);
  for (int v = 0; v < out_height; ++v) {
    for (int u = 0; u < out_width; ++u) {
      const PointF p = inv.apply(PointF{static_cast<double>(u),
                                        static_cast<double>(v)});
      const double s = detail::sample_bilinear(img, p.x, p.y);
      out.at(u, v) =
          static_cast<std::uint8_t>(std::clamp(std::lround(s), 0L, 255L));
    }
  }
  return out;
}

/// Maps the quad onto the full output rectangle (corner order TL,TR,BR,BL).
/// Quad corners may sit up to 2 px outside the image; they get clamped.
inline GrayImage rectify_quad(const GrayImage& img, const Quad& region,
                              int out_width, int out_height) {
  constexpr double kTolerance = 2.0;
  std::array<PointF, 4> src = region.corners;
  for (auto& c : src) {
    if (c.x < -kTolerance || c.y < -kTolerance ||
        c.x > img.width() - 1 + kTolerance ||
        c.y > img.height() - 1 + kTolerance)
      throw ParameterError("rectify_quad: corner outside image bounds");
    c.x = std::clamp(c.x, 0.0, static_cast<double>(img.width() - 1));
    c.y = std::clamp(c.y, 0.0, static_cast<double>(img.height() - 1));
  }
  const std::array<PointF, 4> dst = {
      PointF{0.0, 0.0}, PointF{static_cast<double>(out_width - 1), 0.0},
      PointF{static_cast<double>(out_width - 1),
             static_cast<double>(out_height - 1)},
      PointF{0.0, static_cast<double>(out_height - 1)}};
  Homography h;
  try {
    h = homography_from_quad(src, dst);
  } catch (const DegenerateConfigurationError&) {
    throw DegenerateQuadError("rectify_quad: quad corners are collinear");
  }
  return warp_perspective(img, h, out_width, out_height);
}

}  // namespace ledgerlens

#endif  // LEDGERLENS_WARP_HPP
