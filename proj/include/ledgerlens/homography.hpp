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

#ifndef LEDGERLENS_HOMOGRAPHY_HPP
#define LEDGERLENS_HOMOGRAPHY_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "ledgerlens/errors.hpp"
#include "ledgerlens/image.hpp"

namespace ledgerlens {

/// 3x3 projective transform. Normalized so m[2][2] == 1 whenever that entry
/// is nonzero; must stay invertible (|det| > 1e-12).
struct Homography {
  std::array<std::array<double, 3>, 3> m{
      {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};

  static Homography identity() { return Homography{}; }

  static Homography translation(double dx, double dy) {
    Homography h;
    h.m[0][2] = dx;
    h.m[1][2] = dy;
    return h;
  }

  static Homography scaling(double sx, double sy) {
    Homography h;
    h.m[0][0] = sx;
    h.m[1][1] = sy;
    return h;
  }

  double det() const {
    const auto& a = m;
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  }

  bool invertible() const { return std::abs(det()) > 1e-12; }

  /// Scale so the bottom-right entry is exactly 1 (when nonzero).
  Homography& normalize() {
    const double s = m[2][2];
    if (s != 0.0) {
      for (auto& row : m)
        for (auto& v : row) v /= s;
    }
    return *this;
  }

  PointF apply(const PointF& p) const {
    const double w = m[2][0] * p.x + m[2][1] * p.y + m[2][2];
    if (std::abs(w) < 1e-300)
      throw SingularTransformError("homography maps point to infinity");
    return PointF{(m[0][0] * p.x + m[0][1] * p.y + m[0][2]) / w,
                  (m[1][0] * p.x + m[1][1] * p.y + m[1][2]) / w};
  }

  Homography inverse() const {
    const double d = det();
    if (std::abs(d) < 1e-12)
      throw SingularTransformError("homography is singular");
    const auto& a = m;
    Homography r;
    r.m[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / d;
    r.m[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / d;
    r.m[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / d;
    r.m[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / d;
    r.m[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / d;
    r.m[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / d;
    r.m[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / d;
    r.m[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / d;
    r.m[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / d;
    return r.normalize();
  }

  /// this ∘ other: applies `other` first.
  Homography compose(const Homography& other) const {
    Homography r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += m[i][k] * other.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }

  std::array<double, 9> flat() const {
    return {m[0][0], m[0][1], m[0][2], m[1][0], m[1][1],
            m[1][2], m[2][0], m[2][1], m[2][2]};
  }

  static Homography from_flat(const std::array<double, 9>& f) {
    Homography h;
    for (int i = 0; i < 9; ++i) h.m[i / 3][i % 3] = f[i];
    return h;
  }
};

inline double frobenius_norm(const Homography& h) {
  double s = 0.0;
  for (const auto& row : h.m)
    for (const double v : row) s += v * v;
  return std::sqrt(s);
}

inline double frobenius_distance(const Homography& a, const Homography& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double d = a.m[i][j] - b.m[i][j];
      s += d * d;
    }
  return std::sqrt(s);
}

struct Correspondence {
  PointF src;
  PointF dst;
};

namespace detail {

/// Hartley normalization: translate centroid to origin, scale mean distance
/// to sqrt(2). Unnormalized DLT systems are badly conditioned at card
/// resolution (coordinates in the hundreds).
inline Eigen::Matrix3d normalizing_transform(std::span<const PointF> pts) {
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += std::hypot(p.x - cx, p.y - cy);
  mean_dist /= static_cast<double>(pts.size());
  const double s = mean_dist > 1e-12 ? std::sqrt(2.0) / mean_dist : 1.0;
  Eigen::Matrix3d t;
  t << s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0;
  return t;
}

inline bool collinear(const PointF& a, const PointF& b, const PointF& c,
                      double tol = 1e-9) {
  const double cross =
      (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  // Scale tolerance by the span of the triangle to stay unit-free.
  const double span = std::max({std::abs(b.x - a.x), std::abs(b.y - a.y),
                                std::abs(c.x - a.x), std::abs(c.y - a.y), 1.0});
  return std::abs(cross) <= tol * span * span;
}

inline bool any_three_collinear(std::span<const PointF> pts) {
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (collinear(pts[i], pts[j], pts[k])) return true;
  return false;
}

}  // namespace detail

/// Direct linear transform over n >= 4 correspondences, Hartley-normalized,
/// least squares for n > 4 (smallest singular vector of the 2n x 9 system).
inline Homography fit_homography(std::span<const Correspondence> pairs) {
  const int n = static_cast<int>(pairs.size());
  if (n < 4)
    throw InsufficientCorrespondencesError(
        "homography needs at least 4 correspondences");

  std::vector<PointF> src(static_cast<std::size_t>(n));
  std::vector<PointF> dst(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    src[i] = pairs[i].src;
    dst[i] = pairs[i].dst;
  }
  const Eigen::Matrix3d ts = detail::normalizing_transform(src);
  const Eigen::Matrix3d td = detail::normalizing_transform(dst);

  Eigen::MatrixXd a(2 * n, 9);
  for (int i = 0; i < n; ++i) {
    const double sx = ts(0, 0) * src[i].x + ts(0, 2);
    const double sy = ts(1, 1) * src[i].y + ts(1, 2);
    const double dx = td(0, 0) * dst[i].x + td(0, 2);
    const double dy = td(1, 1) * dst[i].y + td(1, 2);
    a.row(2 * i) << -sx, -sy, -1.0, 0.0, 0.0, 0.0, dx * sx, dx * sy, dx;
    a.row(2 * i + 1) << 0.0, 0.0, 0.0, -sx, -sy, -1.0, dy * sx, dy * sy, dy;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);

  const Eigen::Matrix3d result = td.inverse() * hn * ts;
  Homography out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.m[i][j] = result(i, j);
  out.normalize();
  if (!out.invertible())
    throw DegenerateConfigurationError(
        "correspondences yield a singular homography");
  return out;
}

/// Exact 4-point homography; throws DegenerateConfigurationError when any
/// three source or destination points are collinear.
inline Homography homography_from_quad(const std::array<PointF, 4>& src,
                                       const std::array<PointF, 4>& dst) {
  if (detail::any_three_collinear(std::span<const PointF>(src)) ||
      detail::any_three_collinear(std::span<const PointF>(dst)))
    throw DegenerateConfigurationError("4-point set has collinear triple");
  std::array<Correspondence, 4> pairs;
  for (int i = 0; i < 4; ++i) pairs[i] = Correspondence{src[i], dst[i]};
  return fit_homography(pairs);
}

inline double reprojection_error(const Homography& h,
                                 const Correspondence& c) {
  return distance(h.apply(c.src), c.dst);
}

}  // namespace ledgerlens

#endif  // LEDGERLENS_HOMOGRAPHY_HPP
