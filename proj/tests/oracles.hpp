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

// Test-only oracles. These deliberately avoid the library's solvers: the
// 4-point fit is a hand-rolled Gaussian elimination, the n-point refit a
// Jacobi eigen decomposition of the normal equations, and consensus search
// enumerates every 4-subset. Slow and simple on purpose.

#ifndef LEDGERLENS_TESTS_ORACLES_HPP
#define LEDGERLENS_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "ledgerlens/homography.hpp"
#include "ledgerlens/rng.hpp"

namespace oracles {

using ledgerlens::Correspondence;
using ledgerlens::Homography;
using ledgerlens::PointF;
using ledgerlens::Rng;

/// Exact 4-point homography via an 8x8 solve with h33 fixed at 1.
/// Returns nullopt when the system is numerically singular.
inline std::optional<Homography> solve_4pt(
    const std::array<Correspondence, 4>& pairs) {
  double a[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    const double x = pairs[i].src.x, y = pairs[i].src.y;
    const double u = pairs[i].dst.x, v = pairs[i].dst.y;
    double* r0 = a[2 * i];
    double* r1 = a[2 * i + 1];
    r0[0] = x; r0[1] = y; r0[2] = 1;
    r0[6] = -u * x; r0[7] = -u * y; r0[8] = u;
    r1[3] = x; r1[4] = y; r1[5] = 1;
    r1[6] = -v * x; r1[7] = -v * y; r1[8] = v;
  }
  // Partial-pivot Gaussian elimination on the augmented system.
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 8; ++row)
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    if (std::abs(a[pivot][col]) < 1e-10) return std::nullopt;
    for (int k = 0; k < 9; ++k) std::swap(a[col][k], a[pivot][k]);
    for (int row = 0; row < 8; ++row) {
      if (row == col) continue;
      const double f = a[row][col] / a[col][col];
      for (int k = col; k < 9; ++k) a[row][k] -= f * a[col][k];
    }
  }
  Homography h;
  for (int i = 0; i < 8; ++i) h.m[i / 3][i % 3] = a[i][8] / a[i][i];
  h.m[2][2] = 1.0;
  if (!h.invertible()) return std::nullopt;
  return h;
}

struct Consensus {
  std::vector<int> inlier_indices;
};

/// Exhaustive search over all 4-subsets for the largest consensus set.
inline Consensus brute_force_consensus(
    const std::vector<Correspondence>& pairs, double threshold) {
  const int n = static_cast<int>(pairs.size());
  Consensus best;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          const auto model = solve_4pt({pairs[i], pairs[j], pairs[k], pairs[l]});
          if (!model) continue;
          std::vector<int> inliers;
          for (int p = 0; p < n; ++p) {
            const PointF mapped = model->apply(pairs[p].src);
            const double err = std::hypot(mapped.x - pairs[p].dst.x,
                                          mapped.y - pairs[p].dst.y);
            if (err <= threshold) inliers.push_back(p);
          }
          if (inliers.size() > best.inlier_indices.size())
            best.inlier_indices = std::move(inliers);
        }
  return best;
}

/// Cyclic Jacobi eigen decomposition of a symmetric matrix; returns the
/// eigenvector of the smallest eigenvalue.
inline std::array<double, 9> smallest_eigenvector9(double m[9][9]) {
  double v[9][9] = {};
  for (int i = 0; i < 9; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 9; ++p)
      for (int q = p + 1; q < 9; ++q) off += m[p][q] * m[p][q];
    if (off < 1e-24) break;
    for (int p = 0; p < 9; ++p)
      for (int q = p + 1; q < 9; ++q) {
        if (std::abs(m[p][q]) < 1e-30) continue;
        const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 9; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < 9; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
        for (int k = 0; k < 9; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }
  int best = 0;
  for (int i = 1; i < 9; ++i)
    if (m[i][i] < m[best][best]) best = i;
  std::array<double, 9> out;
  for (int i = 0; i < 9; ++i) out[i] = v[i][best];
  return out;
}

/// Least-squares homography on the given subset, via the normal equations of
/// the raw (unnormalized) DLT system. Adequate for exact correspondences.
inline Homography least_squares_refit(const std::vector<Correspondence>& pairs,
                                      const std::vector<int>& indices) {
  double ata[9][9] = {};
  const auto accumulate = [&](const std::array<double, 9>& row) {
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) ata[i][j] += row[i] * row[j];
  };
  for (const int idx : indices) {
    const double x = pairs[idx].src.x, y = pairs[idx].src.y;
    const double u = pairs[idx].dst.x, v = pairs[idx].dst.y;
    accumulate({-x, -y, -1, 0, 0, 0, u * x, u * y, u});
    accumulate({0, 0, 0, -x, -y, -1, v * x, v * y, v});
  }
  const auto h = smallest_eigenvector9(ata);
  Homography out;
  for (int i = 0; i < 9; ++i) out.m[i / 3][i % 3] = h[i];
  out.normalize();
  return out;
}

struct RansacInstance {
  std::vector<Correspondence> pairs;
  Homography truth;
  int n_inliers = 0;
};

/// Seeded small instance: 9..12 correspondences, up to 3 gross outliers,
/// inliers exact under a mild ground-truth homography.
inline RansacInstance random_ransac_instance(Rng& rng) {
  RansacInstance inst;
  const std::array<PointF, 4> src = {PointF{0, 0}, PointF{300, 0},
                                     PointF{300, 200}, PointF{0, 200}};
  std::array<PointF, 4> dst;
  for (int i = 0; i < 4; ++i)
    dst[i] = PointF{src[i].x + rng.uniform(-15, 15),
                    src[i].y + rng.uniform(-15, 15)};
  inst.truth = ledgerlens::homography_from_quad(src, dst);

  const int total = 9 + static_cast<int>(rng.uniform_int(4));  // 9..12
  const int outliers = static_cast<int>(rng.uniform_int(4));   // 0..3
  inst.n_inliers = total - outliers;
  for (int i = 0; i < inst.n_inliers; ++i) {
    const PointF p{rng.uniform(10, 290), rng.uniform(10, 190)};
    inst.pairs.push_back({p, inst.truth.apply(p)});
  }
  for (int i = 0; i < outliers; ++i) {
    const PointF p{rng.uniform(10, 290), rng.uniform(10, 190)};
    PointF q = inst.truth.apply(p);
    const double angle = rng.uniform(0, 6.283185307179586);
    const double radius = rng.uniform(60, 150);
    q.x += radius * std::cos(angle);
    q.y += radius * std::sin(angle);
    inst.pairs.push_back({p, q});
  }
  return inst;
}

}  // namespace oracles

#endif  // LEDGERLENS_TESTS_ORACLES_HPP
