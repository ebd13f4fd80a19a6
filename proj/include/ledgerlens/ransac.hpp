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

#ifndef LEDGERLENS_RANSAC_HPP
#define LEDGERLENS_RANSAC_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ledgerlens/errors.hpp"
#include "ledgerlens/homography.hpp"
#include "ledgerlens/rng.hpp"

namespace ledgerlens {

/// Verification/retry policy for template registration. Defaults follow the
/// production recipe: keep the top 5% of matches, demand 15 RANSAC inliers
/// within 6.0 px reprojection error, and escalate the feature budget
/// 5000 -> 7000 -> 10000 before giving a card up to manual inspection.
struct AlignmentPolicy {
  std::vector<int> feature_counts{5000, 7000, 10000};
  double retain_fraction = 0.05;
  int min_inliers = 15;
  double max_reprojection_error = 6.0;
  int ransac_iterations = 2000;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(retain_fraction > 0.0 && retain_fraction <= 1.0))
      throw ParameterError("retain_fraction must be in (0, 1]");
    if (min_inliers < 4) throw ParameterError("min_inliers must be >= 4");
    if (feature_counts.empty())
      throw ParameterError("feature count schedule must be non-empty");
    for (std::size_t i = 1; i < feature_counts.size(); ++i)
      if (feature_counts[i] < feature_counts[i - 1])
        throw ParameterError("feature count schedule must be non-decreasing");
    if (ransac_iterations < 1)
      throw ParameterError("ransac_iterations must be >= 1");
    if (!(max_reprojection_error > 0.0))
      throw ParameterError("max_reprojection_error must be > 0");
  }
};

struct RansacResult {
  Homography homography;
  std::vector<int> inlier_indices;
  double mean_error = 0.0;  // mean reprojection error of inliers, refit model
};

/// Seeded RANSAC over point correspondences: sample 4 non-collinear pairs,
/// solve the normalized DLT system, score by reprojection error against the
/// threshold, then refit the best consensus set by least squares.
inline RansacResult estimate_homography_ransac(
    std::span<const Correspondence> pairs, const AlignmentPolicy& policy) {
  policy.validate();
  const int n = static_cast<int>(pairs.size());
  if (n < 4)
    throw InsufficientCorrespondencesError(
        "RANSAC needs at least 4 correspondences");

  Rng rng(policy.seed);
  std::vector<int> best_inliers;
  int degenerate_rounds = 0;

  for (int iter = 0; iter < policy.ransac_iterations; ++iter) {
    // Draw 4 distinct indices.
    std::array<int, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      bool fresh;
      do {
        idx[k] = static_cast<int>(rng.uniform_int(n));
        fresh = true;
        for (int j = 0; j < k; ++j)
          if (idx[j] == idx[k]) fresh = false;
      } while (!fresh);
    }
    std::array<PointF, 4> src, dst;
    for (int k = 0; k < 4; ++k) {
      src[k] = pairs[idx[k]].src;
      dst[k] = pairs[idx[k]].dst;
    }

    Homography model;
    try {
      model = homography_from_quad(src, dst);
    } catch (const DegenerateConfigurationError&) {
      ++degenerate_rounds;
      continue;
    }

    std::vector<int> inliers;
    inliers.reserve(pairs.size());
    for (int i = 0; i < n; ++i)
      if (reprojection_error(model, pairs[i]) <= policy.max_reprojection_error)
        inliers.push_back(i);

    if (inliers.size() > best_inliers.size()) best_inliers = std::move(inliers);
  }

  if (best_inliers.size() < 4) {
    if (degenerate_rounds == policy.ransac_iterations)
      throw DegenerateConfigurationError(
          "all RANSAC samples were degenerate (collinear correspondences)");
    throw DegenerateConfigurationError(
        "RANSAC found no 4-point consensus within the error threshold");
  }

  // Least-squares refit on the consensus set, iterated: the refit model is
  // sharper than any 4-point sample, so re-scoring against it usually grows
  // the consensus. Stop when the inlier set stabilizes.
  RansacResult result;
  result.inlier_indices = std::move(best_inliers);
  for (int round = 0; round < 10; ++round) {
    std::vector<Correspondence> consensus;
    consensus.reserve(result.inlier_indices.size());
    for (const int i : result.inlier_indices) consensus.push_back(pairs[i]);
    result.homography = fit_homography(consensus);
    std::vector<int> rescored;
    for (int i = 0; i < n; ++i)
      if (reprojection_error(result.homography, pairs[i]) <=
          policy.max_reprojection_error)
        rescored.push_back(i);
    if (rescored.size() < 4 || rescored == result.inlier_indices) break;
    result.inlier_indices = std::move(rescored);
  }
  double err = 0.0;
  for (const int i : result.inlier_indices)
    err += reprojection_error(result.homography, pairs[i]);
  result.mean_error = err / static_cast<double>(result.inlier_indices.size());
  return result;
}

}  // namespace ledgerlens

#endif  // LEDGERLENS_RANSAC_HPP
