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

#ifndef LEDGERLENS_ALIGN_HPP
#define LEDGERLENS_ALIGN_HPP

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ledgerlens/features.hpp"
#include "ledgerlens/matching.hpp"
#include "ledgerlens/ransac.hpp"

namespace ledgerlens {

enum class AlignmentStatus { kAligned, kFlaggedForManualInspection };

/// Outcome of registering one scan against the reference template. When
/// status is Aligned, `homography` maps scan coordinates to template
/// coordinates and `inlier_count` met the policy threshold.
struct AlignmentResult {
  AlignmentStatus status = AlignmentStatus::kFlaggedForManualInspection;
  std::optional<Homography> homography;
  int inlier_count = 0;
  double mean_reprojection_error = 0.0;
  int attempts_used = 0;
};

/// Reference-template features for one budget tier, computed once and shared
/// read-only by any number of concurrent alignment tasks.
class TemplateFeatureCache {
 public:
  TemplateFeatureCache(const GrayImage& template_img,
                       const AlignmentPolicy& policy) {
    dims_ = Dims{template_img.width(), template_img.height()};
    for (const int count : policy.feature_counts)
      tiers_.push_back(detect_and_describe(template_img, count));
  }

  const std::vector<Feature>& tier(std::size_t attempt) const {
    return tiers_[attempt];
  }
  const Dims& dims() const { return dims_; }

 private:
  Dims dims_;
  std::vector<std::vector<Feature>> tiers_;
};

/// Runs match / quadrant-filter / RANSAC at escalating feature budgets until
/// the inlier threshold is met. Failure is a status, not an exception: cards
/// that exhaust the schedule come back flagged for manual inspection with the
/// best attempt's statistics.
inline AlignmentResult align_card(const GrayImage& scan,
                                  const TemplateFeatureCache& cache,
                                  const AlignmentPolicy& policy) {
  policy.validate();
  AlignmentResult best;
  const Dims scan_dims{scan.width(), scan.height()};

  for (std::size_t attempt = 0; attempt < policy.feature_counts.size();
       ++attempt) {
    const int budget = policy.feature_counts[attempt];
    std::vector<Feature> scan_features;
    try {
      scan_features = detect_and_describe(scan, budget);
    } catch (const Error&) {
      continue;  // undersized or featureless scan: count the attempt and go on
    }
    const auto& template_features = cache.tier(attempt);
    if (scan_features.empty() || template_features.empty()) continue;

    std::vector<FeatureMatch> matches;
    try {
      matches = match_descriptors(template_features, scan_features,
                                  policy.retain_fraction);
    } catch (const NoFeaturesError&) {
      continue;
    }
    matches = quadrant_filter(matches, template_features, scan_features,
                              cache.dims(), scan_dims);
    if (matches.size() < 4) continue;

    // Correspondences run scan -> template so the recovered homography maps
    // scan coordinates into the template frame.
    std::vector<Correspondence> pairs;
    pairs.reserve(matches.size());
    for (const auto& m : matches)
      pairs.push_back(Correspondence{
          scan_features[m.scan_index].keypoint.position,
          template_features[m.template_index].keypoint.position});

    RansacResult fit;
    try {
      fit = estimate_homography_ransac(pairs, policy);
    } catch (const Error&) {
      continue;
    }

    const int inliers = static_cast<int>(fit.inlier_indices.size());
    if (inliers >= policy.min_inliers) {
      AlignmentResult ok;
      ok.status = AlignmentStatus::kAligned;
      ok.homography = fit.homography;
      ok.inlier_count = inliers;
      ok.mean_reprojection_error = fit.mean_error;
      ok.attempts_used = static_cast<int>(attempt) + 1;
      return ok;
    }
    if (inliers > best.inlier_count) {
      best.homography = fit.homography;
      best.inlier_count = inliers;
      best.mean_reprojection_error = fit.mean_error;
    }
  }

  best.status = AlignmentStatus::kFlaggedForManualInspection;
  best.attempts_used = static_cast<int>(policy.feature_counts.size());
  if (best.inlier_count == 0) best.homography.reset();
  return best;
}

inline AlignmentResult align_card(const GrayImage& scan,
                                  const GrayImage& template_img,
                                  const AlignmentPolicy& policy) {
  return align_card(scan, TemplateFeatureCache(template_img, policy), policy);
}

/// One JSON-lines record per document for the run log.
inline nlohmann::json alignment_to_json(const std::string& doc_id,
                                        const AlignmentResult& r) {
  nlohmann::json j;
  j["doc_id"] = doc_id;
  j["status"] = r.status == AlignmentStatus::kAligned
                    ? "aligned"
                    : "flagged_for_manual_inspection";
  if (r.homography) {
    const auto f = r.homography->flat();
    j["h"] = std::vector<double>(f.begin(), f.end());
  } else {
    j["h"] = nullptr;
  }
  j["inliers"] = r.inlier_count;
  j["mean_err"] = r.mean_reprojection_error;
  j["attempts"] = r.attempts_used;
  return j;
}

}  // namespace ledgerlens

#endif  // LEDGERLENS_ALIGN_HPP
