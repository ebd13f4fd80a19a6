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

#ifndef LEDGERLENS_MATCHING_HPP
#define LEDGERLENS_MATCHING_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ledgerlens/errors.hpp"
#include "ledgerlens/features.hpp"

namespace ledgerlens {

struct FeatureMatch {
  int template_index = 0;
  int scan_index = 0;
  int distance = 0;  // Hamming bit count, 0..256
};

/// Brute-force nearest neighbour per template descriptor under Hamming
/// distance, sorted ascending by distance; the best ceil(retain_fraction * n)
/// are returned. Ties break on template index so results are reproducible.
inline std::vector<FeatureMatch> match_descriptors(
    std::span<const Feature> template_set, std::span<const Feature> scan_set,
    double retain_fraction) {
  if (template_set.empty() || scan_set.empty())
    throw NoFeaturesError("match_descriptors: empty feature set");
  if (!(retain_fraction > 0.0 && retain_fraction <= 1.0))
    throw ParameterError("retain_fraction must be in (0, 1]");

  std::vector<FeatureMatch> matches;
  matches.reserve(template_set.size());
  for (std::size_t ti = 0; ti < template_set.size(); ++ti) {
    int best = 257, best_j = 0;
    const auto& td = template_set[ti].descriptor;
    for (std::size_t sj = 0; sj < scan_set.size(); ++sj) {
      const int d = td.hamming(scan_set[sj].descriptor);
      if (d < best) {
        best = d;
        best_j = static_cast<int>(sj);
      }
    }
    matches.push_back({static_cast<int>(ti), best_j, best});
  }
  std::sort(matches.begin(), matches.end(),
            [](const FeatureMatch& a, const FeatureMatch& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              return a.template_index < b.template_index;
            });
  const std::size_t keep = static_cast<std::size_t>(std::ceil(
      retain_fraction * static_cast<double>(matches.size())));
  matches.resize(std::min(matches.size(), std::max<std::size_t>(keep, 1)));
  return matches;
}

struct Dims {
  int width = 0;
  int height = 0;
};

inline int quadrant_of(const PointF& p, const Dims& dims) {
  const double cx = dims.width / 2.0;
  const double cy = dims.height / 2.0;
  return (p.x >= cx ? 1 : 0) + (p.y >= cy ? 2 : 0);
}

/// A match survives iff both endpoints land in the same quadrant of a 2x2
/// partition of their own image about its centre. Gross mismatches across
/// the card cannot survive this even when descriptors collide.
inline std::vector<FeatureMatch> quadrant_filter(
    std::span<const FeatureMatch> matches,
    std::span<const Feature> template_set, std::span<const Feature> scan_set,
    const Dims& template_dims, const Dims& scan_dims) {
  std::vector<FeatureMatch> kept;
  kept.reserve(matches.size());
  for (const auto& m : matches) {
    const PointF& tp = template_set[m.template_index].keypoint.position;
    const PointF& sp = scan_set[m.scan_index].keypoint.position;
    if (quadrant_of(tp, template_dims) == quadrant_of(sp, scan_dims))
      kept.push_back(m);
  }
  return kept;
}

}  // namespace ledgerlens

#endif  // LEDGERLENS_MATCHING_HPP
