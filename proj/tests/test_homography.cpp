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

#include <catch2/catch_amalgamated.hpp>

#include "ledgerlens/ransac.hpp"
#include "ledgerlens/rng.hpp"
#include "oracles.hpp"

using namespace ledgerlens;

TEST_CASE("fit_homography recovers a unit-square scaling exactly") {
  const std::vector<Correspondence> pairs = {
      {{0, 0}, {0, 0}}, {{1, 0}, {2, 0}}, {{1, 1}, {2, 2}}, {{0, 1}, {0, 2}}};
  const Homography h = fit_homography(pairs);
  CHECK(h.m[0][0] == Catch::Approx(2.0).margin(1e-12));
  CHECK(h.m[1][1] == Catch::Approx(2.0).margin(1e-12));
  CHECK(h.m[2][2] == Catch::Approx(1.0).margin(1e-12));
  CHECK(h.m[0][1] == Catch::Approx(0.0).margin(1e-12));
  CHECK(h.m[0][2] == Catch::Approx(0.0).margin(1e-12));
  CHECK(h.m[1][0] == Catch::Approx(0.0).margin(1e-12));
  CHECK(h.m[1][2] == Catch::Approx(0.0).margin(1e-12));
  CHECK(h.m[2][0] == Catch::Approx(0.0).margin(1e-12));
  CHECK(h.m[2][1] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("homography inverse and compose") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<PointF, 4> src = {PointF{0, 0}, PointF{100, 0}, PointF{100, 80},
                                 PointF{0, 80}};
    std::array<PointF, 4> dst;
    for (int i = 0; i < 4; ++i)
      dst[i] = PointF{src[i].x + rng.uniform(-10, 10),
                      src[i].y + rng.uniform(-10, 10)};
    const Homography h = homography_from_quad(src, dst);
    const Homography round = h.compose(h.inverse()).normalize();
    CHECK(frobenius_distance(round, Homography::identity()) < 1e-9);
  }
}

TEST_CASE("RANSAC with 4 exact pairs returns the forced model") {
  const std::vector<Correspondence> pairs = {
      {{0, 0}, {0, 0}}, {{1, 0}, {2, 0}}, {{1, 1}, {2, 2}}, {{0, 1}, {0, 2}}};
  AlignmentPolicy policy;
  policy.min_inliers = 4;
  const RansacResult r = estimate_homography_ransac(pairs, policy);
  CHECK(r.inlier_indices.size() == 4);
  CHECK(r.homography.m[0][0] == Catch::Approx(2.0).margin(1e-9));
  CHECK(r.homography.m[1][1] == Catch::Approx(2.0).margin(1e-9));
  CHECK(r.homography.m[2][2] == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("RANSAC identifies outliers against an identity model") {
  Rng rng(31);
  std::vector<Correspondence> pairs;
  for (int i = 0; i < 20; ++i) {
    const PointF p{rng.uniform(0, 200), rng.uniform(0, 150)};
    pairs.push_back({p, p});
  }
  for (int i = 0; i < 5; ++i) {
    const PointF p{rng.uniform(0, 200), rng.uniform(0, 150)};
    const PointF q{rng.uniform(0, 200), rng.uniform(101, 149)};
    pairs.push_back({p, PointF{q.x, p.y > 75 ? p.y - 70 : p.y + 70}});
  }
  AlignmentPolicy policy;
  const RansacResult r = estimate_homography_ransac(pairs, policy);
  CHECK(r.inlier_indices.size() == 20);
  for (int i = 0; i < 20; ++i)
    CHECK(std::find(r.inlier_indices.begin(), r.inlier_indices.end(), i) !=
          r.inlier_indices.end());
  CHECK(r.mean_error < 1e-6);
  CHECK(frobenius_distance(r.homography, Homography::identity()) < 1e-6);
}

TEST_CASE("RANSAC error contracts") {
  const std::vector<Correspondence> three = {
      {{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{0, 1}, {0, 1}}};
  CHECK_THROWS_AS(estimate_homography_ransac(three, AlignmentPolicy{}),
                  InsufficientCorrespondencesError);

  // Every sample of 4 collinear points is degenerate.
  std::vector<Correspondence> collinear;
  for (int i = 0; i < 8; ++i)
    collinear.push_back({{static_cast<double>(i), 2.0 * i},
                         {static_cast<double>(i), 2.0 * i}});
  CHECK_THROWS_AS(estimate_homography_ransac(collinear, AlignmentPolicy{}),
                  DegenerateConfigurationError);
}

TEST_CASE("RANSAC is deterministic for a fixed seed") {
  Rng rng(77);
  std::vector<Correspondence> pairs;
  for (int i = 0; i < 30; ++i) {
    const PointF p{rng.uniform(0, 300), rng.uniform(0, 200)};
    pairs.push_back({p, PointF{p.x + 5, p.y - 3}});
  }
  for (int i = 0; i < 6; ++i)
    pairs.push_back({{rng.uniform(0, 300), rng.uniform(0, 200)},
                     {rng.uniform(0, 300), rng.uniform(0, 200)}});
  AlignmentPolicy policy;
  policy.seed = 99;
  const RansacResult a = estimate_homography_ransac(pairs, policy);
  const RansacResult b = estimate_homography_ransac(pairs, policy);
  CHECK(a.inlier_indices == b.inlier_indices);
  CHECK(frobenius_distance(a.homography, b.homography) == 0.0);
}

TEST_CASE("RANSAC matches the exhaustive 4-subset oracle on small instances") {
  // Desk-scale oracle equivalence: <= 12 correspondences, <= 3 outliers,
  // inlier sets identical and refits within 1e-6 relative Frobenius error.
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed);
    const auto instance = oracles::random_ransac_instance(rng);

    AlignmentPolicy policy;
    policy.min_inliers = 4;
    policy.seed = seed * 13 + 1;
    const RansacResult fast =
        estimate_homography_ransac(instance.pairs, policy);
    const auto brute = oracles::brute_force_consensus(
        instance.pairs, policy.max_reprojection_error);

    REQUIRE(fast.inlier_indices == brute.inlier_indices);

    const Homography refit_brute = oracles::least_squares_refit(
        instance.pairs, brute.inlier_indices);
    const double rel = frobenius_distance(fast.homography, refit_brute) /
                       frobenius_norm(refit_brute);
    CHECK(rel < 1e-6);
  }
}
