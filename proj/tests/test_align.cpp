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

#include "ledgerlens/align.hpp"
#include "ledgerlens/synth.hpp"

using namespace ledgerlens;

namespace {

double corner_roundtrip_error(const Homography& truth_t2s,
                              const Homography& recovered_s2t, double w,
                              double h) {
  double worst = 0.0;
  for (const PointF c : {PointF{0, 0}, PointF{w - 1, 0}, PointF{w - 1, h - 1},
                         PointF{0, h - 1}}) {
    const PointF s = truth_t2s.apply(c);
    worst = std::max(worst, distance(recovered_s2t.apply(s), c));
  }
  return worst;
}

}  // namespace

TEST_CASE("self-alignment is near-exact on the first attempt") {
  const GrayImage tmpl = synth::render_template(synth::make_default_layout());
  AlignmentPolicy policy;
  const AlignmentResult r = align_card(tmpl, tmpl, policy);
  REQUIRE(r.status == AlignmentStatus::kAligned);
  CHECK(r.attempts_used == 1);
  CHECK(r.inlier_count >= policy.min_inliers);
  CHECK(r.mean_reprojection_error < 0.5);
  REQUIRE(r.homography.has_value());
  // Corner displacement under the recovered homography stays sub-pixel.
  for (const PointF c :
       {PointF{0, 0}, PointF{999, 0}, PointF{999, 639}, PointF{0, 639}})
    CHECK(distance(r.homography->apply(c), c) < 0.5);
}

TEST_CASE("known warp with pixel noise is recovered within 2 px") {
  const auto layout = synth::make_default_layout();
  const GrayImage tmpl = synth::render_template(layout);
  AlignmentPolicy policy;
  const TemplateFeatureCache cache(tmpl, policy);

  synth::CardSpec spec;
  spec.seed = 4242;
  spec.warp.rotation_deg = 2.5;
  spec.warp.jitter_fraction = 0.02;
  spec.warp.translate_x = 15;
  spec.warp.translate_y = -10;
  spec.noise.gaussian_sigma = 4.0;
  spec.contents[{"BUILDINGS", 0}] = "3085";
  const auto [card, truth] = synth::render_card(spec);

  const AlignmentResult r = align_card(card, cache, policy);
  REQUIRE(r.status == AlignmentStatus::kAligned);
  CHECK(corner_roundtrip_error(truth.template_to_scan, *r.homography,
                               layout.template_width,
                               layout.template_height) <= 2.0);
}

TEST_CASE("uniform noise exhausts the schedule and gets flagged") {
  const GrayImage tmpl = synth::render_template(synth::make_default_layout());
  AlignmentPolicy policy;
  Rng rng(5);
  GrayImage noise(tmpl.width(), tmpl.height());
  for (auto& p : noise.pixels())
    p = static_cast<std::uint8_t>(rng.uniform_int(256));
  const AlignmentResult r = align_card(noise, tmpl, policy);
  CHECK(r.status == AlignmentStatus::kFlaggedForManualInspection);
  CHECK(r.attempts_used == 3);
  CHECK(r.inlier_count < policy.min_inliers);
}

TEST_CASE("alignment is deterministic") {
  const auto layout = synth::make_default_layout();
  const GrayImage tmpl = synth::render_template(layout);
  synth::CardSpec spec;
  spec.seed = 99;
  spec.warp.rotation_deg = -3.0;
  spec.warp.translate_x = 8;
  const auto [card, truth] = synth::render_card(spec);
  AlignmentPolicy policy;
  const AlignmentResult a = align_card(card, tmpl, policy);
  const AlignmentResult b = align_card(card, tmpl, policy);
  REQUIRE(a.status == b.status);
  CHECK(a.inlier_count == b.inlier_count);
  CHECK(a.attempts_used == b.attempts_used);
  CHECK(a.mean_reprojection_error == b.mean_reprojection_error);
  CHECK(frobenius_distance(*a.homography, *b.homography) == 0.0);
}

TEST_CASE("composition consistency on noise-free fixtures") {
  // align(A -> T) = H1 and B = warp(A, G) imply align(B -> T) ~ H1 * G^-1,
  // i.e. ||H * G - H1||_F / ||H1||_F is small.
  const auto layout = synth::make_default_layout();
  const GrayImage tmpl = synth::render_template(layout);
  AlignmentPolicy policy;
  const TemplateFeatureCache cache(tmpl, policy);

  synth::CardSpec spec;
  spec.seed = 7;
  spec.warp.rotation_deg = 1.5;
  spec.warp.translate_x = 6;
  spec.warp.translate_y = 4;
  const auto [card_a, truth_a] = synth::render_card(spec);

  const AlignmentResult ra = align_card(card_a, cache, policy);
  REQUIRE(ra.status == AlignmentStatus::kAligned);

  const Homography g =
      Homography::translation(14, -9).compose(Homography::scaling(1.0, 1.0));
  const GrayImage card_b =
      warp_perspective(card_a, g, card_a.width(), card_a.height());
  const AlignmentResult rb = align_card(card_b, cache, policy);
  REQUIRE(rb.status == AlignmentStatus::kAligned);

  const Homography composed = rb.homography->compose(g).normalize();
  const Homography h1 = *ra.homography;
  CHECK(frobenius_distance(composed, h1) / frobenius_norm(h1) < 0.05);
}

TEST_CASE("alignment result serializes to the JSONL schema") {
  AlignmentResult r;
  r.status = AlignmentStatus::kAligned;
  r.homography = Homography::translation(2, 3);
  r.inlier_count = 21;
  r.mean_reprojection_error = 0.5;
  r.attempts_used = 1;
  const auto j = alignment_to_json("doc42", r);
  CHECK(j["doc_id"] == "doc42");
  CHECK(j["status"] == "aligned");
  CHECK(j["h"].size() == 9);
  CHECK(j["inliers"] == 21);
  CHECK(j["attempts"] == 1);

  AlignmentResult flagged;
  const auto jf = alignment_to_json("doc43", flagged);
  CHECK(jf["status"] == "flagged_for_manual_inspection");
  CHECK(jf["h"].is_null());
}

TEST_CASE("policy validation rejects bad schedules") {
  AlignmentPolicy p;
  p.feature_counts = {7000, 5000};
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p.feature_counts = {};
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = AlignmentPolicy{};
  p.min_inliers = 3;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = AlignmentPolicy{};
  p.retain_fraction = 0.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
}
