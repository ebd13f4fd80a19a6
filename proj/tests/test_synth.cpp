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
#include <numbers>

#include "ledgerlens/synth.hpp"

using namespace ledgerlens;

TEST_CASE("zero warp and noise: ground-truth quads equal layout rects") {
  synth::CardSpec spec;
  spec.seed = 1;
  spec.contents[{"BUILDINGS", 0}] = "4100";
  const auto [card, truth] = synth::render_card(spec);
  CHECK(card.width() == spec.layout.template_width);
  for (std::size_t i = 0; i < truth.cells.size(); ++i) {
    const Quad expect = spec.layout.cells[i].rect.quad();
    for (int k = 0; k < 4; ++k)
      CHECK(distance(truth.cells[i].quad.corners[k], expect.corners[k]) <
            1e-6);
  }
}

TEST_CASE("known rotation: quads equal layout corners under the rotation") {
  synth::CardSpec spec;
  spec.seed = 2;
  spec.warp.rotation_deg = 3.0;
  const auto [card, truth] = synth::render_card(spec);

  const double theta = 3.0 * std::numbers::pi / 180.0;
  const double cx = spec.layout.template_width / 2.0;
  const double cy = spec.layout.template_height / 2.0;
  for (std::size_t i = 0; i < truth.cells.size(); ++i) {
    const Quad rect = spec.layout.cells[i].rect.quad();
    for (int k = 0; k < 4; ++k) {
      const PointF p = rect.corners[k];
      const PointF rotated{
          std::cos(theta) * (p.x - cx) - std::sin(theta) * (p.y - cy) + cx,
          std::sin(theta) * (p.x - cx) + std::cos(theta) * (p.y - cy) + cy};
      CHECK(distance(truth.cells[i].quad.corners[k], rotated) < 1e-6);
    }
  }
}

TEST_CASE("same seed renders byte-identical cards") {
  synth::CardSpec spec;
  spec.seed = 77;
  spec.warp.rotation_deg = 2.0;
  spec.warp.jitter_fraction = 0.02;
  spec.noise.salt_pepper_fraction = 0.02;
  spec.noise.brightness_gradient = 20;
  spec.contents[{"TOTAL", 1}] = "5230";
  const auto [a, truth_a] = synth::render_card(spec);
  const auto [b, truth_b] = synth::render_card(spec);
  CHECK(a == b);
  CHECK(frobenius_distance(truth_a.template_to_scan,
                           truth_b.template_to_scan) == 0.0);
}

TEST_CASE("ground truth is consistent with the rendered image") {
  // Re-sample the stamped digit region through the ground-truth homography:
  // it must contain ink; a blank cell must not.
  synth::CardSpec spec;
  spec.seed = 5;
  spec.warp.rotation_deg = 2.0;
  spec.warp.translate_x = 9;
  spec.contents[{"BUILDINGS", 0}] = "888";
  const auto [card, truth] = synth::render_card(spec);

  const auto check_cell = [&](const std::string& col, int row, bool expect_ink) {
    for (const auto& cell : truth.cells) {
      if (cell.column != col || cell.row != row) continue;
      const GrayImage patch = rectify_quad(card, cell.quad, 160, 32);
      int dark = 0;
      // Interior only: the border rules are shared with neighbours.
      for (int y = 6; y < 26; ++y)
        for (int x = 6; x < 154; ++x)
          if (patch.at(x, y) < 100) ++dark;
      if (expect_ink)
        CHECK(dark > 50);
      else
        CHECK(dark < 10);
    }
  };
  check_cell("BUILDINGS", 0, true);
  check_cell("BUILDINGS", 1, false);
  check_cell("LAND", 0, false);
}

TEST_CASE("card contents reject non-digit strings") {
  synth::CardSpec spec;
  spec.contents[{"BUILDINGS", 0}] = "12a4";
  CHECK_THROWS_AS(synth::render_card(spec), SchemaError);
}

TEST_CASE("generate_parcels is deterministic and writes consistent tables") {
  synth::SynthParcelSpec spec;
  spec.seed = 11;
  spec.n = 500;
  const auto a = synth::generate_parcels(spec);
  const auto b = synth::generate_parcels(spec);
  REQUIRE(a.features.rows.size() == 500);
  CHECK(a.features.rows == b.features.rows);
  CHECK(a.labels.rows == b.labels.rows);
  CHECK(a.tracts.rows.size() == 20);
  CHECK(a.parcel_tract.rows.size() == 500);

  // Labels exist exactly for parcels whose card is present.
  std::size_t missing = 0;
  for (const bool m : a.card_missing) missing += m;
  CHECK(a.labels.rows.size() == 500 - missing);
  CHECK(missing > 0);
}

TEST_CASE("noiseless labels reproduce the valuation function") {
  synth::SynthParcelSpec spec;
  spec.seed = 3;
  spec.n = 50;
  spec.noise_sigma = 0.0;
  const auto data = synth::generate_parcels(spec);
  const int grade_col = data.features.column("grade");
  const int total_col = data.features.column("total_sqft");
  const int rooms_col = data.features.column("rooms");
  const int fire_col = data.features.column("fireplaces");
  const int garage_col = data.features.column("garage_capacity");

  std::size_t li = 0;
  for (std::size_t i = 0; i < data.features.rows.size(); ++i) {
    if (data.card_missing[i]) continue;
    const auto& row = data.features.rows[i];
    int grade_idx = 0;
    for (std::size_t g = 0; g < synth::grade_names().size(); ++g)
      if (synth::grade_names()[g] == row[grade_col])
        grade_idx = static_cast<int>(g);
    const double expect = synth::grade_rate(grade_idx) *
                              std::stod(row[total_col]) +
                          150.0 * std::stod(row[rooms_col]) +
                          200.0 * std::stod(row[fire_col]) +
                          250.0 * std::stod(row[garage_col]);
    const double label = std::stod(data.labels.rows[li][1]);
    CHECK(std::abs(label - std::max(expect, 100.0)) <= 0.5 + 0.051 * 0);
    ++li;
  }
}

TEST_CASE("shifted mechanism moves the flagged group's floor1 sqft") {
  synth::SynthParcelSpec spec;
  spec.seed = 9;
  spec.n = 2000;
  spec.mechanism = synth::MissingMechanism::kShifted;
  const auto data = synth::generate_parcels(spec);
  const int col = data.features.column("floor1_sqft");
  double mean_present = 0, mean_missing = 0;
  int n_present = 0, n_missing = 0;
  for (std::size_t i = 0; i < data.features.rows.size(); ++i) {
    const double v = std::stod(data.features.rows[i][col]);
    if (data.card_missing[i]) {
      mean_missing += v;
      ++n_missing;
    } else {
      mean_present += v;
      ++n_present;
    }
  }
  mean_present /= n_present;
  mean_missing /= n_missing;
  const double sd = 800.0 / std::sqrt(12.0);
  CHECK(mean_missing - mean_present > 2.0 * sd);  // target is 3 sd
}
