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
#include <filesystem>

#include "ledgerlens/segment.hpp"
#include "ledgerlens/synth.hpp"

using namespace ledgerlens;

namespace {

Rect quad_bbox(const Quad& q) {
  double x0 = q.corners[0].x, x1 = x0, y0 = q.corners[0].y, y1 = y0;
  for (const auto& c : q.corners) {
    x0 = std::min(x0, c.x);
    x1 = std::max(x1, c.x);
    y0 = std::min(y0, c.y);
    y1 = std::max(y1, c.y);
  }
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

const TemplateLayout::Cell& find_cell(const TemplateLayout& layout,
                                      const std::string& column, int row) {
  for (const auto& c : layout.cells)
    if (c.column == column && c.row == row) return c;
  throw std::logic_error("cell not in layout");
}

}  // namespace

TEST_CASE("NCC locator finds the rendered header within 2 px") {
  const auto layout = synth::make_default_layout();
  const GrayImage tmpl = synth::render_template(layout);
  const NccHeaderLocator locator;
  const Rect r = locate_header(tmpl, "BUILDINGS", locator);

  // Expected stamp position from the template geometry.
  const auto& cell = find_cell(layout, "BUILDINGS", 0);
  const int tw = glyphs::text_width("BUILDINGS", 2);
  const double expect_x = cell.rect.x + (cell.rect.w - tw) / 2 - 1;
  const double expect_y =
      synth::kTableY + (synth::kHeaderBand - glyphs::text_height(2)) / 2 - 1;
  CHECK(std::abs(r.x - expect_x) <= 2.0);
  CHECK(std::abs(r.y - expect_y) <= 2.0);
  CHECK(std::abs(r.w - (tw + 2)) <= 2.0);
}

TEST_CASE("locator equivariance under translation") {
  const auto layout = synth::make_default_layout();
  const GrayImage tmpl = synth::render_template(layout);
  const GrayImage shifted = warp_perspective(
      tmpl, Homography::translation(30, 0), tmpl.width() + 40, tmpl.height());
  const NccHeaderLocator locator;
  const Rect a = locate_header(tmpl, "BUILDINGS", locator);
  const Rect b = locate_header(shifted, "BUILDINGS", locator);
  CHECK(std::abs(b.x - a.x - 30.0) <= 1.0);
  CHECK(std::abs(b.y - a.y) <= 1.0);
}

TEST_CASE("blank image raises HeaderNotFoundError") {
  GrayImage blank(400, 300, 255);
  const NccHeaderLocator locator;
  CHECK_THROWS_AS(locate_header(blank, "BUILDINGS", locator),
                  HeaderNotFoundError);
  CHECK_THROWS_AS(locate_header(blank, "", locator), ParameterError);
}

TEST_CASE("extract_first_cell recovers the first BUILDINGS cell") {
  const auto layout = synth::make_default_layout();
  synth::CardSpec spec;
  spec.seed = 21;
  spec.contents[{"BUILDINGS", 0}] = "3085";
  const auto [card, truth] = synth::render_card(spec);

  const NccHeaderLocator locator;
  const FirstCell cell = extract_first_cell(card, "doc21", "BUILDINGS", locator);

  const auto& gt = find_cell(layout, "BUILDINGS", 0);
  CHECK(rect_iou(quad_bbox(cell.region.quad), gt.rect) >= 0.9);
  CHECK(cell.rectified.width() == 200);
  CHECK(cell.rectified.height() == 64);
  CHECK(cell.region.row_index == 0);

  // Never above the header baseline.
  const Rect header = locate_header(card, "BUILDINGS", locator);
  for (const auto& c : cell.region.quad.corners) CHECK(c.y > header.y1());
}

TEST_CASE("card with header but no rules below fails segmentation") {
  GrayImage img(600, 400, 255);
  glyphs::stamp_text(img, "BUILDINGS", 220, 60, 2);
  const NccHeaderLocator locator;
  CHECK_THROWS_AS(
      extract_first_cell(img, "doc", "BUILDINGS", locator),
      SegmentationFailure);
}

TEST_CASE("project_layout identity maps cells onto themselves") {
  const auto layout = synth::make_default_layout();
  const auto regions =
      project_layout(layout, Homography::identity(), "doc1");
  REQUIRE(regions.size() == layout.cells.size());
  for (std::size_t i = 0; i < regions.size(); ++i) {
    CHECK(regions[i].column_name == layout.cells[i].column);
    CHECK(regions[i].row_index == layout.cells[i].row);
    const Quad expect = layout.cells[i].rect.quad();
    for (int k = 0; k < 4; ++k)
      CHECK(distance(regions[i].quad.corners[k], expect.corners[k]) < 1e-9);
  }
}

TEST_CASE("project_layout inverts a translation") {
  const auto layout = synth::make_default_layout();
  // Scan -> template translation (7, -3): scan coordinates are the template
  // ones shifted by (-7, 3).
  const auto regions =
      project_layout(layout, Homography::translation(7, -3), "doc2");
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const Quad expect = layout.cells[i].rect.quad();
    for (int k = 0; k < 4; ++k) {
      CHECK(regions[i].quad.corners[k].x ==
            Catch::Approx(expect.corners[k].x - 7).margin(1e-9));
      CHECK(regions[i].quad.corners[k].y ==
            Catch::Approx(expect.corners[k].y + 3).margin(1e-9));
    }
  }
}

TEST_CASE("project_layout rejects singular homographies") {
  Homography h;
  h.m = {{{1, 0, 0}, {2, 0, 0}, {0, 0, 1}}};
  CHECK_THROWS_AS(project_layout(synth::make_default_layout(), h, "d"),
                  SingularTransformError);
}

TEST_CASE("projected cell content round-trips through a synthetic warp") {
  const auto layout = synth::make_default_layout();
  const GrayImage tmpl = synth::render_template(layout);
  synth::CardSpec spec;
  spec.seed = 33;
  spec.warp.rotation_deg = 2.0;
  spec.warp.translate_x = 10;
  spec.warp.translate_y = 5;
  spec.contents[{"LAND", 2}] = "1200";
  const auto [card, truth] = synth::render_card(spec);

  // Use the exact ground-truth homography: scan -> template is its inverse.
  const auto regions =
      project_layout(layout, truth.template_to_scan.inverse(), "doc33");
  const auto& cell = find_cell(layout, "LAND", 2);
  const CellRegion* region = nullptr;
  for (const auto& r : regions)
    if (r.column_name == "LAND" && r.row_index == 2) region = &r;
  REQUIRE(region != nullptr);

  const int w = static_cast<int>(cell.rect.w);
  const int h = static_cast<int>(cell.rect.h);
  const GrayImage recovered = rectify_quad(card, region->quad, w, h);
  const GrayImage reference = crop(tmpl, static_cast<int>(cell.rect.x),
                                   static_cast<int>(cell.rect.y), w, h);
  // Reference is the blank template cell; re-stamp the digits the card holds.
  GrayImage expected = reference;
  const int tw = glyphs::text_width("1200", synth::kDigitScale);
  const int th = glyphs::text_height(synth::kDigitScale);
  glyphs::stamp_text(expected, "1200", (w - tw) / 2, (h - th) / 2,
                     synth::kDigitScale);

  double total = 0.0;
  for (std::size_t i = 0; i < recovered.pixels().size(); ++i)
    total += std::abs(static_cast<int>(recovered.pixels()[i]) -
                      expected.pixels()[i]);
  CHECK(total / recovered.pixels().size() <= 5.0);
}

TEST_CASE("layout JSON round trip and validation") {
  const auto layout = synth::make_default_layout();
  const auto path =
      (std::filesystem::temp_directory_path() / "ll_layout.json").string();
  layout.save(path);
  const auto loaded = TemplateLayout::load(path);
  REQUIRE(loaded.cells.size() == layout.cells.size());
  CHECK(loaded.template_width == layout.template_width);
  CHECK(loaded.cells[5].column == layout.cells[5].column);
  CHECK(loaded.cells[5].rect.x == layout.cells[5].rect.x);
  std::filesystem::remove(path);

  TemplateLayout bad = layout;
  bad.cells[1].rect = bad.cells[0].rect;  // overlap + duplicate position
  CHECK_THROWS_AS(bad.validate(), SchemaError);
}

TEST_CASE("segmentation summary reconciles") {
  SegmentationSummary s;
  s.attempted = 200;
  s.segmented = 178;
  s.failed = 22;
  s.failure_ids = {"d1", "d2"};
  CHECK(s.attempted == s.segmented + s.failed);
  CHECK(s.success_rate_percent() == 89.0);
  const auto j = s.to_json();
  CHECK(j["attempted"] == 200);
  CHECK(j["failed"] == 22);
}
