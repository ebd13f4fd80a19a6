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

#ifndef LEDGERLENS_SYNTH_HPP
#define LEDGERLENS_SYNTH_HPP

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ledgerlens/csv.hpp"
#include "ledgerlens/glyphs.hpp"
#include "ledgerlens/homography.hpp"
#include "ledgerlens/image.hpp"
#include "ledgerlens/rng.hpp"
#include "ledgerlens/segment.hpp"
#include "ledgerlens/warp.hpp"

namespace ledgerlens {
namespace synth {

// Deterministic stand-ins for the unavailable county scans: a rendered card
// template with a ground-truthed warp, and a parcel feature table driven by
// a cost-manual style valuation function. Everything is a pure function of
// the seed.

constexpr int kTemplateWidth = 1000;
constexpr int kTemplateHeight = 640;
constexpr int kTableX = 80;
constexpr int kTableY = 220;
constexpr int kHeaderBand = 28;
constexpr int kRowHeight = 32;
constexpr int kRows = 8;
constexpr int kDigitScale = 3;

inline const std::vector<std::pair<std::string, int>>& columns() {
  static const std::vector<std::pair<std::string, int>> cols = {
      {"DATE", 120}, {"LAND", 160}, {"BUILDINGS", 160}, {"TOTAL", 160}};
  return cols;
}

/// Cell rectangles keyed by (column, row); edges sit exactly on the printed
/// rule centerlines.
inline TemplateLayout make_default_layout() {
  TemplateLayout layout;
  layout.template_width = kTemplateWidth;
  layout.template_height = kTemplateHeight;
  int x = kTableX;
  for (const auto& [name, width] : columns()) {
    for (int r = 0; r < kRows; ++r) {
      layout.cells.push_back({name, r,
                              Rect{static_cast<double>(x),
                                   static_cast<double>(kTableY + kHeaderBand +
                                                       r * kRowHeight),
                                   static_cast<double>(width),
                                   static_cast<double>(kRowHeight)}});
    }
    x += width;
  }
  layout.validate();
  return layout;
}

inline void draw_hline(GrayImage& img, int x0, int x1, int y) {
  if (y < 0 || y >= img.height()) return;
  for (int x = std::max(0, x0); x <= std::min(img.width() - 1, x1); ++x)
    img.at(x, y) = 0;
}

inline void draw_vline(GrayImage& img, int y0, int y1, int x) {
  if (x < 0 || x >= img.width()) return;
  for (int y = std::max(0, y0); y <= std::min(img.height() - 1, y1); ++y)
    img.at(x, y) = 0;
}

/// The blank reference card: table grid, printed headers, and enough fixed
/// text furniture for feature matching to latch onto.
inline GrayImage render_template(const TemplateLayout& layout) {
  GrayImage img(layout.template_width, layout.template_height, 255);

  // Border, corner registration marks and masthead.
  draw_hline(img, 8, layout.template_width - 9, 8);
  draw_hline(img, 8, layout.template_width - 9, layout.template_height - 9);
  draw_vline(img, 8, layout.template_height - 9, 8);
  draw_vline(img, 8, layout.template_height - 9, layout.template_width - 9);
  for (const auto& [mx, my] : std::vector<std::pair<int, int>>{
           {26, 26},
           {layout.template_width - 27, 26},
           {26, layout.template_height - 27},
           {layout.template_width - 27, layout.template_height - 27}}) {
    draw_hline(img, mx - 9, mx + 9, my);
    draw_vline(img, my - 9, my + 9, mx);
    draw_hline(img, mx - 4, mx + 4, my - 5);
    draw_hline(img, mx - 4, mx + 4, my + 5);
  }
  glyphs::stamp_text(img, "COUNTY AUDITOR PROPERTY RECORD", 60, 40, 3);
  glyphs::stamp_text(img, "APPRAISED VALUATIONS", 60, 90, 2);
  glyphs::stamp_text(img, "OWNER", 60, 130, 2);
  draw_hline(img, 130, 560, 142);
  glyphs::stamp_text(img, "LOT NO", 600, 130, 2);
  draw_hline(img, 690, 860, 142);
  glyphs::stamp_text(img, "BOOK", 60, 165, 2);
  draw_hline(img, 120, 250, 177);
  glyphs::stamp_text(img, "PLAT", 290, 165, 2);
  draw_hline(img, 350, 480, 177);
  glyphs::stamp_text(img, "PARCEL", 520, 165, 2);
  draw_hline(img, 610, 740, 177);
  glyphs::stamp_text(img, "FORM 102-A REV 1931", 60,
                     layout.template_height - 40, 2);
  glyphs::stamp_text(img, "SEE REVERSE SIDE FOR TRANSFERS", 400,
                     layout.template_height - 40, 2);
  glyphs::stamp_text(img, "DO NOT WRITE BELOW THIS LINE", 620, 560, 2);
  glyphs::stamp_text(img, "WARD", 880, 90, 2);
  glyphs::stamp_text(img, "DIST", 880, 130, 2);
  glyphs::stamp_text(img, "ENTER AMOUNTS IN DOLLARS ONLY", 80, 580, 2);
  glyphs::stamp_text(img, "ASSESSOR", 80, 540, 2);
  draw_hline(img, 200, 420, 552);

  // Table grid: 1 px rules on the layout edges.
  int table_w = 0;
  for (const auto& [name, width] : columns()) table_w += width;
  const int x1 = kTableX + table_w;
  const int y_bottom = kTableY + kHeaderBand + kRows * kRowHeight;
  draw_hline(img, kTableX, x1, kTableY);
  draw_hline(img, kTableX, x1, kTableY + kHeaderBand);
  for (int r = 1; r <= kRows; ++r)
    draw_hline(img, kTableX, x1, kTableY + kHeaderBand + r * kRowHeight);
  int x = kTableX;
  draw_vline(img, kTableY, y_bottom, x);
  for (const auto& [name, width] : columns()) {
    x += width;
    draw_vline(img, kTableY, y_bottom, x);
  }

  // Printed column headers centered in the header band.
  x = kTableX;
  for (const auto& [name, width] : columns()) {
    const int tw = glyphs::text_width(name, 2);
    glyphs::stamp_text(img, name, x + (width - tw) / 2,
                       kTableY + (kHeaderBand - glyphs::text_height(2)) / 2,
                       2);
    x += width;
  }
  return img;
}

struct WarpSpec {
  double rotation_deg = 0.0;       // exact rotation about the card centre
  double jitter_fraction = 0.0;    // per-corner jitter, fraction of width
  double translate_x = 0.0;
  double translate_y = 0.0;
};

struct NoiseSpec {
  double salt_pepper_fraction = 0.0;
  double brightness_gradient = 0.0;  // +/- amplitude across the width
  double gaussian_sigma = 0.0;
};

struct CardSpec {
  std::uint64_t seed = 0;
  TemplateLayout layout = make_default_layout();
  std::map<std::pair<std::string, int>, std::string> contents;
  WarpSpec warp;
  NoiseSpec noise;
  bool perturb_glyphs = false;  // jitter/thicken stamped digits
};

struct CellTruth {
  std::string column;
  int row = 0;
  Quad quad;  // post-warp source coordinates
  std::string text;
};

struct CardGroundTruth {
  Homography template_to_scan;
  std::vector<CellTruth> cells;

  nlohmann::json to_json() const {
    nlohmann::json j;
    const auto f = template_to_scan.flat();
    j["template_to_scan"] = std::vector<double>(f.begin(), f.end());
    j["cells"] = nlohmann::json::array();
    for (const auto& c : cells) {
      nlohmann::json quad = nlohmann::json::array();
      for (const auto& p : c.quad.corners) quad.push_back({p.x, p.y});
      j["cells"].push_back({{"column", c.column},
                            {"row", c.row},
                            {"quad", quad},
                            {"text", c.text}});
    }
    return j;
  }
};

inline Homography warp_homography(const CardSpec& spec) {
  Rng rng = Rng::derive(spec.seed, "warp");
  const double w = spec.layout.template_width;
  const double h = spec.layout.template_height;
  const double theta = spec.warp.rotation_deg * std::numbers::pi / 180.0;
  const double cx = w / 2.0, cy = h / 2.0;
  const double jitter = spec.warp.jitter_fraction * w;

  const std::array<PointF, 4> src = {PointF{0, 0}, PointF{w - 1, 0},
                                     PointF{w - 1, h - 1}, PointF{0, h - 1}};
  std::array<PointF, 4> dst;
  for (int i = 0; i < 4; ++i) {
    const double rx = std::cos(theta) * (src[i].x - cx) -
                      std::sin(theta) * (src[i].y - cy) + cx;
    const double ry = std::sin(theta) * (src[i].x - cx) +
                      std::cos(theta) * (src[i].y - cy) + cy;
    const double jx = jitter > 0.0 ? rng.uniform(-jitter, jitter) : 0.0;
    const double jy = jitter > 0.0 ? rng.uniform(-jitter, jitter) : 0.0;
    dst[i] = PointF{rx + jx + spec.warp.translate_x,
                    ry + jy + spec.warp.translate_y};
  }
  return homography_from_quad(src, dst);
}

/// Renders the card described by `spec` and the exactly-consistent ground
/// truth: grid plus headers, stamped digit strings, the warp, then noise.
inline std::pair<GrayImage, CardGroundTruth> render_card(const CardSpec& spec) {
  GrayImage flat = render_template(spec.layout);

  Rng stamp_rng = Rng::derive(spec.seed, "stamps");
  for (const auto& [key, text] : spec.contents) {
    const auto& [column, row] = key;
    const TemplateLayout::Cell* cell = nullptr;
    for (const auto& c : spec.layout.cells)
      if (c.column == column && c.row == row) cell = &c;
    if (!cell) throw SchemaError("card contents reference unknown cell " + column);
    for (const char ch : text)
      if (ch < '0' || ch > '9')
        throw SchemaError("card contents must be digit strings");
    const int tw = glyphs::text_width(text, kDigitScale);
    const int th = glyphs::text_height(kDigitScale);
    const int x = static_cast<int>(cell->rect.x) +
                  (static_cast<int>(cell->rect.w) - tw) / 2;
    const int y = static_cast<int>(cell->rect.y) +
                  (static_cast<int>(cell->rect.h) - th) / 2;
    if (spec.perturb_glyphs) {
      const bool thicken = stamp_rng.bernoulli(0.5);
      glyphs::stamp_text_perturbed(flat, text, x, y, kDigitScale, stamp_rng, 1,
                                   thicken);
    } else {
      glyphs::stamp_text(flat, text, x, y, kDigitScale);
    }
  }

  const Homography h = warp_homography(spec);
  GrayImage card =
      (spec.warp.rotation_deg == 0.0 && spec.warp.jitter_fraction == 0.0 &&
       spec.warp.translate_x == 0.0 && spec.warp.translate_y == 0.0)
          ? flat
          : warp_perspective(flat, h, spec.layout.template_width,
                             spec.layout.template_height);

  Rng noise_rng = Rng::derive(spec.seed, "noise");
  if (spec.noise.brightness_gradient != 0.0) {
    for (int y = 0; y < card.height(); ++y)
      for (int x = 0; x < card.width(); ++x) {
        const double ramp = spec.noise.brightness_gradient *
                            (2.0 * x / card.width() - 1.0);
        card.at(x, y) = static_cast<std::uint8_t>(
            std::clamp(std::lround(card.at(x, y) + ramp), 0L, 255L));
      }
  }
  if (spec.noise.gaussian_sigma > 0.0) {
    for (auto& p : card.pixels())
      p = static_cast<std::uint8_t>(std::clamp(
          std::lround(p + noise_rng.normal(0.0, spec.noise.gaussian_sigma)),
          0L, 255L));
  }
  if (spec.noise.salt_pepper_fraction > 0.0) {
    for (auto& p : card.pixels())
      if (noise_rng.bernoulli(spec.noise.salt_pepper_fraction))
        p = noise_rng.bernoulli(0.5) ? 0 : 255;
  }

  CardGroundTruth truth;
  truth.template_to_scan = h;
  for (const auto& cell : spec.layout.cells) {
    CellTruth t;
    t.column = cell.column;
    t.row = cell.row;
    const Quad rq = cell.rect.quad();
    for (int i = 0; i < 4; ++i) t.quad.corners[i] = h.apply(rq.corners[i]);
    const auto it = spec.contents.find({cell.column, cell.row});
    t.text = it == spec.contents.end() ? "" : it->second;
    truth.cells.push_back(t);
  }
  return {std::move(card), std::move(truth)};
}

// ---------------------------------------------------------------------------
// Synthetic parcel feature data with a cost-manual style valuation function.

enum class MissingMechanism { kMar, kShifted };

struct SynthParcelSpec {
  std::uint64_t seed = 0;
  int n = 1000;
  double noise_sigma = 300.0;  // dollars, on top of the valuation function
  double missing_rate = 0.15;
  MissingMechanism mechanism = MissingMechanism::kMar;
  double shift_sigmas = 3.0;  // separation of the shifted mechanism
  int n_tracts = 20;

  void validate() const {
    if (n < 1) throw ParameterError("n must be >= 1");
    if (missing_rate < 0.0 || missing_rate >= 1.0)
      throw ParameterError("missing_rate must be in [0, 1)");
  }
};

struct ParcelDataset {
  CsvTable features;      // parcel_id + feature columns
  CsvTable labels;        // only parcels whose card exists
  CsvTable tracts;        // tract_id + socio-demographic variables
  CsvTable parcel_tract;  // parcel_id,tract_id
  std::vector<bool> card_missing;  // aligned with features.rows

  void write(const std::string& dir) const {
    write_csv(features, dir + "/features.csv");
    write_csv(labels, dir + "/labels.csv");
    write_csv(tracts, dir + "/tracts.csv");
    write_csv(parcel_tract, dir + "/parcel_tract.csv");
  }
};

inline const std::vector<std::string>& grade_names() {
  static const std::vector<std::string> grades = {"Poor", "Fair", "Average",
                                                  "Good", "Excellent"};
  return grades;
}

inline double grade_rate(int grade_idx) {
  static constexpr double kRates[] = {1.2, 1.8, 2.2, 2.8, 3.4};  // $/sqft
  return kRates[grade_idx];
}

inline const std::vector<std::string>& wall_names() {
  static const std::vector<std::string> walls = {"Frame", "Brick", "Stone",
                                                 "Stucco"};
  return walls;
}

/// Feature draw + valuation for one parcel. The valuation is piecewise by
/// grade with additive terms for rooms, fireplaces and garage capacity, the
/// shape of the printed cost tables the historical assessors worked from.
struct ParcelDraw {
  int grade, wall, rooms, fireplaces, garage;
  double floor1, floor2, attic, basement, half_floor, total;
  int year_built;
  double value;
};

inline ParcelDraw draw_parcel(Rng& rng, double noise_sigma) {
  ParcelDraw p;
  p.grade = static_cast<int>(rng.uniform_int(grade_names().size()));
  p.wall = static_cast<int>(rng.uniform_int(wall_names().size()));
  p.rooms = 3 + static_cast<int>(rng.uniform_int(8));
  p.fireplaces = static_cast<int>(rng.uniform_int(3));
  p.garage = static_cast<int>(rng.uniform_int(4));
  p.floor1 = 400.0 + rng.uniform() * 800.0;
  p.floor2 = rng.bernoulli(0.6) ? 200.0 + rng.uniform() * 600.0 : 0.0;
  p.attic = rng.bernoulli(0.4) ? 100.0 + rng.uniform() * 300.0 : 0.0;
  p.basement = rng.bernoulli(0.7) ? 200.0 + rng.uniform() * 400.0 : 0.0;
  p.half_floor = rng.bernoulli(0.2) ? 100.0 + rng.uniform() * 200.0 : 0.0;
  p.total = p.floor1 + p.floor2 + p.attic + p.basement + p.half_floor;
  p.year_built = 1890 + static_cast<int>(rng.uniform_int(40));
  const double base = grade_rate(p.grade) * p.total;
  const double adders =
      150.0 * p.rooms + 200.0 * p.fireplaces + 250.0 * p.garage;
  p.value = base + adders + (noise_sigma > 0 ? rng.normal(0, noise_sigma) : 0);
  if (p.value < 100.0) p.value = 100.0;
  return p;
}

inline ParcelDataset generate_parcels(const SynthParcelSpec& spec) {
  spec.validate();
  Rng rng = Rng::derive(spec.seed, "parcels");

  ParcelDataset data;
  data.features.header = {"parcel_id",  "grade",      "exterior_wall",
                          "rooms",      "fireplaces", "garage_capacity",
                          "floor1_sqft", "floor2_sqft", "attic_sqft",
                          "basement_sqft", "half_floor_sqft", "total_sqft",
                          "year_built"};
  data.labels.header = {"parcel_id", "value_dollars", "year",
                        "handwritten", "source", "confidence"};
  data.parcel_tract.header = {"parcel_id", "tract_id"};

  std::vector<ParcelDraw> draws;
  draws.reserve(spec.n);
  for (int i = 0; i < spec.n; ++i) draws.push_back(draw_parcel(rng, spec.noise_sigma));

  // Missing-card flags: independent of everything under MAR; under the
  // shifted mechanism the flagged group's floor1 square footage moves by
  // shift_sigmas standard deviations.
  Rng miss_rng = Rng::derive(spec.seed, "missing");
  data.card_missing.resize(spec.n);
  for (int i = 0; i < spec.n; ++i)
    data.card_missing[i] = miss_rng.bernoulli(spec.missing_rate);
  if (spec.mechanism == MissingMechanism::kShifted) {
    const double sd = 800.0 / std::sqrt(12.0);  // sd of the uniform draw
    for (int i = 0; i < spec.n; ++i)
      if (data.card_missing[i]) {
        draws[i].floor1 += spec.shift_sigmas * sd;
        draws[i].total += spec.shift_sigmas * sd;
      }
  }

  Rng tract_rng = Rng::derive(spec.seed, "tracts");
  data.tracts.header = {"tract_id",     "median_income", "poverty_rate",
                        "prop_white",   "prop_black",    "prop_owner_occupied",
                        "total_population"};
  for (int t = 0; t < spec.n_tracts; ++t) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%03d", t);
    data.tracts.rows.push_back(
        {buf, std::to_string(std::lround(20000 + tract_rng.uniform() * 120000)),
         std::to_string(tract_rng.uniform() * 0.4),
         std::to_string(0.05 + tract_rng.uniform() * 0.9),
         std::to_string(tract_rng.uniform() * 0.6),
         std::to_string(0.2 + tract_rng.uniform() * 0.7),
         std::to_string(std::lround(1000 + tract_rng.uniform() * 6000))});
  }

  Rng hand_rng = Rng::derive(spec.seed, "handwritten");
  for (int i = 0; i < spec.n; ++i) {
    const auto& p = draws[i];
    char id[24];
    std::snprintf(id, sizeof id, "P%06d", i);
    const auto num = [](double v) {
      char b[32];
      std::snprintf(b, sizeof b, "%.1f", v);
      return std::string(b);
    };
    data.features.rows.push_back(
        {id, grade_names()[p.grade], wall_names()[p.wall],
         std::to_string(p.rooms), std::to_string(p.fireplaces),
         std::to_string(p.garage), num(p.floor1), num(p.floor2), num(p.attic),
         num(p.basement), num(p.half_floor), num(p.total),
         std::to_string(p.year_built)});
    char tract[16];
    std::snprintf(tract, sizeof tract, "T%03d",
                  static_cast<int>(Rng::fnv1a(id) % spec.n_tracts));
    data.parcel_tract.rows.push_back({id, tract});
    if (!data.card_missing[i]) {
      data.labels.rows.push_back(
          {id, std::to_string(std::lround(p.value)), "1933",
           hand_rng.bernoulli(0.8) ? "1" : "0", "hand", ""});
    }
  }
  return data;
}

}  // namespace synth
}  // namespace ledgerlens

#endif  // LEDGERLENS_SYNTH_HPP
