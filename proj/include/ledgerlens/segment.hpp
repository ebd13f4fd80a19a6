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

#ifndef LEDGERLENS_SEGMENT_HPP
#define LEDGERLENS_SEGMENT_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ledgerlens/errors.hpp"
#include "ledgerlens/glyphs.hpp"
#include "ledgerlens/homography.hpp"
#include "ledgerlens/hough.hpp"
#include "ledgerlens/image.hpp"
#include "ledgerlens/imgproc.hpp"
#include "ledgerlens/warp.hpp"

namespace ledgerlens {

/// One table cell located in a source scan.
struct CellRegion {
  std::string doc_id;
  Quad quad;  // source-image coordinates
  std::string column_name;
  int row_index = 0;
};

/// The fixed card layout in template coordinates: every cell of interest as
/// an axis-aligned rectangle keyed by (column, row).
struct TemplateLayout {
  int template_width = 0;
  int template_height = 0;

  struct Cell {
    std::string column;
    int row = 0;
    Rect rect;
  };
  std::vector<Cell> cells;

  void validate() const {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& c = cells[i];
      if (c.rect.x < 0 || c.rect.y < 0 || c.rect.x1() > template_width ||
          c.rect.y1() > template_height)
        throw SchemaError("layout cell outside template bounds: " + c.column);
      for (std::size_t j = i + 1; j < cells.size(); ++j) {
        const auto& d = cells[j];
        if (c.column == d.column && c.row == d.row)
          throw SchemaError("duplicate layout cell: " + c.column);
        if (rect_iou(c.rect, d.rect) > 0.0)
          throw SchemaError("overlapping layout cells: " + c.column + "/" +
                            d.column);
      }
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["width"] = template_width;
    j["height"] = template_height;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : cells)
      j["cells"].push_back({{"column", c.column},
                            {"row", c.row},
                            {"x", c.rect.x},
                            {"y", c.rect.y},
                            {"w", c.rect.w},
                            {"h", c.rect.h}});
    return j;
  }

  static TemplateLayout from_json(const nlohmann::json& j) {
    TemplateLayout layout;
    layout.template_width = j.at("width").get<int>();
    layout.template_height = j.at("height").get<int>();
    for (const auto& c : j.at("cells")) {
      Cell cell;
      cell.column = c.at("column").get<std::string>();
      cell.row = c.at("row").get<int>();
      cell.rect = Rect{c.at("x").get<double>(), c.at("y").get<double>(),
                       c.at("w").get<double>(), c.at("h").get<double>()};
      layout.cells.push_back(cell);
    }
    layout.validate();
    return layout;
  }

  static TemplateLayout load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open layout: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write layout: " + path);
    out << to_json().dump(2) << "\n";
  }
};

/// Where a printed header word was found and how confidently.
struct HeaderLocation {
  Rect rect;
  double score = 0.0;
};

/// Pluggable header localization. The default implementation matches a
/// rendered glyph patch by normalized cross-correlation; an OCR backend that
/// reports word boxes can fill the same contract.
class HeaderLocator {
 public:
  virtual ~HeaderLocator() = default;
  virtual std::optional<HeaderLocation> locate(
      const GrayImage& img, const std::string& header_word) const = 0;
};

class NccHeaderLocator : public HeaderLocator {
 public:
  explicit NccHeaderLocator(int glyph_scale = 2, double min_score = 0.7)
      : glyph_scale_(glyph_scale), min_score_(min_score) {}

  std::optional<HeaderLocation> locate(
      const GrayImage& img, const std::string& header_word) const override {
    const GrayImage patch = glyphs::render_word(header_word, glyph_scale_);
    const auto peak = ncc_search(img, patch, min_score_);
    if (!peak) return std::nullopt;
    return HeaderLocation{Rect{static_cast<double>(peak->x),
                               static_cast<double>(peak->y),
                               static_cast<double>(patch.width()),
                               static_cast<double>(patch.height())},
                          peak->score};
  }

 private:
  int glyph_scale_;
  double min_score_;
};

inline Rect locate_header(const GrayImage& img, const std::string& header_word,
                          const HeaderLocator& locator) {
  if (header_word.empty())
    throw ParameterError("locate_header: empty header word");
  const auto loc = locator.locate(img, header_word);
  if (!loc)
    throw HeaderNotFoundError("header not found: " + header_word);
  return loc->rect;
}

struct FirstCellParams {
  // Working window around the located header: grown horizontally by
  // window_width_factor * header width (split between both sides) and
  // extended window_depth_factor * header height below the header. Values
  // sized so a full cell and its bounding rules always fall inside.
  double window_width_factor = 1.5;
  double window_depth_factor = 6.0;
  int out_width = 200;
  int out_height = 64;
  HoughParams hough;
};

struct FirstCell {
  CellRegion region;
  GrayImage rectified;
};

/// Single-cell extraction: find the header, run line detection in a window
/// under it, take the two nearest horizontal rules below the header baseline
/// and the vertical rules flanking the header, and rectify their
/// intersection quad.
inline FirstCell extract_first_cell(const GrayImage& img,
                                    const std::string& doc_id,
                                    const std::string& header_word,
                                    const HeaderLocator& locator,
                                    const FirstCellParams& params = {}) {
  const Rect header = locate_header(img, header_word, locator);

  const double grow = params.window_width_factor * header.w / 2.0;
  const int wx0 = std::max(0, static_cast<int>(std::floor(header.x - grow)));
  const int wx1 = std::min(img.width(), static_cast<int>(std::ceil(
                                            header.x1() + grow)));
  const int wy0 = std::max(0, static_cast<int>(std::floor(header.y)));
  const int wy1 = std::min(
      img.height(), static_cast<int>(std::ceil(
                        header.y1() + params.window_depth_factor * header.h)));
  if (wx1 - wx0 < 4 || wy1 - wy0 < 4)
    throw SegmentationFailure("window around header is degenerate");
  const GrayImage window = crop(img, wx0, wy0, wx1 - wx0, wy1 - wy0);

  const auto lines = hough_lines(window, params.hough);
  std::vector<LineRT> horizontals, verticals;
  for (const auto& line : lines)
    (line.horizontal() ? horizontals : verticals).push_back(line);

  // Rules strictly below the header baseline, window-local coordinates.
  const double baseline = header.y1() - wy0;
  std::erase_if(horizontals, [&](const LineRT& l) {
    return l.rho / std::sin(l.theta) <= baseline;
  });

  // Vertical rules flanking the header box.
  const double hx0 = header.x - wx0;
  const double hx1 = header.x1() - wx0;
  std::optional<LineRT> left, right;
  for (const auto& v : verticals) {
    const double x = v.rho / std::cos(v.theta);
    if (x <= hx0 + 1.0 && (!left || x > left->rho / std::cos(left->theta)))
      left = v;
    if (x >= hx1 - 1.0 && (!right || x < right->rho / std::cos(right->theta)))
      right = v;
  }

  std::sort(horizontals.begin(), horizontals.end(),
            [](const LineRT& a, const LineRT& b) {
              return a.rho / std::sin(a.theta) < b.rho / std::sin(b.theta);
            });
  if (horizontals.size() < 2 || !left || !right)
    throw SegmentationFailure("not enough table rules below header: " +
                              doc_id);

  const std::vector<LineRT> two_h{horizontals[0], horizontals[1]};
  const std::vector<LineRT> two_v{*left, *right};
  const auto grid = line_intersections(two_h, two_v);
  if (grid.size() != 2 || grid[0].size() != 2 || grid[1].size() != 2)
    throw SegmentationFailure("cell corner intersections are degenerate: " +
                              doc_id);

  const double ox = wx0, oy = wy0;
  Quad quad{{PointF{grid[0][0].x + ox, grid[0][0].y + oy},
             PointF{grid[0][1].x + ox, grid[0][1].y + oy},
             PointF{grid[1][1].x + ox, grid[1][1].y + oy},
             PointF{grid[1][0].x + ox, grid[1][0].y + oy}}};
  if (!quad.valid())
    throw SegmentationFailure("detected cell quad is degenerate: " + doc_id);

  FirstCell result;
  result.region = CellRegion{doc_id, quad, header_word, 0};
  result.rectified =
      rectify_quad(img, quad, params.out_width, params.out_height);
  return result;
}

/// Comprehensive extraction: map every layout rectangle through the inverse
/// alignment homography into scan coordinates.
inline std::vector<CellRegion> project_layout(const TemplateLayout& layout,
                                              const Homography& scan_to_template,
                                              const std::string& doc_id) {
  if (!scan_to_template.invertible())
    throw SingularTransformError("project_layout: singular homography");
  const Homography to_scan = scan_to_template.inverse();
  std::vector<CellRegion> regions;
  regions.reserve(layout.cells.size());
  for (const auto& cell : layout.cells) {
    const Quad rect_quad = cell.rect.quad();
    Quad q;
    for (int i = 0; i < 4; ++i) q.corners[i] = to_scan.apply(rect_quad.corners[i]);
    regions.push_back(CellRegion{doc_id, q, cell.column, cell.row});
  }
  return regions;
}

/// Batch bookkeeping mirrored into the run summary: successes and failures
/// must add back up to the number of inputs.
struct SegmentationSummary {
  int attempted = 0;
  int segmented = 0;
  int failed = 0;
  std::vector<std::string> failure_ids;

  nlohmann::json to_json() const {
    return {{"attempted", attempted},
            {"segmented", segmented},
            {"failed", failed},
            {"failure_ids", failure_ids}};
  }

  double success_rate_percent() const {
    return attempted == 0
               ? 0.0
               : std::round(1000.0 * segmented / attempted) / 10.0;
  }
};

}  // namespace ledgerlens

#endif  // LEDGERLENS_SEGMENT_HPP
