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

#ifndef LEDGERLENS_OCR_HPP
#define LEDGERLENS_OCR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ledgerlens/errors.hpp"
#include "ledgerlens/glyphs.hpp"
#include "ledgerlens/image.hpp"
#include "ledgerlens/imgproc.hpp"

namespace ledgerlens {

/// One recognized cell: raw digit text as the backend emitted it plus a
/// confidence in [0,1]. Backends may only emit digits and the separators
/// that appear in dollar figures.
struct OcrPrediction {
  std::string doc_id;
  std::string column_name;
  int row_index = 0;
  std::string text;
  double confidence = 0.0;
};

struct BackendCapabilities {
  bool recognize_cell = true;
  bool word_boxes = false;
  bool concurrent_safe = true;  // serialized access when false
};

struct WordBox {
  std::string word;
  double x = 0, y = 0, w = 0, h = 0;
};

/// Recognition backend contract. `recognize` must be total: every image
/// yields either a prediction or a thrown, declared error.
class OcrBackend {
 public:
  virtual ~OcrBackend() = default;
  virtual BackendCapabilities capabilities() const = 0;

  /// Text + confidence for a rectified cell image.
  virtual std::pair<std::string, double> recognize(const GrayImage& cell) = 0;

  virtual std::vector<WordBox> word_boxes(const GrayImage&) {
    throw ProtocolError("backend does not report word boxes");
  }
};

/// Correlation recognizer over the built-in glyph bank. Slices the cell into
/// connected ink components, rescales each to the bank's canonical size and
/// takes the best normalized cross-correlation over 0..9. Confidence is the
/// geometric mean of the per-character peak scores. Exists so the whole
/// pipeline can be tested hermetically; makes no claim of handwriting-grade
/// accuracy.
class GlyphCorrelationBackend : public OcrBackend {
 public:
  GlyphCorrelationBackend() {
    for (int d = 0; d <= 9; ++d) bank_[d] = glyphs::render_digit(d, kBankScale);
  }

  BackendCapabilities capabilities() const override { return {true, false, true}; }

  std::pair<std::string, double> recognize(const GrayImage& cell) override {
    BinaryMask mask = adaptive_binarize(cell);
    mask = remove_isolated(mask);
    const auto comps = connected_components(mask, /*min_area=*/12);

    std::string text;
    double log_conf = 0.0;
    int used = 0;
    for (const auto& c : comps) {
      if (c.width() < 3 || c.height() < 6) continue;  // specks, rule stubs
      // Rule fragments are far wider or flatter than any digit.
      if (c.width() > 3 * c.height()) continue;
      const GrayImage comp = crop(cell, c.x0, c.y0, c.width(), c.height());
      const GrayImage canon =
          resize_bilinear(comp, bank_[0].width(), bank_[0].height());
      int best_digit = 0;
      double best_score = -2.0;
      for (int d = 0; d <= 9; ++d) {
        const double s = ncc_at(canon, bank_[d], 0, 0);
        if (s > best_score) {
          best_score = s;
          best_digit = d;
        }
      }
      text.push_back(static_cast<char>('0' + best_digit));
      log_conf += std::log(std::clamp(best_score, 1e-6, 1.0));
      ++used;
    }
    if (used == 0) return {"", 0.0};
    return {text, std::exp(log_conf / used)};
  }

 private:
  static constexpr int kBankScale = 3;
  GrayImage bank_[10];
};

/// Fixture-keyed backend for tests: answers are looked up by doc/cell key.
class MockBackend : public OcrBackend {
 public:
  using Answer = std::pair<std::string, double>;

  void add(const std::string& key, std::string text, double confidence) {
    answers_[key] = {std::move(text), confidence};
  }
  void add_word_box(const std::string& word, double x, double y, double w,
                    double h) {
    boxes_.push_back({word, x, y, w, h});
  }
  /// The next recognize() call consumes keys in insertion order when no
  /// explicit key is set via `expect_key`.
  void expect_key(std::string key) { next_key_ = std::move(key); }

  BackendCapabilities capabilities() const override {
    return {true, !boxes_.empty(), true};
  }

  std::pair<std::string, double> recognize(const GrayImage&) override {
    if (!next_key_.empty()) {
      const auto it = answers_.find(next_key_);
      next_key_.clear();
      if (it != answers_.end()) return it->second;
      throw ProtocolError("mock backend has no fixture for key");
    }
    if (answers_.empty())
      throw ProtocolError("mock backend has no fixtures");
    return answers_.begin()->second;
  }

  std::vector<WordBox> word_boxes(const GrayImage&) override { return boxes_; }

 private:
  std::map<std::string, Answer> answers_;
  std::vector<WordBox> boxes_;
  std::string next_key_;
};

/// Strips the separators a backend may legally emit and parses the rest as a
/// base-10 dollar figure. A blank prediction becomes 0; that rule is applied
/// here and downstream consumers decide whether zeros count.
inline std::uint64_t normalize_prediction(const std::string& text) {
  std::string digits;
  for (const char c : text) {
    if (c == ',' || c == '.' || c == '$' || c == ' ') continue;
    if (c < '0' || c > '9')
      throw InvalidCharactersError(
          std::string("non-digit character in OCR text: '") + c + "'");
    digits.push_back(c);
  }
  if (digits.empty()) return 0;
  // Parse manually; dollar figures never exceed 19 digits in practice but
  // avoid UB on adversarial backend output.
  if (digits.size() > 18)
    throw InvalidCharactersError("OCR text too long to be a dollar figure");
  std::uint64_t value = 0;
  for (const char c : digits) value = value * 10 + (c - '0');
  return value;
}

inline std::uint64_t normalize_prediction(const OcrPrediction& pred) {
  return normalize_prediction(pred.text);
}

/// Stable confidence ranking: descending confidence, ties broken on
/// (doc_id, column, row). Keeps the first ceil(retain_fraction * n); the
/// partition is exhaustive and disjoint.
inline std::pair<std::vector<OcrPrediction>, std::vector<OcrPrediction>>
confidence_filter(std::vector<OcrPrediction> preds, double retain_fraction) {
  if (!(retain_fraction > 0.0 && retain_fraction <= 1.0))
    throw ParameterError("retain_fraction must be in (0, 1]");
  std::sort(preds.begin(), preds.end(),
            [](const OcrPrediction& a, const OcrPrediction& b) {
              if (a.confidence != b.confidence)
                return a.confidence > b.confidence;
              if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
              if (a.column_name != b.column_name)
                return a.column_name < b.column_name;
              return a.row_index < b.row_index;
            });
  const std::size_t keep = static_cast<std::size_t>(
      std::ceil(retain_fraction * static_cast<double>(preds.size())));
  std::vector<OcrPrediction> kept(preds.begin(),
                                  preds.begin() + std::min(keep, preds.size()));
  std::vector<OcrPrediction> dropped(preds.begin() + kept.size(), preds.end());
  return {std::move(kept), std::move(dropped)};
}

}  // namespace ledgerlens

#endif  // LEDGERLENS_OCR_HPP
