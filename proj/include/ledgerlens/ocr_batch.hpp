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

#ifndef LEDGERLENS_OCR_BATCH_HPP
#define LEDGERLENS_OCR_BATCH_HPP

#include <atomic>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ledgerlens/image.hpp"
#include "ledgerlens/ocr.hpp"

namespace ledgerlens {

struct CellInput {
  std::string doc_id;
  std::string column_name;
  int row_index = 0;
  GrayImage image;
};

/// Per-cell batch outcome: either a prediction or a recorded error. A failed
/// cell never aborts the batch.
struct BatchItem {
  OcrPrediction prediction;
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
};

struct BatchOptions {
  int workers = 1;
};

/// Drives a backend over a stream of cells. Output order equals input order
/// regardless of completion order; backends that declare themselves unsafe
/// for concurrent calls are serialized.
inline std::vector<BatchItem> batch_recognize(OcrBackend& backend,
                                              const std::vector<CellInput>& cells,
                                              const BatchOptions& options = {}) {
  std::vector<BatchItem> results(cells.size());
  const bool concurrent = backend.capabilities().concurrent_safe;
  const int workers = concurrent ? std::max(1, options.workers) : 1;

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      BatchItem item;
      item.prediction.doc_id = cells[i].doc_id;
      item.prediction.column_name = cells[i].column_name;
      item.prediction.row_index = cells[i].row_index;
      try {
        const auto [text, confidence] = backend.recognize(cells[i].image);
        item.prediction.text = text;
        item.prediction.confidence = confidence;
      } catch (const Error& e) {
        item.error = e.what();
      }
      results[i] = std::move(item);
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return results;
}

}  // namespace ledgerlens

#endif  // LEDGERLENS_OCR_BATCH_HPP
