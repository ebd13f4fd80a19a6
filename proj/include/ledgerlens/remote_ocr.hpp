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

#ifndef LEDGERLENS_REMOTE_OCR_HPP
#define LEDGERLENS_REMOTE_OCR_HPP

#include <httplib.h>

#include <chrono>
#include <json.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "ledgerlens/errors.hpp"
#include "ledgerlens/ocr.hpp"
#include "ledgerlens/raster_io.hpp"

namespace ledgerlens {

/// Connection policy for a hosted recognition service. Commercial OCR
/// endpoints come with latency and rate limits that complicate batch
/// processing, so the client meters itself and backs off on failures.
struct RemoteOcrConfig {
  std::string endpoint;          // e.g. http://host:port
  double timeout_seconds = 10.0;
  int max_retries = 3;
  double backoff_base_seconds = 0.5;  // sleep base * 2^attempt between tries
  double rate_limit_per_second = 10.0;

  void validate() const {
    if (endpoint.empty()) throw ParameterError("remote endpoint is empty");
    if (max_retries < 0) throw ParameterError("max_retries must be >= 0");
    if (!(rate_limit_per_second > 0.0))
      throw ParameterError("rate limit must be > 0");
  }
};

namespace detail {

inline std::string base64_encode(const std::uint8_t* data, std::size_t len) {
  static constexpr char kTable[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (std::size_t i = 0; i < len; i += 3) {
    const std::uint32_t b0 = data[i];
    const std::uint32_t b1 = i + 1 < len ? data[i + 1] : 0;
    const std::uint32_t b2 = i + 2 < len ? data[i + 2] : 0;
    const std::uint32_t triple = (b0 << 16) | (b1 << 8) | b2;
    out.push_back(kTable[(triple >> 18) & 0x3f]);
    out.push_back(kTable[(triple >> 12) & 0x3f]);
    out.push_back(i + 1 < len ? kTable[(triple >> 6) & 0x3f] : '=');
    out.push_back(i + 2 < len ? kTable[triple & 0x3f] : '=');
  }
  return out;
}

/// Process-global token bucket, one per endpoint, capacity one token:
/// requests to the same endpoint are spaced 1/rate seconds apart no matter
/// how many worker threads drive the batch.
class RateLimiter {
 public:
  static RateLimiter& for_endpoint(const std::string& endpoint) {
    static std::mutex registry_mutex;
    static std::map<std::string, std::unique_ptr<RateLimiter>> registry;
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto& slot = registry[endpoint];
    if (!slot) slot = std::make_unique<RateLimiter>();
    return *slot;
  }

  void acquire(double per_second) {
    using clock = std::chrono::steady_clock;
    std::unique_lock<std::mutex> lock(mutex_);
    const auto interval =
        std::chrono::duration<double>(1.0 / per_second);
    const auto now = clock::now();
    auto ready = last_.time_since_epoch().count() == 0
                     ? now
                     : last_ + std::chrono::duration_cast<clock::duration>(
                                   interval);
    if (ready < now) ready = now;
    last_ = ready;
    lock.unlock();
    std::this_thread::sleep_until(ready);
  }

 private:
  std::mutex mutex_;
  std::chrono::steady_clock::time_point last_{};
};

}  // namespace detail

/// HTTP client for the wire protocol: POST {endpoint}/recognize with a
/// base64 PNG, expect {"text": str, "confidence": number}. Non-200 responses
/// and transport errors retry with exponential backoff until the budget is
/// spent, then surface BackendUnavailableError.
class RemoteBackend : public OcrBackend {
 public:
  explicit RemoteBackend(RemoteOcrConfig config) : config_(std::move(config)) {
    config_.validate();
  }

  BackendCapabilities capabilities() const override { return {true, false, true}; }

  int last_attempts() const { return last_attempts_; }

  std::pair<std::string, double> recognize(const GrayImage& cell) override {
    const auto png = encode_png(cell);
    nlohmann::json body;
    body["image_png_base64"] = detail::base64_encode(png.data(), png.size());
    body["hint"] = "digits";
    const std::string payload = body.dump();

    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(std::chrono::milliseconds(
        static_cast<int>(config_.timeout_seconds * 1000)));
    client.set_read_timeout(std::chrono::milliseconds(
        static_cast<int>(config_.timeout_seconds * 1000)));

    last_attempts_ = 0;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        const double sleep_s =
            config_.backoff_base_seconds * std::pow(2.0, attempt - 1);
        std::this_thread::sleep_for(std::chrono::duration<double>(sleep_s));
      }
      detail::RateLimiter::for_endpoint(config_.endpoint)
          .acquire(config_.rate_limit_per_second);
      ++last_attempts_;
      auto res = client.Post("/recognize", payload, "application/json");
      if (!res || res->status != 200) continue;
      try {
        const auto j = nlohmann::json::parse(res->body);
        const std::string text = j.at("text").get<std::string>();
        const double confidence = j.at("confidence").get<double>();
        if (!(confidence >= 0.0 && confidence <= 1.0))
          throw ProtocolError("confidence outside [0,1]");
        return {text, confidence};
      } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("malformed OCR response: ") + e.what());
      }
    }
    throw BackendUnavailableError("remote OCR exhausted retries: " +
                                  config_.endpoint);
  }

 private:
  RemoteOcrConfig config_;
  int last_attempts_ = 0;
};

}  // namespace ledgerlens

#endif  // LEDGERLENS_REMOTE_OCR_HPP
