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

#ifndef LEDGERLENS_GLYPHS_HPP
#define LEDGERLENS_GLYPHS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "ledgerlens/image.hpp"
#include "ledgerlens/rng.hpp"

namespace ledgerlens {

// Built-in 5x7 bitmap font: digits, upper-case letters and the separators
// that appear in dollar figures. One machine font is all the synthetic
// fixtures and the correlation recognizer need; handwriting realism is a
// non-goal.
namespace glyphs {

struct Glyph {
  char ch;
  std::array<std::uint8_t, 7> rows;  // 5 bits per row, bit 4 = leftmost
};

inline constexpr std::array<Glyph, 41> kFont = {{
    {'0', {0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110}},
    {'1', {0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
    {'2', {0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111}},
    {'3', {0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110}},
    {'4', {0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010}},
    {'5', {0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110}},
    {'6', {0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110}},
    {'7', {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000}},
    {'8', {0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110}},
    {'9', {0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100}},
    {'A', {0b01110, 0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001}},
    {'B', {0b11110, 0b10001, 0b10001, 0b11110, 0b10001, 0b10001, 0b11110}},
    {'C', {0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110}},
    {'D', {0b11100, 0b10010, 0b10001, 0b10001, 0b10001, 0b10010, 0b11100}},
    {'E', {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111}},
    {'F', {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000}},
    {'G', {0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01111}},
    {'H', {0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001}},
    {'I', {0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
    {'J', {0b00111, 0b00010, 0b00010, 0b00010, 0b00010, 0b10010, 0b01100}},
    {'K', {0b10001, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010, 0b10001}},
    {'L', {0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111}},
    {'M', {0b10001, 0b11011, 0b10101, 0b10101, 0b10001, 0b10001, 0b10001}},
    {'N', {0b10001, 0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001}},
    {'O', {0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110}},
    {'P', {0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000}},
    {'Q', {0b01110, 0b10001, 0b10001, 0b10001, 0b10101, 0b10010, 0b01101}},
    {'R', {0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001}},
    {'S', {0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110}},
    {'T', {0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100}},
    {'U', {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110}},
    {'V', {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100}},
    {'W', {0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b10101, 0b01010}},
    {'X', {0b10001, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001, 0b10001}},
    {'Y', {0b10001, 0b10001, 0b10001, 0b01010, 0b00100, 0b00100, 0b00100}},
    {'Z', {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b11111}},
    {'$', {0b00100, 0b01111, 0b10100, 0b01110, 0b00101, 0b11110, 0b00100}},
    {'.', {0b00000, 0b00000, 0b00000, 0b00000, 0b00000, 0b01100, 0b01100}},
    {',', {0b00000, 0b00000, 0b00000, 0b00000, 0b01100, 0b00100, 0b01000}},
    {'-', {0b00000, 0b00000, 0b00000, 0b01110, 0b00000, 0b00000, 0b00000}},
    {' ', {0b00000, 0b00000, 0b00000, 0b00000, 0b00000, 0b00000, 0b00000}},
}};

inline const Glyph* find(char c) {
  for (const auto& g : kFont)
    if (g.ch == c) return &g;
  return nullptr;
}

constexpr int kGlyphWidth = 5;
constexpr int kGlyphHeight = 7;
constexpr int kAdvance = 6;  // one blank column between glyphs

/// Stamps `text` with top-left at (x0, y0), each font pixel drawn as a
/// scale x scale block of `ink`. Ignores characters outside the font.
inline void stamp_text(GrayImage& img, std::string_view text, int x0, int y0,
                       int scale = 2, std::uint8_t ink = 0) {
  int pen_x = x0;
  for (const char c : text) {
    const Glyph* g = find(c);
    if (g) {
      for (int ry = 0; ry < kGlyphHeight; ++ry)
        for (int rx = 0; rx < kGlyphWidth; ++rx) {
          if (!((g->rows[ry] >> (kGlyphWidth - 1 - rx)) & 1)) continue;
          for (int sy = 0; sy < scale; ++sy)
            for (int sx = 0; sx < scale; ++sx) {
              const int px = pen_x + rx * scale + sx;
              const int py = y0 + ry * scale + sy;
              if (px >= 0 && py >= 0 && px < img.width() && py < img.height())
                img.at(px, py) = ink;
            }
        }
    }
    pen_x += kAdvance * scale;
  }
}

/// Same stamp with per-glyph jitter and optional thickening, emulating the
/// uneven look of typed-and-inked figures at desk scale.
inline void stamp_text_perturbed(GrayImage& img, std::string_view text, int x0,
                                 int y0, int scale, Rng& rng,
                                 int max_jitter = 1, bool thicken = false) {
  int pen_x = x0;
  for (const char c : text) {
    const Glyph* g = find(c);
    if (g) {
      const int jx = max_jitter > 0
                         ? static_cast<int>(rng.uniform_int(2 * max_jitter + 1)) -
                               max_jitter
                         : 0;
      const int jy = max_jitter > 0
                         ? static_cast<int>(rng.uniform_int(2 * max_jitter + 1)) -
                               max_jitter
                         : 0;
      GrayImage one(kGlyphWidth * scale + 2, kGlyphHeight * scale + 2, 255);
      stamp_text(one, std::string_view(&c, 1), 1, 1, scale);
      if (thicken) {
        GrayImage fat = one;
        for (int y = 0; y < one.height(); ++y)
          for (int x = 1; x < one.width(); ++x)
            if (one.at(x - 1, y) == 0) fat.at(x, y) = 0;
        one = fat;
      }
      for (int y = 0; y < one.height(); ++y)
        for (int x = 0; x < one.width(); ++x) {
          if (one.at(x, y) != 0) continue;
          const int px = pen_x + jx + x - 1;
          const int py = y0 + jy + y - 1;
          if (px >= 0 && py >= 0 && px < img.width() && py < img.height())
            img.at(px, py) = 0;
        }
    }
    pen_x += kAdvance * scale;
  }
}

inline int text_width(std::string_view text, int scale) {
  if (text.empty()) return 0;
  return (static_cast<int>(text.size() - 1) * kAdvance + kGlyphWidth) * scale;
}

inline int text_height(int scale) { return kGlyphHeight * scale; }

/// White patch containing just the word; the NCC header locator template.
inline GrayImage render_word(std::string_view word, int scale = 2,
                             int margin = 1) {
  GrayImage patch(text_width(word, scale) + 2 * margin,
                  text_height(scale) + 2 * margin, 255);
  stamp_text(patch, word, margin, margin, scale);
  return patch;
}

/// Canonical digit image for the correlation recognizer's bank.
inline GrayImage render_digit(int digit, int scale = 3) {
  const char c = static_cast<char>('0' + digit);
  return render_word(std::string_view(&c, 1), scale, 0);
}

}  // namespace glyphs
}  // namespace ledgerlens

#endif  // LEDGERLENS_GLYPHS_HPP
