#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "geometry.hpp"
#include "image.hpp"

namespace privar {

using Rgb = std::array<std::uint8_t, 3>;

// Embedded fixed 5x7 bitmap font. Glyph cells advance by 6 columns (one blank
// separator column); lowercase letters render as uppercase. Deterministic
// pixels, no external font dependency.
inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kGlyphAdvance = 6;

bool glyph_defined(char c);

// 7 rows per glyph; bit (4 - x) of row y is set iff pixel (x, y) is inked.
const std::array<std::uint8_t, 7>& glyph_rows(char c);

struct TextExtent {
    int width = 0;
    int height = 0;
};

TextExtent text_extent(std::string_view text, int scale);

void draw_text(Image& image, int x, int y, std::string_view text, int scale, const Rgb& color);

void fill_rect(Image& image, const BoundingBox& rect, const Rgb& color);

// Outline drawn inward from the box edge, clipped to the image.
void draw_rect_outline(Image& image, const BoundingBox& rect, int thickness, const Rgb& color);

}  // namespace privar
