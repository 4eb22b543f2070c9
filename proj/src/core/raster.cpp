#include "raster.hpp"

#include <cctype>
#include <map>

#include "errors.hpp"

namespace privar {

namespace {

struct GlyphDef {
    char c;
    const char* rows[7];
};

// clang-format off
const GlyphDef kGlyphDefs[] = {
    {' ', {".....", ".....", ".....", ".....", ".....", ".....", "....."}},
    {'A', {".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'B', {"####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."}},
    {'C', {".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."}},
    {'D', {"####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."}},
    {'E', {"#####", "#....", "#....", "####.", "#....", "#....", "#####"}},
    {'F', {"#####", "#....", "#....", "####.", "#....", "#....", "#...."}},
    {'G', {".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".###."}},
    {'H', {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'I', {".###.", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {'J', {"..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."}},
    {'K', {"#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"}},
    {'L', {"#....", "#....", "#....", "#....", "#....", "#....", "#####"}},
    {'M', {"#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"}},
    {'N', {"#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#", "#...#"}},
    {'O', {".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {'P', {"####.", "#...#", "#...#", "####.", "#....", "#....", "#...."}},
    {'Q', {".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"}},
    {'R', {"####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"}},
    {'S', {".####", "#....", "#....", ".###.", "....#", "....#", "####."}},
    {'T', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}},
    {'U', {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {'V', {"#...#", "#...#", "#...#", "#...#", ".#.#.", ".#.#.", "..#.."}},
    {'W', {"#...#", "#...#", "#...#", "#.#.#", "#.#.#", "##.##", "#...#"}},
    {'X', {"#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"}},
    {'Y', {"#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."}},
    {'Z', {"#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"}},
    {'0', {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."}},
    {'1', {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {'2', {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"}},
    {'3', {"#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."}},
    {'4', {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."}},
    {'5', {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."}},
    {'6', {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."}},
    {'7', {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."}},
    {'8', {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."}},
    {'9', {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."}},
    {'!', {"..#..", "..#..", "..#..", "..#..", "..#..", ".....", "..#.."}},
    {'"', {".#.#.", ".#.#.", ".#.#.", ".....", ".....", ".....", "....."}},
    {'#', {".#.#.", ".#.#.", "#####", ".#.#.", "#####", ".#.#.", ".#.#."}},
    {'$', {"..#..", ".####", "#.#..", ".###.", "..#.#", "####.", "..#.."}},
    {'%', {"##...", "##..#", "...#.", "..#..", ".#...", "#..##", "...##"}},
    {'&', {".##..", "#..#.", "#.#..", ".#...", "#.#.#", "#..#.", ".##.#"}},
    {'\'', {"..#..", "..#..", ".#...", ".....", ".....", ".....", "....."}},
    {'(', {"...#.", "..#..", ".#...", ".#...", ".#...", "..#..", "...#."}},
    {')', {".#...", "..#..", "...#.", "...#.", "...#.", "..#..", ".#..."}},
    {'*', {".....", "..#..", "#.#.#", ".###.", "#.#.#", "..#..", "....."}},
    {'+', {".....", "..#..", "..#..", "#####", "..#..", "..#..", "....."}},
    {',', {".....", ".....", ".....", ".....", ".##..", "..#..", ".#..."}},
    {'-', {".....", ".....", ".....", "#####", ".....", ".....", "....."}},
    {'.', {".....", ".....", ".....", ".....", ".....", ".##..", ".##.."}},
    {'/', {"....#", "...#.", "...#.", "..#..", ".#...", ".#...", "#...."}},
    {':', {".....", ".##..", ".##..", ".....", ".##..", ".##..", "....."}},
    {';', {".....", ".##..", ".##..", ".....", ".##..", "..#..", ".#..."}},
    {'<', {"...#.", "..#..", ".#...", "#....", ".#...", "..#..", "...#."}},
    {'=', {".....", ".....", "#####", ".....", "#####", ".....", "....."}},
    {'>', {".#...", "..#..", "...#.", "....#", "...#.", "..#..", ".#..."}},
    {'?', {".###.", "#...#", "....#", "...#.", "..#..", ".....", "..#.."}},
    {'@', {".###.", "#...#", "....#", ".##.#", "#.#.#", "#.#.#", ".###."}},
    {'_', {".....", ".....", ".....", ".....", ".....", ".....", "#####"}},
};
// clang-format on

std::array<std::uint8_t, 7> pack_glyph(const GlyphDef& def) {
    std::array<std::uint8_t, 7> rows{};
    for (int y = 0; y < 7; ++y) {
        std::uint8_t bits = 0;
        for (int x = 0; x < 5; ++x) {
            if (def.rows[y][x] == '#') bits |= static_cast<std::uint8_t>(1u << (4 - x));
        }
        rows[y] = bits;
    }
    return rows;
}

const std::map<char, std::array<std::uint8_t, 7>>& glyph_table() {
    static const std::map<char, std::array<std::uint8_t, 7>> table = [] {
        std::map<char, std::array<std::uint8_t, 7>> t;
        for (const GlyphDef& def : kGlyphDefs) t[def.c] = pack_glyph(def);
        return t;
    }();
    return table;
}

char normalize_glyph(char c) {
    return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

}  // namespace

bool glyph_defined(char c) { return glyph_table().count(normalize_glyph(c)) > 0; }

const std::array<std::uint8_t, 7>& glyph_rows(char c) {
    const auto& table = glyph_table();
    auto it = table.find(normalize_glyph(c));
    if (it == table.end()) it = table.find('?');
    return it->second;
}

TextExtent text_extent(std::string_view text, int scale) {
    if (text.empty() || scale <= 0) return {0, 0};
    const int cols = static_cast<int>(text.size()) * kGlyphAdvance - 1;
    return {cols * scale, kGlyphHeight * scale};
}

void draw_text(Image& image, int x, int y, std::string_view text, int scale, const Rgb& color) {
    require_valid(image);
    if (scale <= 0) throw InvalidArgumentError("text scale must be positive");
    int cx = x;
    for (char c : text) {
        const auto& rows = glyph_rows(c);
        for (int gy = 0; gy < kGlyphHeight; ++gy) {
            for (int gx = 0; gx < kGlyphWidth; ++gx) {
                if (!(rows[gy] & (1u << (4 - gx)))) continue;
                for (int sy = 0; sy < scale; ++sy) {
                    for (int sx = 0; sx < scale; ++sx) {
                        const int px = cx + gx * scale + sx;
                        const int py = y + gy * scale + sy;
                        if (px < 0 || py < 0 || px >= image.width || py >= image.height) continue;
                        for (int ch = 0; ch < image.channels; ++ch) {
                            image.at(px, py, ch) = image.channels == 1 ? color[0] : color[ch];
                        }
                    }
                }
            }
        }
        cx += kGlyphAdvance * scale;
    }
}

void fill_rect(Image& image, const BoundingBox& rect, const Rgb& color) {
    require_valid(image);
    BoundingBox r = rect;
    if (!clamp_to_bounds(r, image.width, image.height)) return;
    for (int y = r.y; y < r.bottom(); ++y) {
        for (int x = r.x; x < r.right(); ++x) {
            for (int ch = 0; ch < image.channels; ++ch) {
                image.at(x, y, ch) = image.channels == 1 ? color[0] : color[ch];
            }
        }
    }
}

void draw_rect_outline(Image& image, const BoundingBox& rect, int thickness, const Rgb& color) {
    require_valid(image);
    if (thickness <= 0) throw InvalidArgumentError("outline thickness must be positive");
    BoundingBox outer = rect;
    if (!clamp_to_bounds(outer, image.width, image.height)) return;
    const int ix0 = outer.x + thickness;
    const int iy0 = outer.y + thickness;
    const int ix1 = outer.right() - thickness;
    const int iy1 = outer.bottom() - thickness;
    for (int y = outer.y; y < outer.bottom(); ++y) {
        for (int x = outer.x; x < outer.right(); ++x) {
            const bool interior = x >= ix0 && x < ix1 && y >= iy0 && y < iy1;
            if (interior) continue;
            for (int ch = 0; ch < image.channels; ++ch) {
                image.at(x, y, ch) = image.channels == 1 ? color[0] : color[ch];
            }
        }
    }
}

}  // namespace privar
