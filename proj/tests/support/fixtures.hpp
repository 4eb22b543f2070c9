#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "geometry.hpp"
#include "image.hpp"
#include "raster.hpp"

// Deterministic synthetic fixtures shared by the unit tests, the acceptance
// suite and the mkfixture tool.
namespace fixtures {

privar::Image uniform_image(int w, int h, int channels, std::uint8_t value);
privar::Image checkerboard(int w, int h, int cell);
privar::Image random_image(int w, int h, int channels, std::uint64_t seed);

// One horizontal text line rendered with the embedded 5x7 font.
struct TextLine {
    int x = 0;
    int y = 0;
    int scale = 2;
    std::string text;
};

privar::BoundingBox line_bbox(const TextLine& line);

// Flat background, optional decoration rectangles, dark text on light
// patches. All fixture text is dark-on-light so the reader below works.
struct SceneSpec {
    int width = 320;
    int height = 240;
    privar::Rgb background{90, 96, 104};
    std::vector<std::pair<privar::BoundingBox, privar::Rgb>> rects;
    std::vector<TextLine> lines;
    privar::Rgb ink{28, 26, 30};
};

privar::Image render_scene(const SceneSpec& spec);

// Grid-aligned glyph matcher: re-reads a text line rendered by render_scene
// from (possibly degraded) pixels. Cells with too little contrast or no
// matching glyph are dropped. This is how the recorded OCR sidecars are
// produced, so their content genuinely derives from the image pixels.
std::string read_text_line(const privar::Image& image, const privar::BoundingBox& box,
                           int scale);

// ---- the bundled 12-item mini dataset ----------------------------------------

struct MiniItem {
    std::string id;
    std::string scene;
    bool sensitive = false;
    std::vector<std::string> types;
    SceneSpec spec;
    std::vector<std::size_t> gt_line_indices;  // lines holding sensitive text
    std::string original_topic;   // what a model recovers from the raw frame
    std::string obfuscated_topic;  // what it recovers after obfuscation
};

std::vector<MiniItem> mini_items();

// Writes images/, manifest.json, scenarios.json, detections.csv and the
// per-mode recorded OCR sidecars (ocr_original.csv, ocr_privar.csv,
// ocr_oracle.csv, ocr_noobf.csv) under dir. Fully deterministic.
void generate_mini_dataset(const std::string& dir);

}  // namespace fixtures
