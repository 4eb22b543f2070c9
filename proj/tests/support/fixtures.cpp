#include "fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>

#include "backend.hpp"
#include "codec.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "pipeline.hpp"

namespace fixtures {

using namespace privar;

Image uniform_image(int w, int h, int channels, std::uint8_t value) {
    return Image::create(w, h, channels, value);
}

Image checkerboard(int w, int h, int cell) {
    Image img = Image::create(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            img.at(x, y, 0) = ((x / cell) + (y / cell)) % 2 ? 255 : 0;
        }
    }
    return img;
}

Image random_image(int w, int h, int channels, std::uint64_t seed) {
    Image img = Image::create(w, h, channels);
    std::mt19937_64 rng(seed);
    for (std::uint8_t& p : img.pixels) p = static_cast<std::uint8_t>(rng() & 0xff);
    return img;
}

BoundingBox line_bbox(const TextLine& line) {
    const TextExtent extent = text_extent(line.text, line.scale);
    return BoundingBox{line.x, line.y, extent.width, extent.height};
}

Image render_scene(const SceneSpec& spec) {
    Image img = Image::create(spec.width, spec.height, 3);
    fill_rect(img, BoundingBox{0, 0, spec.width, spec.height}, spec.background);
    for (const auto& [rect, color] : spec.rects) fill_rect(img, rect, color);
    for (const TextLine& line : spec.lines) {
        draw_text(img, line.x, line.y, line.text, line.scale, spec.ink);
    }
    return img;
}

namespace {

// Hamming distance between a sampled 5x7 cell pattern and a glyph.
int glyph_distance(const std::array<std::uint8_t, 7>& rows, const bool pattern[7][5]) {
    int d = 0;
    for (int y = 0; y < 7; ++y) {
        for (int x = 0; x < 5; ++x) {
            const bool inked = (rows[y] >> (4 - x)) & 1;
            if (inked != pattern[y][x]) ++d;
        }
    }
    return d;
}

const std::string& readable_glyphs() {
    static const std::string glyphs =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789!?.,:-#/()'=+";
    return glyphs;
}

}  // namespace

std::string read_text_line(const Image& image, const BoundingBox& box, int scale) {
    const Image gray = to_grayscale(image);
    const int chars = (box.w / scale + 1) / kGlyphAdvance;
    std::string out;
    for (int k = 0; k < chars; ++k) {
        const int cx = box.x + k * kGlyphAdvance * scale;
        const int cy = box.y;

        double means[7][5];
        double lo = 255.0, hi = 0.0;
        bool in_bounds = true;
        for (int gy = 0; gy < 7 && in_bounds; ++gy) {
            for (int gx = 0; gx < 5; ++gx) {
                double sum = 0.0;
                int n = 0;
                for (int sy = 0; sy < scale; ++sy) {
                    for (int sx = 0; sx < scale; ++sx) {
                        const int px = cx + gx * scale + sx;
                        const int py = cy + gy * scale + sy;
                        if (px < 0 || py < 0 || px >= gray.width || py >= gray.height) {
                            in_bounds = false;
                            continue;
                        }
                        sum += gray.at(px, py, 0);
                        ++n;
                    }
                }
                means[gy][gx] = n > 0 ? sum / n : 255.0;
                lo = std::min(lo, means[gy][gx]);
                hi = std::max(hi, means[gy][gx]);
            }
        }
        if (!in_bounds) break;

        if (hi - lo < 48.0) {
            // Not enough contrast to carry a glyph: blank (or blurred-out) cell.
            out += ' ';
            continue;
        }
        const double threshold = (hi + lo) / 2.0;
        bool pattern[7][5];
        int inked = 0;
        for (int gy = 0; gy < 7; ++gy) {
            for (int gx = 0; gx < 5; ++gx) {
                pattern[gy][gx] = means[gy][gx] < threshold;  // dark ink
                if (pattern[gy][gx]) ++inked;
            }
        }
        if (inked == 0) {
            out += ' ';
            continue;
        }

        char best = 0;
        int best_distance = 36;
        for (char c : readable_glyphs()) {
            const int d = glyph_distance(glyph_rows(c), pattern);
            if (d < best_distance) {
                best_distance = d;
                best = c;
            }
        }
        if (best != 0 && best_distance <= 8) out += best;
        // Cells that match nothing well are dropped entirely.
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    while (!out.empty() && out.front() == ' ') out.erase(out.begin());
    return out;
}

// ---- mini dataset -------------------------------------------------------------

namespace {

constexpr privar::Rgb kPaper{236, 233, 226};
constexpr privar::Rgb kCard{246, 242, 235};
constexpr privar::Rgb kScreen{214, 218, 224};
constexpr privar::Rgb kDark{44, 46, 52};
constexpr privar::Rgb kWood{122, 94, 70};
constexpr privar::Rgb kSofa{96, 110, 128};

MiniItem make_item(std::string id, std::string scene, bool sensitive,
                   std::vector<std::string> types, SceneSpec spec,
                   std::vector<std::size_t> gt_lines, std::string original_topic,
                   std::string obfuscated_topic) {
    MiniItem item;
    item.id = std::move(id);
    item.scene = std::move(scene);
    item.sensitive = sensitive;
    item.types = std::move(types);
    item.spec = std::move(spec);
    item.gt_line_indices = std::move(gt_lines);
    item.original_topic = std::move(original_topic);
    item.obfuscated_topic = std::move(obfuscated_topic);
    return item;
}

}  // namespace

std::vector<MiniItem> mini_items() {
    std::vector<MiniItem> items;

    {  // office: monitor with an on-screen report
        SceneSpec spec;
        spec.background = {82, 88, 96};
        spec.rects = {{{20, 150, 280, 70}, kWood},
                      {{40, 28, 250, 110}, kDark},
                      {{50, 38, 230, 90}, kScreen}};
        spec.lines = {{58, 52, 2, "QUARTERLY SALARIES"}, {58, 84, 2, "ACME INTERNAL ONLY"}};
        items.push_back(make_item("office-monitor", "office", true, {"on-screen-text"},
                                  std::move(spec), {0, 1}, "an on-screen salary report",
                                  "text on an office monitor"));
    }
    {  // office: handwritten password note (no digits anywhere)
        SceneSpec spec;
        spec.background = {86, 90, 98};
        spec.rects = {{{16, 160, 290, 60}, kWood}, {{28, 40, 264, 96}, kPaper}};
        spec.lines = {{40, 56, 2, "REMEMBER THE MILK"}, {40, 96, 2, "PASSWORD IS SUNSHINE"}};
        items.push_back(make_item("office-password-note", "office", true, {"password-note"},
                                  std::move(spec), {1},
                                  "a password note reading sunshine ocean",
                                  "a blurred handwritten note"));
    }
    {  // office: tidy desk, no text at all
        SceneSpec spec;
        spec.background = {84, 90, 97};
        spec.rects = {{{12, 150, 296, 74}, kWood}, {{220, 96, 54, 54}, {74, 120, 80}}};
        items.push_back(make_item("office-blank-desk", "office", false, {}, std::move(spec),
                                  {}, "a tidy desk", "a tidy desk"));
    }
    {  // office: published paper, the classic hard negative
        SceneSpec spec;
        spec.background = {88, 92, 100};
        spec.rects = {{{30, 34, 260, 120}, kPaper}};
        spec.lines = {{44, 52, 2, "GRADIENT METHODS"}, {44, 92, 2, "SURVEY PAGE ONE"}};
        items.push_back(make_item("office-published-paper", "office", false, {},
                                  std::move(spec), {}, "a published research paper",
                                  "a printed page"));
    }
    {  // living room: credit card on the coffee table
        SceneSpec spec;
        spec.background = {104, 98, 90};
        spec.rects = {{{8, 20, 304, 60}, kSofa}, {{30, 120, 260, 96}, kWood},
                      {{44, 136, 236, 66}, kCard}};
        spec.lines = {{50, 146, 2, "BANK OF EXAMPLE"}, {50, 176, 2, "4111 1111 1111 1111"}};
        items.push_back(make_item("living-room-credit-card", "living-room", true,
                                  {"credit-card"}, std::move(spec), {1},
                                  "a credit card number on the coffee table",
                                  "a credit card number on the coffee table"));
    }
    {  // living room: framed poster
        SceneSpec spec;
        spec.background = {102, 100, 92};
        spec.rects = {{{8, 170, 304, 56}, kSofa}, {{90, 30, 150, 90}, {210, 205, 196}}};
        spec.lines = {{102, 64, 2, "HOME SWEET HOME"}};
        items.push_back(make_item("living-room-poster", "living-room", false, {},
                                  std::move(spec), {}, "a decorative wall poster",
                                  "a decorative wall poster"));
    }
    {  // living room: academic transcript on the table
        SceneSpec spec;
        spec.background = {100, 97, 90};
        spec.rects = {{{20, 130, 280, 94}, kWood}, {{44, 30, 240, 92}, kPaper}};
        spec.lines = {{56, 46, 2, "OFFICIAL TRANSCRIPT"}, {56, 86, 2, "SPRING TERM RECORDS"}};
        items.push_back(make_item("living-room-transcript", "living-room", true,
                                  {"transcript"}, std::move(spec), {0, 1},
                                  "an academic transcript with grades",
                                  "an obscured official document"));
    }
    {  // bedroom: medical report on the nightstand
        SceneSpec spec;
        spec.background = {96, 90, 100};
        spec.rects = {{{10, 150, 200, 76}, {130, 120, 140}}, {{60, 36, 220, 92}, kPaper}};
        spec.lines = {{72, 52, 2, "DIAGNOSIS REPORT"}, {72, 92, 2, "DR SMITH CLINIC"}};
        items.push_back(make_item("bedroom-medical", "bedroom", true, {"medical-report"},
                                  std::move(spec), {0},
                                  "a medical report naming a diagnosis",
                                  "an unreadable clinical document"));
    }
    {  // bedroom: bare wall and a window
        SceneSpec spec;
        spec.background = {94, 88, 98};
        spec.rects = {{{24, 30, 110, 90}, {170, 190, 210}}, {{12, 160, 296, 66}, {128, 118, 138}}};
        items.push_back(make_item("bedroom-wall", "bedroom", false, {}, std::move(spec), {},
                                  "a bare bedroom wall", "a bare bedroom wall"));
    }
    {  // café: visitor badge with an id number
        SceneSpec spec;
        spec.background = {108, 100, 88};
        spec.rects = {{{16, 140, 290, 84}, kWood}, {{70, 40, 190, 80}, kCard}};
        spec.lines = {{84, 56, 2, "VISITOR BADGE"}, {84, 92, 2, "ID: 523-44-8121"}};
        items.push_back(make_item("cafe-id-card", "café", true, {"id-card"}, std::move(spec),
                                  {1}, "an id card with number 523-44-8121",
                                  "a small plastic card"));
    }
    {  // café: menu board with prices
        SceneSpec spec;
        spec.background = {106, 98, 86};
        spec.rects = {{{60, 26, 200, 96}, {64, 58, 54}}, {{70, 36, 180, 76}, {228, 222, 210}}};
        spec.lines = {{78, 48, 2, "COFFEE 3.50"}, {78, 84, 2, "TEA 2.80"}};
        items.push_back(make_item("cafe-menu", "café", false, {}, std::move(spec), {},
                                  "a cafe menu with prices", "a cafe menu board"));
    }
    {  // café: folded password note on the table (prose only)
        SceneSpec spec;
        spec.background = {110, 101, 90};
        spec.rects = {{{12, 130, 296, 94}, kWood}, {{40, 44, 252, 72}, kPaper}};
        spec.lines = {{52, 70, 2, "CODE IS BLUE HARBOR"}};
        items.push_back(make_item("cafe-password-note", "café", true, {"password-note"},
                                  std::move(spec), {0},
                                  "a password note reading blue harbor",
                                  "a folded slip of paper"));
    }
    return items;
}

namespace {

std::string transcript_for(const MiniItem& item) {
    std::vector<TextLine> lines = item.spec.lines;
    std::stable_sort(lines.begin(), lines.end(), [](const TextLine& a, const TextLine& b) {
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i].text;
    }
    return out;
}

void add_scenario(ScenarioTable& table, std::uint64_t fp, const MiniItem& item,
                  const std::string& topic) {
    if (table.contains(fp)) {
        const MockScenario& existing = table.lookup(fp);
        if (existing.risk != item.sensitive || (existing.risk && existing.topic != topic)) {
            throw InvalidArgumentError("fixture fingerprint collision with divergent content");
        }
        return;
    }
    MockScenario s;
    s.fingerprint = fp;
    s.scene = item.scene;
    s.scene_rationale = "layout and furnishings of the " + item.scene + " fixture";
    s.topic = topic;
    s.risk = item.sensitive;
    s.risk_rationale = item.sensitive
                           ? "the " + topic + " can expose personal information"
                           : "nothing in view carries personal information";
    table.add(s);
}

struct DetectionRow {
    std::string frame_id;
    std::string class_label;
    double confidence;
    BoundingBox box;
};

std::vector<DetectionRow> recorded_detections(const std::vector<MiniItem>& items) {
    std::vector<DetectionRow> rows;
    auto box_for = [](const MiniItem& item) {
        return item.spec.rects.empty() ? BoundingBox{10, 10, 60, 40}
                                       : item.spec.rects.back().first;
    };
    for (const MiniItem& item : items) {
        const BoundingBox box = box_for(item);
        if (item.id == "office-monitor") {
            rows.push_back({item.id, "monitor", 0.92, box});
        } else if (item.id == "office-password-note") {
            rows.push_back({item.id, "document", 0.88, box});
            rows.push_back({item.id, "laptop", 0.40, box});  // sub-threshold
        } else if (item.id == "office-blank-desk") {
            rows.push_back({item.id, "chair", 0.66, box});
        } else if (item.id == "office-published-paper") {
            // Hard negative: looks like a sensitive document to the detector.
            rows.push_back({item.id, "document", 0.81, box});
        } else if (item.id == "living-room-credit-card") {
            rows.push_back({item.id, "credit-card", 0.95, box});
        } else if (item.id == "living-room-poster") {
            rows.push_back({item.id, "picture-frame", 0.73, box});
        } else if (item.id == "living-room-transcript") {
            rows.push_back({item.id, "document", 0.90, box});
        } else if (item.id == "bedroom-medical") {
            rows.push_back({item.id, "medical-chart", 0.86, box});
        } else if (item.id == "cafe-id-card") {
            rows.push_back({item.id, "id-card", 0.91, box});
        } else if (item.id == "cafe-menu") {
            rows.push_back({item.id, "menu-board", 0.70, box});
        } else if (item.id == "cafe-password-note") {
            rows.push_back({item.id, "document", 0.84, box});
        }
        // bedroom-wall deliberately has no recorded detections.
    }
    return rows;
}

}  // namespace

void generate_mini_dataset(const std::string& dir) {
    namespace fs = std::filesystem;
    const std::vector<MiniItem> items = mini_items();
    fs::create_directories(fs::path(dir) / "images");

    DatasetManifest manifest;
    manifest.version = 1;
    manifest.base_dir = dir;

    std::vector<Image> raws;
    for (const MiniItem& item : items) {
        const Image raw = render_scene(item.spec);
        save_png(raw, (fs::path(dir) / "images" / (item.id + ".png")).string());
        raws.push_back(raw);

        DatasetItem entry;
        entry.id = item.id;
        entry.image_path = "images/" + item.id + ".png";
        entry.sensitive = item.sensitive;
        entry.scene = item.scene;
        entry.sensitive_types = item.types;
        std::vector<BoundingBox> gt;
        for (std::size_t idx : item.gt_line_indices) gt.push_back(line_bbox(item.spec.lines[idx]));
        sort_reading_order(gt);
        entry.gt_boxes = std::move(gt);
        if (!item.spec.lines.empty()) entry.transcript = transcript_for(item);
        entry.fingerprint = fingerprint_hex(fingerprint(raw));
        manifest.items.push_back(std::move(entry));
    }
    std::sort(manifest.items.begin(), manifest.items.end(),
              [](const DatasetItem& a, const DatasetItem& b) { return a.id < b.id; });
    save_manifest(manifest, (fs::path(dir) / "manifest.json").string());

    // Scenario table + recorded OCR for every pipeline variant. This runs the
    // real edge chain, so the fingerprints and sidecar text are exactly what
    // the pipeline will produce at evaluation time.
    ScenarioTable scenarios;
    std::map<std::string, std::vector<OcrRegion>> ocr_original;
    std::map<std::string, std::vector<OcrRegion>> ocr_privar;
    std::map<std::string, std::vector<OcrRegion>> ocr_oracle;
    std::map<std::string, std::vector<OcrRegion>> ocr_noobf;

    for (std::size_t i = 0; i < items.size(); ++i) {
        const MiniItem& item = items[i];
        const Image comp = decompress(compress(raws[i], 75));

        EdgeParams privar_params;
        privar_params.detector = DetectorChoice::heuristic;
        privar_params.quality = 75;
        const Image privar_view =
            decompress(edge_process(comp, item.id, privar_params).wire_jpeg);

        EdgeParams oracle_params = privar_params;
        oracle_params.detector = DetectorChoice::annotation;
        oracle_params.annotations = &manifest;
        const Image oracle_view =
            decompress(edge_process(comp, item.id, oracle_params).wire_jpeg);

        EdgeParams noobf_params = privar_params;
        noobf_params.obfuscation_enabled = false;
        const Image noobf_view =
            decompress(edge_process(comp, item.id, noobf_params).wire_jpeg);

        add_scenario(scenarios, fingerprint(comp), item, item.original_topic);
        add_scenario(scenarios, fingerprint(privar_view), item, item.obfuscated_topic);
        add_scenario(scenarios, fingerprint(oracle_view), item, item.obfuscated_topic);
        add_scenario(scenarios, fingerprint(noobf_view), item, item.original_topic);

        auto read_into = [&](std::map<std::string, std::vector<OcrRegion>>& sink,
                             const Image& source) {
            std::vector<OcrRegion>& regions = sink[item.id];
            for (const TextLine& line : item.spec.lines) {
                const BoundingBox box = line_bbox(line);
                regions.push_back(OcrRegion{box, read_text_line(source, box, line.scale)});
            }
            if (regions.empty()) {
                regions.push_back(OcrRegion{BoundingBox{0, 0, 1, 1}, ""});
            }
        };
        read_into(ocr_original, comp);
        read_into(ocr_privar, privar_view);
        read_into(ocr_oracle, oracle_view);
        read_into(ocr_noobf, noobf_view);
    }

    scenarios.save((fs::path(dir) / "scenarios.json").string());
    write_file((fs::path(dir) / "ocr_original.csv").string(), OcrSidecar::to_csv(ocr_original));
    write_file((fs::path(dir) / "ocr_privar.csv").string(), OcrSidecar::to_csv(ocr_privar));
    write_file((fs::path(dir) / "ocr_oracle.csv").string(), OcrSidecar::to_csv(ocr_oracle));
    write_file((fs::path(dir) / "ocr_noobf.csv").string(), OcrSidecar::to_csv(ocr_noobf));

    std::string detections = "frame_id,class,confidence,x,y,w,h\n";
    for (const DetectionRow& row : recorded_detections(items)) {
        char conf[16];
        std::snprintf(conf, sizeof(conf), "%.2f", row.confidence);
        detections += csv_join({row.frame_id, row.class_label, conf,
                                std::to_string(row.box.x), std::to_string(row.box.y),
                                std::to_string(row.box.w), std::to_string(row.box.h)});
        detections += '\n';
    }
    write_file((fs::path(dir) / "detections.csv").string(), detections);
}

}  // namespace fixtures
