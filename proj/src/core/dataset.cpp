#include "dataset.hpp"

#include <algorithm>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "codec.hpp"
#include "csv.hpp"
#include "errors.hpp"

namespace privar {

namespace {

using nlohmann::json;

BoundingBox box_from_json(const json& j) {
    return BoundingBox{j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(),
                       j.at("h").get<int>()};
}

json box_to_json(const BoundingBox& b) {
    return json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}};
}

void validate_item(const DatasetItem& item) {
    if (item.id.empty()) throw ParseError("manifest item with empty id", "");
    if (item.image_path.empty()) {
        throw ParseError("manifest item " + item.id + " has empty image_path", "");
    }
    const auto& scenes = allowed_scenes();
    if (std::find(scenes.begin(), scenes.end(), item.scene) == scenes.end()) {
        throw ParseError("manifest item " + item.id + " has unknown scene \"" + item.scene +
                             "\"",
                         item.scene);
    }
    const auto& types = allowed_sensitive_types();
    for (const std::string& t : item.sensitive_types) {
        if (std::find(types.begin(), types.end(), t) == types.end()) {
            throw ParseError("manifest item " + item.id + " has unknown sensitive type \"" +
                                 t + "\"",
                             t);
        }
    }
    if (!item.sensitive && !item.sensitive_types.empty()) {
        throw ParseError("manifest item " + item.id +
                             " is non-sensitive but lists sensitive types",
                         "");
    }
    if (item.gt_boxes) {
        for (const BoundingBox& b : *item.gt_boxes) {
            if (b.w <= 0 || b.h <= 0 || b.x < 0 || b.y < 0) {
                throw ParseError("manifest item " + item.id + " has an invalid gt_box", "");
            }
        }
    }
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError("manifest " + path + " is not valid JSON: " + e.what(), "");
    }

    DatasetManifest manifest;
    manifest.base_dir = std::filesystem::path(path).parent_path().string();
    try {
        manifest.version = doc.at("version").get<int>();
        for (const json& j : doc.at("items")) {
            DatasetItem item;
            item.id = j.at("id").get<std::string>();
            item.image_path = j.at("image_path").get<std::string>();
            const std::string label = j.at("label").get<std::string>();
            if (label == "sensitive") {
                item.sensitive = true;
            } else if (label == "non-sensitive") {
                item.sensitive = false;
            } else {
                throw ParseError("manifest item " + item.id + " has unknown label \"" + label +
                                     "\"",
                                 label);
            }
            item.scene = j.at("scene").get<std::string>();
            if (j.contains("sensitive_types")) {
                item.sensitive_types = j.at("sensitive_types").get<std::vector<std::string>>();
            }
            if (j.contains("gt_boxes")) {
                std::vector<BoundingBox> boxes;
                for (const json& bj : j.at("gt_boxes")) boxes.push_back(box_from_json(bj));
                item.gt_boxes = std::move(boxes);
            }
            if (j.contains("transcript")) {
                item.transcript = j.at("transcript").get<std::string>();
            }
            if (j.contains("fingerprint")) {
                item.fingerprint = j.at("fingerprint").get<std::string>();
            }
            validate_item(item);
            manifest.items.push_back(std::move(item));
        }
    } catch (const json::exception& e) {
        throw ParseError("manifest " + path + " has invalid structure: " + e.what(), "");
    }

    std::sort(manifest.items.begin(), manifest.items.end(),
              [](const DatasetItem& a, const DatasetItem& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < manifest.items.size(); ++i) {
        if (manifest.items[i].id == manifest.items[i - 1].id) {
            throw ParseError("manifest " + path + " has duplicate item id " +
                                 manifest.items[i].id,
                             "");
        }
    }
    return manifest;
}

std::string manifest_to_json(const DatasetManifest& manifest) {
    json items = json::array();
    for (const DatasetItem& item : manifest.items) {
        json j{{"id", item.id},
               {"image_path", item.image_path},
               {"label", item.sensitive ? "sensitive" : "non-sensitive"},
               {"scene", item.scene}};
        if (!item.sensitive_types.empty()) j["sensitive_types"] = item.sensitive_types;
        if (item.gt_boxes) {
            json boxes = json::array();
            for (const BoundingBox& b : *item.gt_boxes) boxes.push_back(box_to_json(b));
            j["gt_boxes"] = std::move(boxes);
        }
        if (item.transcript) j["transcript"] = *item.transcript;
        if (!item.fingerprint.empty()) j["fingerprint"] = item.fingerprint;
        items.push_back(std::move(j));
    }
    return json{{"version", manifest.version}, {"items", std::move(items)}}.dump(2) + "\n";
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    write_file(path, manifest_to_json(manifest));
}

BoxSet load_annotated_boxes(const DatasetItem& item, int image_width, int image_height) {
    if (!item.gt_boxes) {
        throw MissingError("item " + item.id + " carries no box annotations");
    }
    BoxSet set;
    set.source = DetectionSource{DetectionKind::annotation, item.id};
    for (BoundingBox box : *item.gt_boxes) {
        if (clamp_to_bounds(box, image_width, image_height)) set.boxes.push_back(box);
    }
    sort_reading_order(set.boxes);
    return set;
}

namespace {

void expect_header(const std::vector<std::string>& lines, const std::string& expected,
                   const std::string& origin) {
    if (lines.empty() || lines[0] != expected) {
        throw ParseError("sidecar " + origin + " must start with header \"" + expected + "\"",
                         lines.empty() ? "" : lines[0]);
    }
}

int parse_int(const std::string& s, const std::string& origin) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("sidecar " + origin + ": invalid integer \"" + s + "\"", s);
    }
}

double parse_double(const std::string& s, const std::string& origin) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("sidecar " + origin + ": invalid number \"" + s + "\"", s);
    }
}

}  // namespace

DetectionSidecar DetectionSidecar::load(const std::string& path) {
    const auto bytes = read_file(path);
    return from_csv(std::string(bytes.begin(), bytes.end()), path);
}

DetectionSidecar DetectionSidecar::from_csv(const std::string& text, const std::string& origin) {
    DetectionSidecar sidecar;
    sidecar.origin_ = origin;
    const std::vector<std::string> lines = split_lines(text);
    expect_header(lines, "frame_id,x,y,w,h,confidence", origin);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> f = csv_split(lines[i]);
        if (f.size() != 6) {
            throw ParseError("sidecar " + origin + " line " + std::to_string(i + 1) +
                                 " has " + std::to_string(f.size()) + " fields, expected 6",
                             lines[i]);
        }
        ExternalDetection det;
        det.box = BoundingBox{parse_int(f[1], origin), parse_int(f[2], origin),
                              parse_int(f[3], origin), parse_int(f[4], origin)};
        det.confidence = parse_double(f[5], origin);
        sidecar.rows_[f[0]].push_back(det);
    }
    return sidecar;
}

std::vector<BoundingBox> DetectionSidecar::boxes_for(const std::string& frame_id) const {
    std::vector<BoundingBox> boxes;
    auto it = rows_.find(frame_id);
    if (it == rows_.end()) return boxes;
    for (const ExternalDetection& det : it->second) boxes.push_back(det.box);
    sort_reading_order(boxes);
    return boxes;
}

RecordedDetectionSidecar RecordedDetectionSidecar::load(const std::string& path) {
    const auto bytes = read_file(path);
    return from_csv(std::string(bytes.begin(), bytes.end()), path);
}

RecordedDetectionSidecar RecordedDetectionSidecar::from_csv(const std::string& text,
                                                            const std::string& origin) {
    RecordedDetectionSidecar sidecar;
    sidecar.origin_ = origin;
    const std::vector<std::string> lines = split_lines(text);
    expect_header(lines, "frame_id,class,confidence,x,y,w,h", origin);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> f = csv_split(lines[i]);
        if (f.size() != 7) {
            throw ParseError("sidecar " + origin + " line " + std::to_string(i + 1) +
                                 " has " + std::to_string(f.size()) + " fields, expected 7",
                             lines[i]);
        }
        RecordedDetection det;
        det.frame_id = f[0];
        det.class_label = f[1];
        det.confidence = parse_double(f[2], origin);
        if (det.confidence < 0.0 || det.confidence > 1.0) {
            throw ParseError("sidecar " + origin + ": confidence out of [0,1]", lines[i]);
        }
        det.box = BoundingBox{parse_int(f[3], origin), parse_int(f[4], origin),
                              parse_int(f[5], origin), parse_int(f[6], origin)};
        sidecar.rows_[det.frame_id].push_back(det);
    }
    return sidecar;
}

std::vector<RecordedDetection> RecordedDetectionSidecar::detections_for(
    const std::string& frame_id) const {
    auto it = rows_.find(frame_id);
    if (it == rows_.end()) return {};
    return it->second;
}

OcrSidecar OcrSidecar::load(const std::string& path) {
    const auto bytes = read_file(path);
    return from_csv(std::string(bytes.begin(), bytes.end()), path);
}

OcrSidecar OcrSidecar::from_csv(const std::string& text, const std::string& origin) {
    OcrSidecar sidecar;
    sidecar.origin_ = origin;
    const std::vector<std::string> lines = split_lines(text);
    expect_header(lines, "frame_id,x,y,w,h,text", origin);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> f = csv_split(lines[i]);
        if (f.size() != 6) {
            throw ParseError("sidecar " + origin + " line " + std::to_string(i + 1) +
                                 " has " + std::to_string(f.size()) + " fields, expected 6",
                             lines[i]);
        }
        OcrRegion region;
        region.box = BoundingBox{parse_int(f[1], origin), parse_int(f[2], origin),
                                 parse_int(f[3], origin), parse_int(f[4], origin)};
        region.text = f[5];
        sidecar.rows_[f[0]].push_back(std::move(region));
    }
    return sidecar;
}

std::string OcrSidecar::to_csv(const std::map<std::string, std::vector<OcrRegion>>& rows) {
    std::string out = "frame_id,x,y,w,h,text\n";
    for (const auto& [frame_id, regions] : rows) {
        for (const OcrRegion& r : regions) {
            out += csv_join({frame_id, std::to_string(r.box.x), std::to_string(r.box.y),
                             std::to_string(r.box.w), std::to_string(r.box.h), r.text});
            out += '\n';
        }
    }
    return out;
}

bool OcrSidecar::has_frame(const std::string& frame_id) const {
    return rows_.count(frame_id) > 0;
}

std::string OcrSidecar::text_for(const std::string& frame_id) const {
    auto it = rows_.find(frame_id);
    if (it == rows_.end()) {
        throw MissingError("OCR sidecar " + origin_ + " has no rows for frame " + frame_id);
    }
    std::vector<OcrRegion> regions = it->second;
    std::stable_sort(regions.begin(), regions.end(), [](const OcrRegion& a, const OcrRegion& b) {
        if (a.box.y != b.box.y) return a.box.y < b.box.y;
        return a.box.x < b.box.x;
    });
    std::string out;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        if (i) out += '\n';
        out += regions[i].text;
    }
    return out;
}

std::string join_path(const std::string& dir, const std::string& rel) {
    if (rel.empty()) return dir;
    if (std::filesystem::path(rel).is_absolute() || dir.empty()) return rel;
    return (std::filesystem::path(dir) / rel).string();
}

}  // namespace privar
