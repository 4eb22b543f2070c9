#pragma once


#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace privar {

inline const std::vector<std::string>& allowed_scenes() {
    static const std::vector<std::string> scenes = {"office", "living-room", "bedroom",
                                                    "café"};
    return scenes;
}

inline const std::vector<std::string>& allowed_sensitive_types() {
    static const std::vector<std::string> types = {"id-card",        "credit-card",
                                                   "password-note",  "transcript",
                                                   "medical-report", "on-screen-text"};
    return types;
}

// One manifest entry: image, ground truth, and optional recorded extras.
struct DatasetItem {
    std::string id;
    std::string image_path;  // relative to the manifest file
    bool sensitive = false;
    std::string scene;
    std::vector<std::string> sensitive_types;
    std::optional<std::vector<BoundingBox>> gt_boxes;
    std::optional<std::string> transcript;
    std::string fingerprint;  // hex hash of the decoded source image
};

struct DatasetManifest {
    int version = 1;
    std::string base_dir;  // directory of the manifest file
    std::vector<DatasetItem> items;
};

DatasetManifest load_manifest(const std::string& path);
std::string manifest_to_json(const DatasetManifest& manifest);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

// Annotated ground-truth boxes, clamped to the image bounds, tagged
// source=annotation. Missing annotations raise MissingError naming the item.
BoxSet load_annotated_boxes(const DatasetItem& item, int image_width, int image_height);

// External text-detection sidecar: header `frame_id,x,y,w,h,confidence`.
struct ExternalDetection {
    BoundingBox box;
    double confidence = 0.0;
};

class DetectionSidecar {
public:
    static DetectionSidecar load(const std::string& path);
    static DetectionSidecar from_csv(const std::string& text, const std::string& origin);

    // Boxes for one frame sorted by (y, x); empty when the frame is absent.
    std::vector<BoundingBox> boxes_for(const std::string& frame_id) const;
    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, std::vector<ExternalDetection>> rows_;
    std::string origin_;
};

// Recorded object-detector sidecar: header `frame_id,class,confidence,x,y,w,h`.
struct RecordedDetection {
    std::string frame_id;
    std::string class_label;
    double confidence = 0.0;
    BoundingBox box;
};

class RecordedDetectionSidecar {
public:
    static RecordedDetectionSidecar load(const std::string& path);
    static RecordedDetectionSidecar from_csv(const std::string& text, const std::string& origin);

    std::vector<RecordedDetection> detections_for(const std::string& frame_id) const;

private:
    std::map<std::string, std::vector<RecordedDetection>> rows_;
    std::string origin_;
};

// Recorded OCR sidecar: header `frame_id,x,y,w,h,text`; one row per region.
struct OcrRegion {
    BoundingBox box;
    std::string text;
};

class OcrSidecar {
public:
    static OcrSidecar load(const std::string& path);
    static OcrSidecar from_csv(const std::string& text, const std::string& origin);
    static std::string to_csv(const std::map<std::string, std::vector<OcrRegion>>& rows);

    bool has_frame(const std::string& frame_id) const;
    // Region texts in reading order (y, then x), joined with '\n'.
    std::string text_for(const std::string& frame_id) const;
    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, std::vector<OcrRegion>> rows_;
    std::string origin_;
};

std::string join_path(const std::string& dir, const std::string& rel);

}  // namespace privar
