#pragma once

#include <optional>
#include <vector>

#include "geometry.hpp"
#include "image.hpp"

namespace privar {

// Filter and binarization knobs for the native line detector.
struct DetectorConfig {
    int min_area = 64;                 // px^2, on the component bounding box
    double max_area_fraction = 0.5;    // of the whole image
    double min_aspect = 1.2;           // w/h
    double max_aspect = 25.0;
    std::optional<int> fixed_threshold;  // nullopt = Otsu over the gradient image
    double merge_iou = 0.3;
};

void require_valid(const DetectorConfig& config);

// Otsu threshold over a grayscale image's histogram.
int otsu_threshold(const Image& gray);

// Native text-line detector:
// grayscale -> 3x3 morphological gradient -> binarize -> horizontal dilation
// (radius 10, merges characters and words into lines) -> 8-connected
// components -> area/aspect filter -> IoU merge -> sorted by (y, x).
// Deterministic; an image without text yields an empty list.
std::vector<BoundingBox> detect_heuristic(const Image& image, const DetectorConfig& config = {});

BoxSet detect_heuristic_tagged(const Image& image, const DetectorConfig& config = {});

// Transitively merges box pairs with IoU >= threshold into their union
// rectangle until fixpoint; output sorted by (y, x). Idempotent.
std::vector<BoundingBox> merge_boxes(std::vector<BoundingBox> boxes, double iou_threshold);

}  // namespace privar
