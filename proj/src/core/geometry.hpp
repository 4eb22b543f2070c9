#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace privar {

// Axis-aligned text region. x,y is the top-left pixel; w,h are positive.
struct BoundingBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    long long area() const { return static_cast<long long>(w) * h; }
    int right() const { return x + w; }
    int bottom() const { return y + h; }

    bool operator==(const BoundingBox&) const = default;
};

void require_valid(const BoundingBox& box, const std::string& what = "box");

// Intersection over union; 0 when either box is empty.
double iou(const BoundingBox& a, const BoundingBox& b);

BoundingBox union_rect(const BoundingBox& a, const BoundingBox& b);

// Clamps the box to [0,width)x[0,height). Returns false when nothing is left.
bool clamp_to_bounds(BoundingBox& box, int width, int height);

// Sorts by (y, x), then (h, w) for full determinism.
void sort_reading_order(std::vector<BoundingBox>& boxes);

// One value in {0,1} per pixel; dimensions match the target image.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    std::uint8_t at(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) { return bits[static_cast<std::size_t>(y) * width + x]; }

    std::size_t popcount() const;
};

// Where a box set came from: the native detector, ground-truth annotations,
// or a replayed external-detector sidecar.
enum class DetectionKind { heuristic, annotation, external_file };

struct DetectionSource {
    DetectionKind kind = DetectionKind::heuristic;
    std::string provenance;
};

struct BoxSet {
    std::vector<BoundingBox> boxes;
    DetectionSource source;
};

}  // namespace privar
