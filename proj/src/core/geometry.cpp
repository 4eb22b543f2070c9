#include "geometry.hpp"

#include <algorithm>
#include <numeric>

#include "errors.hpp"

namespace privar {

void require_valid(const BoundingBox& box, const std::string& what) {
    if (box.w <= 0 || box.h <= 0) {
        throw InvalidArgumentError(what + ": width and height must be positive, got " +
                                   std::to_string(box.w) + "x" + std::to_string(box.h));
    }
    if (box.x < 0 || box.y < 0) {
        throw InvalidArgumentError(what + ": top-left must be non-negative, got (" +
                                   std::to_string(box.x) + "," + std::to_string(box.y) + ")");
    }
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    if (a.w <= 0 || a.h <= 0 || b.w <= 0 || b.h <= 0) return 0.0;
    const int ix = std::max(a.x, b.x);
    const int iy = std::max(a.y, b.y);
    const int ir = std::min(a.right(), b.right());
    const int ib = std::min(a.bottom(), b.bottom());
    if (ir <= ix || ib <= iy) return 0.0;
    const double inter = static_cast<double>(ir - ix) * (ib - iy);
    const double uni = static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter;
    return inter / uni;
}

BoundingBox union_rect(const BoundingBox& a, const BoundingBox& b) {
    const int x = std::min(a.x, b.x);
    const int y = std::min(a.y, b.y);
    const int r = std::max(a.right(), b.right());
    const int bo = std::max(a.bottom(), b.bottom());
    return BoundingBox{x, y, r - x, bo - y};
}

bool clamp_to_bounds(BoundingBox& box, int width, int height) {
    const int x0 = std::clamp(box.x, 0, width);
    const int y0 = std::clamp(box.y, 0, height);
    const int x1 = std::clamp(box.x + box.w, 0, width);
    const int y1 = std::clamp(box.y + box.h, 0, height);
    box = BoundingBox{x0, y0, x1 - x0, y1 - y0};
    return box.w > 0 && box.h > 0;
}

void sort_reading_order(std::vector<BoundingBox>& boxes) {
    std::sort(boxes.begin(), boxes.end(), [](const BoundingBox& a, const BoundingBox& b) {
        if (a.y != b.y) return a.y < b.y;
        if (a.x != b.x) return a.x < b.x;
        if (a.h != b.h) return a.h < b.h;
        return a.w < b.w;
    });
}

std::size_t BinaryMask::popcount() const {
    return static_cast<std::size_t>(
        std::accumulate(bits.begin(), bits.end(), static_cast<std::size_t>(0)));
}

}  // namespace privar
