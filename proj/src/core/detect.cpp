#include "detect.hpp"

#include <algorithm>
#include <array>

#include "errors.hpp"

namespace privar {

namespace {

constexpr int kLineMergeRadius = 10;  // horizontal dilation half-width, px

Image morphological_gradient_3x3(const Image& gray) {
    Image out = Image::create(gray.width, gray.height, 1);
    for (int y = 0; y < gray.height; ++y) {
        for (int x = 0; x < gray.width; ++x) {
            std::uint8_t lo = 255, hi = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = std::clamp(y + dy, 0, gray.height - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = std::clamp(x + dx, 0, gray.width - 1);
                    const std::uint8_t v = gray.at(xx, yy, 0);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
            out.at(x, y, 0) = static_cast<std::uint8_t>(hi - lo);
        }
    }
    return out;
}

std::vector<std::uint8_t> binarize(const Image& gray, int threshold) {
    std::vector<std::uint8_t> bits(gray.pixels.size());
    for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
        bits[i] = gray.pixels[i] > threshold ? 1 : 0;
    }
    return bits;
}

void dilate_horizontal(std::vector<std::uint8_t>& bits, int width, int height, int radius) {
    std::vector<std::uint8_t> out(bits.size(), 0);
    for (int y = 0; y < height; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * width;
        int run_until = -1;
        for (int x = 0; x < width; ++x) {
            if (bits[row + x]) run_until = std::max(run_until, x + radius);
            if (x <= run_until) out[row + x] = 1;
        }
        run_until = width;
        for (int x = width - 1; x >= 0; --x) {
            if (bits[row + x]) run_until = std::min(run_until, x - radius);
            if (x >= run_until) out[row + x] = 1;
        }
    }
    bits = std::move(out);
}

std::vector<BoundingBox> connected_component_boxes(const std::vector<std::uint8_t>& bits,
                                                   int width, int height) {
    std::vector<BoundingBox> boxes;
    std::vector<std::uint8_t> seen(bits.size(), 0);
    std::vector<int> stack;
    for (int sy = 0; sy < height; ++sy) {
        for (int sx = 0; sx < width; ++sx) {
            const std::size_t si = static_cast<std::size_t>(sy) * width + sx;
            if (!bits[si] || seen[si]) continue;
            int x0 = sx, x1 = sx, y0 = sy, y1 = sy;
            seen[si] = 1;
            stack.assign(1, static_cast<int>(si));
            while (!stack.empty()) {
                const int i = stack.back();
                stack.pop_back();
                const int x = i % width;
                const int y = i / width;
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx;
                        const int ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * width + nx;
                        if (bits[ni] && !seen[ni]) {
                            seen[ni] = 1;
                            stack.push_back(static_cast<int>(ni));
                        }
                    }
                }
            }
            boxes.push_back(BoundingBox{x0, y0, x1 - x0 + 1, y1 - y0 + 1});
        }
    }
    return boxes;
}

}  // namespace

void require_valid(const DetectorConfig& config) {
    if (config.min_area < 1) {
        throw InvalidArgumentError("min_area must be >= 1, got " +
                                   std::to_string(config.min_area));
    }
    if (config.max_area_fraction <= 0.0 || config.max_area_fraction > 1.0) {
        throw InvalidArgumentError("max_area_fraction must be in (0,1], got " +
                                   std::to_string(config.max_area_fraction));
    }
    if (config.min_aspect > config.max_aspect) {
        throw InvalidArgumentError("min_aspect must not exceed max_aspect");
    }
    if (config.merge_iou < 0.0 || config.merge_iou > 1.0) {
        throw InvalidArgumentError("merge_iou must be in [0,1], got " +
                                   std::to_string(config.merge_iou));
    }
    if (config.fixed_threshold && (*config.fixed_threshold < 0 || *config.fixed_threshold > 255)) {
        throw InvalidArgumentError("fixed binarization threshold must be in 0..255");
    }
}

int otsu_threshold(const Image& gray) {
    require_valid(gray);
    if (gray.channels != 1) throw InvalidArgumentError("otsu_threshold expects grayscale");
    std::array<long long, 256> hist{};
    for (std::uint8_t v : gray.pixels) ++hist[v];
    const long long total = static_cast<long long>(gray.pixels.size());

    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) sum_all += static_cast<double>(i) * hist[i];

    double sum_bg = 0.0;
    long long w_bg = 0;
    double best_var = -1.0;
    int best_t = 0;
    for (int t = 0; t < 256; ++t) {
        w_bg += hist[t];
        if (w_bg == 0) continue;
        const long long w_fg = total - w_bg;
        if (w_fg == 0) break;
        sum_bg += static_cast<double>(t) * hist[t];
        const double mean_bg = sum_bg / w_bg;
        const double mean_fg = (sum_all - sum_bg) / w_fg;
        const double between = static_cast<double>(w_bg) * w_fg * (mean_bg - mean_fg) *
                               (mean_bg - mean_fg);
        if (between > best_var) {
            best_var = between;
            best_t = t;
        }
    }
    return best_t;
}

std::vector<BoundingBox> detect_heuristic(const Image& image, const DetectorConfig& config) {
    require_valid(image);
    require_valid(config);

    const Image gray = to_grayscale(image);
    const Image grad = morphological_gradient_3x3(gray);
    const int threshold =
        config.fixed_threshold ? *config.fixed_threshold : otsu_threshold(grad);
    std::vector<std::uint8_t> bits = binarize(grad, threshold);
    dilate_horizontal(bits, grad.width, grad.height, kLineMergeRadius);

    std::vector<BoundingBox> boxes = connected_component_boxes(bits, grad.width, grad.height);

    const double image_area = static_cast<double>(image.width) * image.height;
    std::vector<BoundingBox> kept;
    for (const BoundingBox& box : boxes) {
        const double area = static_cast<double>(box.area());
        if (area < config.min_area) continue;
        if (area > config.max_area_fraction * image_area) continue;
        const double aspect = static_cast<double>(box.w) / box.h;
        if (aspect < config.min_aspect || aspect > config.max_aspect) continue;
        kept.push_back(box);
    }

    return merge_boxes(std::move(kept), config.merge_iou);
}

BoxSet detect_heuristic_tagged(const Image& image, const DetectorConfig& config) {
    return BoxSet{detect_heuristic(image, config),
                  DetectionSource{DetectionKind::heuristic, "heuristic-v1"}};
}

std::vector<BoundingBox> merge_boxes(std::vector<BoundingBox> boxes, double iou_threshold) {
    if (iou_threshold < 0.0 || iou_threshold > 1.0) {
        throw InvalidArgumentError("iou_threshold must be in [0,1], got " +
                                   std::to_string(iou_threshold));
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < boxes.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < boxes.size() && !changed; ++j) {
                if (iou(boxes[i], boxes[j]) >= iou_threshold) {
                    boxes[i] = union_rect(boxes[i], boxes[j]);
                    boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
                    changed = true;
                }
            }
        }
    }
    sort_reading_order(boxes);
    return boxes;
}

}  // namespace privar
