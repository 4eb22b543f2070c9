#include "imaging.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "errors.hpp"

namespace privar {

namespace {

int reflect_index(int i, int n) {
    // Symmetric half-sample reflection: -1 -> 0, -2 -> 1, n -> n-1.
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

// One image plane in double precision, same row-major layout.
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

void convolve_separable(Plane& plane, const std::vector<double>& kernel) {
    if (kernel.size() <= 1) return;
    const int radius = static_cast<int>(kernel.size() / 2);
    const int w = plane.width;
    const int h = plane.height;
    Plane tmp{w, h, std::vector<double>(plane.values.size())};

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[k + radius] * plane.at(reflect_index(x + k, w), y);
            }
            tmp.at(x, y) = acc;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[k + radius] * tmp.at(x, reflect_index(y + k, h));
            }
            plane.at(x, y) = acc;
        }
    }
}

std::vector<Plane> split_planes(const Image& image) {
    std::vector<Plane> planes(image.channels);
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    for (int c = 0; c < image.channels; ++c) {
        planes[c].width = image.width;
        planes[c].height = image.height;
        planes[c].values.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            planes[c].values[i] = image.pixels[i * image.channels + c];
        }
    }
    return planes;
}

std::uint8_t quantize(double v) {
    if (v <= 0.0) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v));
}

Image merge_planes(const std::vector<Plane>& planes) {
    Image img = Image::create(planes[0].width, planes[0].height,
                              static_cast<int>(planes.size()));
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t c = 0; c < planes.size(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            img.pixels[i * planes.size() + c] = quantize(planes[c].values[i]);
        }
    }
    return img;
}

void blur_planes(std::vector<Plane>& planes, double sigma) {
    const std::vector<double> kernel = gaussian_kernel(sigma);
    for (Plane& p : planes) convolve_separable(p, kernel);
}

double bilinear(const Plane& p, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(p.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(p.height - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, p.width - 1);
    const int y1 = std::min(y0 + 1, p.height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = p.at(x0, y0) * (1.0 - fx) + p.at(x1, y0) * fx;
    const double bot = p.at(x0, y1) * (1.0 - fx) + p.at(x1, y1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

void warp_planes(std::vector<Plane>& planes, const WarpField& field) {
    for (Plane& p : planes) {
        Plane out{p.width, p.height, std::vector<double>(p.values.size())};
        for (int y = 0; y < p.height; ++y) {
            for (int x = 0; x < p.width; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * p.width + x;
                out.at(x, y) = bilinear(p, x + field.dx[i], y + field.dy[i]);
            }
        }
        p = std::move(out);
    }
}

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void require_valid(const ObfuscationParams& params) {
    if (!std::isfinite(params.sigma) || params.sigma < 0.0) {
        throw InvalidArgumentError("sigma must be finite and non-negative, got " +
                                   std::to_string(params.sigma));
    }
    if (!std::isfinite(params.beta) || params.beta < 0.0) {
        throw InvalidArgumentError("beta must be finite and non-negative, got " +
                                   std::to_string(params.beta));
    }
    if (params.pad < 0) {
        throw InvalidArgumentError("pad must be non-negative, got " +
                                   std::to_string(params.pad));
    }
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!std::isfinite(sigma) || sigma < 0.0) {
        throw InvalidArgumentError("sigma must be finite and non-negative, got " +
                                   std::to_string(sigma));
    }
    if (sigma == 0.0) return {1.0};
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        kernel[i + radius] = v;
        sum += v;
    }
    for (double& v : kernel) v /= sum;
    return kernel;
}

Image gaussian_blur(const Image& image, double sigma) {
    require_valid(image);
    if (!std::isfinite(sigma) || sigma < 0.0) {
        throw InvalidArgumentError("sigma must be finite and non-negative, got " +
                                   std::to_string(sigma));
    }
    if (sigma == 0.0) return image;
    std::vector<Plane> planes = split_planes(image);
    blur_planes(planes, sigma);
    return merge_planes(planes);
}

double WarpField::mean_magnitude() const {
    if (dx.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < dx.size(); ++i) {
        sum += std::sqrt(dx[i] * dx[i] + dy[i] * dy[i]);
    }
    return sum / static_cast<double>(dx.size());
}

double WarpField::max_magnitude() const {
    double m = 0.0;
    for (std::size_t i = 0; i < dx.size(); ++i) {
        m = std::max(m, std::sqrt(dx[i] * dx[i] + dy[i] * dy[i]));
    }
    return m;
}

WarpField make_warp_field(int width, int height, double beta, std::uint64_t seed) {
    if (width <= 0 || height <= 0) {
        throw InvalidArgumentError("warp field dimensions must be positive");
    }
    if (!std::isfinite(beta) || beta < 0.0) {
        throw InvalidArgumentError("beta must be finite and non-negative, got " +
                                   std::to_string(beta));
    }
    const std::size_t n = static_cast<std::size_t>(width) * height;
    WarpField field{width, height, std::vector<double>(n), std::vector<double>(n)};

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) field.dx[i] = 2.0 * unit_uniform(rng) - 1.0;
    for (std::size_t i = 0; i < n; ++i) field.dy[i] = 2.0 * unit_uniform(rng) - 1.0;

    const std::vector<double> kernel = gaussian_kernel(kFieldSmoothingSigma);
    Plane px{width, height, std::move(field.dx)};
    Plane py{width, height, std::move(field.dy)};
    convolve_separable(px, kernel);
    convolve_separable(py, kernel);
    field.dx = std::move(px.values);
    field.dy = std::move(py.values);

    double max_mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_mag = std::max(max_mag, std::sqrt(field.dx[i] * field.dx[i] +
                                              field.dy[i] * field.dy[i]));
    }
    const double scale = max_mag > 0.0 ? beta / max_mag : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        field.dx[i] *= scale;
        field.dy[i] *= scale;
    }
    return field;
}

Image elastic_deform(const Image& image, double beta, std::uint64_t seed) {
    require_valid(image);
    if (!std::isfinite(beta) || beta < 0.0) {
        throw InvalidArgumentError("beta must be finite and non-negative, got " +
                                   std::to_string(beta));
    }
    if (beta == 0.0) return image;
    const WarpField field = make_warp_field(image.width, image.height, beta, seed);
    std::vector<Plane> planes = split_planes(image);
    warp_planes(planes, field);
    return merge_planes(planes);
}

BinaryMask build_mask(const std::vector<BoundingBox>& boxes, int width, int height, int pad) {
    if (width <= 0 || height <= 0) {
        throw InvalidArgumentError("mask dimensions must be positive");
    }
    if (pad < 0) {
        throw InvalidArgumentError("pad must be non-negative, got " + std::to_string(pad));
    }
    BinaryMask mask;
    mask.width = width;
    mask.height = height;
    mask.bits.assign(static_cast<std::size_t>(width) * height, 0);
    for (const BoundingBox& box : boxes) {
        BoundingBox dilated{box.x - pad, box.y - pad, box.w + 2 * pad, box.h + 2 * pad};
        if (!clamp_to_bounds(dilated, width, height)) continue;
        for (int y = dilated.y; y < dilated.bottom(); ++y) {
            std::fill(mask.bits.begin() + static_cast<std::size_t>(y) * width + dilated.x,
                      mask.bits.begin() + static_cast<std::size_t>(y) * width + dilated.right(),
                      static_cast<std::uint8_t>(1));
        }
    }
    return mask;
}

Image obfuscate(const Image& image, const std::vector<BoundingBox>& boxes,
                const ObfuscationParams& params) {
    require_valid(image);
    require_valid(params);
    if (boxes.empty()) return image;

    const BinaryMask mask = build_mask(boxes, image.width, image.height, params.pad);

    // Blur and warp stay in floating point up to the single final quantization.
    std::vector<Plane> planes = split_planes(image);
    blur_planes(planes, params.sigma);
    if (params.beta > 0.0) {
        const WarpField field =
            make_warp_field(image.width, image.height, params.beta, params.seed);
        warp_planes(planes, field);
    }

    Image out = image;
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask.bits[i]) continue;
        for (int c = 0; c < image.channels; ++c) {
            out.pixels[i * image.channels + c] = quantize(planes[c].values[i]);
        }
    }
    return out;
}

}  // namespace privar
