#pragma once

#include <cstdint>
#include <vector>

#include "geometry.hpp"
#include "image.hpp"

namespace privar {

// Knobs of the masked blur+warp compositing step.
// sigma: Gaussian std-dev in pixels. beta: maximum warp displacement in
// pixels. pad: mask dilation applied to every box side. seed: warp-field RNG.
struct ObfuscationParams {
    double sigma = 5.0;
    double beta = 40.0;
    int pad = 4;
    std::uint64_t seed = 0;
};

void require_valid(const ObfuscationParams& params);

// Normalized 1-D Gaussian kernel, radius ceil(3*sigma); size 2*radius+1.
// sigma == 0 yields the identity kernel {1}.
std::vector<double> gaussian_kernel(double sigma);

// Separable Gaussian convolution with symmetric border reflection
// (index -1 maps to 0). Filtering runs in double precision and is quantized
// to 8 bits once; sigma == 0 returns a bit-identical copy.
Image gaussian_blur(const Image& image, double sigma);

// Per-pixel displacement fields for the elastic warp, fully determined by
// (width, height, beta, seed):
//   1. dx then dy are filled row-major with iid uniform(-1,1) draws from one
//      mt19937_64 stream seeded with `seed`; each draw maps the generator's
//      next 64-bit output x to 2*((x >> 11) * 2^-53) - 1.
//   2. both fields are smoothed with a Gaussian of std-dev 8 px (reflect
//      borders, same kernel construction as gaussian_blur).
//   3. the fields are scaled so the maximum displacement magnitude
//      sqrt(dx^2+dy^2) equals beta.
struct WarpField {
    int width = 0;
    int height = 0;
    std::vector<double> dx;
    std::vector<double> dy;

    double mean_magnitude() const;
    double max_magnitude() const;
};

inline constexpr double kFieldSmoothingSigma = 8.0;

WarpField make_warp_field(int width, int height, double beta, std::uint64_t seed);

// Backward warp with bilinear sampling and source-coordinate clamping.
// beta == 0 returns a bit-identical copy; deterministic in (image, beta, seed).
Image elastic_deform(const Image& image, double beta, std::uint64_t seed);

// bit = 1 iff the pixel lies inside any box dilated by pad on all sides
// (clamped to bounds). Overlapping boxes union; an empty list yields all 0.
BinaryMask build_mask(const std::vector<BoundingBox>& boxes, int width, int height, int pad);

// Masked compositing: pixels with mask bit 0 are copied bit-exactly from the
// input; pixels with mask bit 1 take the blur+warp cascade, which runs in
// floating point end to end and is quantized once at output.
Image obfuscate(const Image& image, const std::vector<BoundingBox>& boxes,
                const ObfuscationParams& params);

}  // namespace privar
