#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace privar {

// Decoded 8-bit raster, row-major, interleaved samples.
// channels is 1 (grayscale) or 3 (RGB); pixels.size() == width*height*channels.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> pixels;

    static Image create(int width, int height, int channels, std::uint8_t fill = 0);

    std::size_t size_bytes() const { return pixels.size(); }

    std::uint8_t& at(int x, int y, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool same_shape(const Image& other) const {
        return width == other.width && height == other.height && channels == other.channels;
    }
};

// Throws InvalidArgumentError unless dimensions, channel count and buffer
// length are mutually consistent.
void require_valid(const Image& image, const std::string& what = "image");

Image to_grayscale(const Image& image);

// Content hash over dimensions, channel count and every sample (FNV-1a 64).
std::uint64_t fingerprint(const Image& image);

std::string fingerprint_hex(std::uint64_t fp);
std::uint64_t parse_fingerprint_hex(const std::string& hex);

// Stable 64-bit string hash; used for per-frame obfuscation seeds.
std::uint64_t hash64(const std::string& text);

}  // namespace privar
