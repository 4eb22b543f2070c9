#include "image.hpp"

#include <cmath>

#include "errors.hpp"

namespace privar {

Image Image::create(int width, int height, int channels, std::uint8_t fill) {
    if (width <= 0 || height <= 0) {
        throw InvalidArgumentError("image dimensions must be positive, got " +
                                   std::to_string(width) + "x" + std::to_string(height));
    }
    if (channels != 1 && channels != 3) {
        throw InvalidArgumentError("channel count must be 1 or 3, got " +
                                   std::to_string(channels));
    }
    Image img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.pixels.assign(static_cast<std::size_t>(width) * height * channels, fill);
    return img;
}

void require_valid(const Image& image, const std::string& what) {
    if (image.width <= 0 || image.height <= 0) {
        throw InvalidArgumentError(what + ": dimensions must be positive, got " +
                                   std::to_string(image.width) + "x" +
                                   std::to_string(image.height));
    }
    if (image.channels != 1 && image.channels != 3) {
        throw InvalidArgumentError(what + ": channel count must be 1 or 3, got " +
                                   std::to_string(image.channels));
    }
    const std::size_t expected =
        static_cast<std::size_t>(image.width) * image.height * image.channels;
    if (image.pixels.size() != expected) {
        throw InvalidArgumentError(what + ": pixel buffer length " +
                                   std::to_string(image.pixels.size()) +
                                   " does not match dimensions (expected " +
                                   std::to_string(expected) + ")");
    }
}

Image to_grayscale(const Image& image) {
    require_valid(image);
    if (image.channels == 1) return image;
    Image gray = Image::create(image.width, image.height, 1);
    const std::uint8_t* src = image.pixels.data();
    std::uint8_t* dst = gray.pixels.data();
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
        dst[i] = static_cast<std::uint8_t>(std::lround(y));
    }
    return gray;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::uint64_t h, const std::uint8_t* data, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t fnv1a_u32(std::uint64_t h, std::uint32_t v) {
    std::uint8_t bytes[4] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
                             static_cast<std::uint8_t>(v >> 16),
                             static_cast<std::uint8_t>(v >> 24)};
    return fnv1a(h, bytes, 4);
}

}  // namespace

std::uint64_t fingerprint(const Image& image) {
    require_valid(image);
    std::uint64_t h = kFnvOffset;
    h = fnv1a_u32(h, static_cast<std::uint32_t>(image.width));
    h = fnv1a_u32(h, static_cast<std::uint32_t>(image.height));
    h = fnv1a_u32(h, static_cast<std::uint32_t>(image.channels));
    return fnv1a(h, image.pixels.data(), image.pixels.size());
}

std::string fingerprint_hex(std::uint64_t fp) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[fp & 0xf];
        fp >>= 4;
    }
    return out;
}

std::uint64_t parse_fingerprint_hex(const std::string& hex) {
    if (hex.empty() || hex.size() > 16) {
        throw InvalidArgumentError("fingerprint must be 1..16 hex digits, got \"" + hex + "\"");
    }
    std::uint64_t v = 0;
    for (char c : hex) {
        v <<= 4;
        if (c >= '0' && c <= '9') {
            v |= static_cast<std::uint64_t>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            v |= static_cast<std::uint64_t>(c - 'a' + 10);
        } else if (c >= 'A' && c <= 'F') {
            v |= static_cast<std::uint64_t>(c - 'A' + 10);
        } else {
            throw InvalidArgumentError("invalid hex digit in fingerprint \"" + hex + "\"");
        }
    }
    return v;
}

std::uint64_t hash64(const std::string& text) {
    return fnv1a(kFnvOffset, reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
}

}  // namespace privar
