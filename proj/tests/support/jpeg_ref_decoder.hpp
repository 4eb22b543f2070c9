#pragma once

#include <cstdint>
#include <vector>

#include "image.hpp"

// Self-contained baseline JPEG decoder used as an independent cross-check of
// the production codec path. Supports baseline sequential DCT streams with
// 8-bit samples, grayscale or YCbCr without chroma subsampling (the wire
// format every production encode in this project emits), restart markers,
// and standard Huffman tables. Anything else raises privar::DecodeError.
//
// Test-support code only; intentionally not linked into the library.
namespace refjpeg {

privar::Image decode(const std::uint8_t* bytes, std::size_t len);
privar::Image decode(const std::vector<std::uint8_t>& bytes);

}  // namespace refjpeg
