#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "image.hpp"

namespace privar {

// Lossy baseline JPEG without chroma subsampling (4:4:4). quality in 1..100.
std::vector<std::uint8_t> encode_jpeg(const Image& image, int quality);

// Throws DecodeError (with byte offset) on malformed or truncated streams.
Image decode_jpeg(const std::uint8_t* bytes, std::size_t len);

std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(const std::uint8_t* bytes, std::size_t len);

// Sniffs the container by magic bytes (PNG or JPEG).
Image decode_image(const std::uint8_t* bytes, std::size_t len);
Image decode_image(const std::vector<std::uint8_t>& bytes);

Image load_image(const std::string& path);
void save_png(const Image& image, const std::string& path);
void save_jpeg(const Image& image, const std::string& path, int quality);

// 1-bit-per-pixel PNG, for mask debugging.
std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask);
BinaryMask decode_mask_png(const std::uint8_t* bytes, std::size_t len);
void save_mask_png(const BinaryMask& mask, const std::string& path);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const void* data, std::size_t len);
void write_file(const std::string& path, const std::string& text);

}  // namespace privar
