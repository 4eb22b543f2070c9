#include "codec.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <jpeglib.h>
#include <png.h>

#include "errors.hpp"

namespace privar {

namespace {

// ---- libjpeg glue ----------------------------------------------------------

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

// Corrupt-data warnings are promoted to hard errors: a silently gray-filled
// frame must never flow onward in a privacy pipeline.
void jpeg_emit_message(j_common_ptr cinfo, int msg_level) {
    if (msg_level == -1) {
        jpeg_error_exit(cinfo);
    }
}

struct MemSource {
    jpeg_source_mgr pub;
    const std::uint8_t* data;
    std::size_t len;
};

void src_init(j_decompress_ptr) {}

boolean src_fill(j_decompress_ptr cinfo) {
    // The whole stream was handed over up front; running dry means truncation.
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::snprintf(err->message, sizeof(err->message), "premature end of JPEG stream");
    std::longjmp(err->jump, 1);
    return FALSE;
}

void src_skip(j_decompress_ptr cinfo, long num_bytes) {
    auto* src = reinterpret_cast<MemSource*>(cinfo->src);
    if (num_bytes <= 0) return;
    if (static_cast<std::size_t>(num_bytes) > src->pub.bytes_in_buffer) {
        src_fill(cinfo);
        return;
    }
    src->pub.next_input_byte += num_bytes;
    src->pub.bytes_in_buffer -= num_bytes;
}

void src_term(j_decompress_ptr) {}

std::size_t consumed_offset(const j_decompress_ptr cinfo, const MemSource& src) {
    if (cinfo->src == nullptr) return 0;
    return src.len - src.pub.bytes_in_buffer;
}

struct MemDest {
    jpeg_destination_mgr pub;
    std::vector<std::uint8_t>* out;
    std::uint8_t buffer[16384];
};

void dst_init(j_compress_ptr cinfo) {
    auto* dst = reinterpret_cast<MemDest*>(cinfo->dest);
    dst->pub.next_output_byte = dst->buffer;
    dst->pub.free_in_buffer = sizeof(dst->buffer);
}

boolean dst_empty(j_compress_ptr cinfo) {
    auto* dst = reinterpret_cast<MemDest*>(cinfo->dest);
    dst->out->insert(dst->out->end(), dst->buffer, dst->buffer + sizeof(dst->buffer));
    dst->pub.next_output_byte = dst->buffer;
    dst->pub.free_in_buffer = sizeof(dst->buffer);
    return TRUE;
}

void dst_term(j_compress_ptr cinfo) {
    auto* dst = reinterpret_cast<MemDest*>(cinfo->dest);
    const std::size_t used = sizeof(dst->buffer) - dst->pub.free_in_buffer;
    dst->out->insert(dst->out->end(), dst->buffer, dst->buffer + used);
}

// ---- libpng glue -----------------------------------------------------------

struct PngReadState {
    const std::uint8_t* data;
    std::size_t len;
    std::size_t pos;
};

void png_read_cb(png_structp png, png_bytep out, png_size_t count) {
    auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (st->pos + count > st->len) {
        png_error(png, "premature end of PNG stream");
    }
    std::memcpy(out, st->data + st->pos, count);
    st->pos += count;
}

void png_write_cb(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + count);
}

void png_flush_cb(png_structp) {}

[[noreturn]] void png_error_cb(png_structp png, png_const_charp msg) {
    auto* message = static_cast<std::string*>(png_get_error_ptr(png));
    *message = msg;
    longjmp(png_jmpbuf(png), 1);
}

void png_warning_cb(png_structp, png_const_charp) {}

bool looks_like_png(const std::uint8_t* bytes, std::size_t len) {
    static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    return len >= 8 && std::memcmp(bytes, sig, 8) == 0;
}

bool looks_like_jpeg(const std::uint8_t* bytes, std::size_t len) {
    return len >= 2 && bytes[0] == 0xff && bytes[1] == 0xd8;
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg(const Image& image, int quality) {
    require_valid(image);
    if (quality < 1 || quality > 100) {
        throw InvalidArgumentError("jpeg quality must be in 1..100, got " +
                                   std::to_string(quality));
    }

    jpeg_compress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;

    std::vector<std::uint8_t> out;
    if (setjmp(err.jump)) {
        jpeg_destroy_compress(&cinfo);
        throw IoError(std::string("jpeg encoding failed: ") + err.message);
    }

    jpeg_create_compress(&cinfo);
    MemDest dest;
    dest.pub.init_destination = dst_init;
    dest.pub.empty_output_buffer = dst_empty;
    dest.pub.term_destination = dst_term;
    dest.out = &out;
    cinfo.dest = &dest.pub;

    cinfo.image_width = static_cast<JDIMENSION>(image.width);
    cinfo.image_height = static_cast<JDIMENSION>(image.height);
    cinfo.input_components = image.channels;
    cinfo.in_color_space = image.channels == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    // 4:4:4: text edges survive chroma exactly as luma does.
    for (int c = 0; c < cinfo.num_components; ++c) {
        cinfo.comp_info[c].h_samp_factor = 1;
        cinfo.comp_info[c].v_samp_factor = 1;
    }

    jpeg_start_compress(&cinfo, TRUE);
    const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(image.pixels.data() + cinfo.next_scanline * stride);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    return out;
}

Image decode_jpeg(const std::uint8_t* bytes, std::size_t len) {
    if (bytes == nullptr || len == 0) {
        throw DecodeError("empty JPEG stream", 0);
    }

    jpeg_decompress_struct cinfo;
    cinfo.src = nullptr;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;
    err.pub.emit_message = jpeg_emit_message;

    MemSource src;
    src.data = bytes;
    src.len = len;

    if (setjmp(err.jump)) {
        const std::size_t offset = consumed_offset(&cinfo, src);
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError(std::string("jpeg decoding failed: ") + err.message, offset);
    }

    jpeg_create_decompress(&cinfo);
    src.pub.init_source = src_init;
    src.pub.fill_input_buffer = src_fill;
    src.pub.skip_input_data = src_skip;
    src.pub.resync_to_restart = jpeg_resync_to_restart;
    src.pub.term_source = src_term;
    src.pub.next_input_byte = bytes;
    src.pub.bytes_in_buffer = len;
    cinfo.src = &src.pub;

    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    Image img = Image::create(static_cast<int>(cinfo.output_width),
                              static_cast<int>(cinfo.output_height),
                              cinfo.output_components == 1 ? 1 : 3);
    const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = img.pixels.data() + cinfo.output_scanline * stride;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
    require_valid(image);
    std::string errmsg;
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, &errmsg, png_error_cb, png_warning_cb);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    std::vector<std::uint8_t> out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png encoding failed: " + errmsg);
    }

    png_set_write_fn(png, &out, png_write_cb, png_flush_cb);
    png_set_IHDR(png, info, image.width, image.height, 8,
                 image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
    for (int y = 0; y < image.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(image.pixels.data() + y * stride));
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    return out;
}

Image decode_png(const std::uint8_t* bytes, std::size_t len) {
    if (!looks_like_png(bytes, len)) {
        throw DecodeError("not a PNG stream", 0);
    }
    std::string errmsg;
    PngReadState state{bytes, len, 0};
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, &errmsg, png_error_cb, png_warning_cb);
    if (!png) throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    if (setjmp(png_jmpbuf(png))) {
        const std::size_t offset = state.pos;
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("png decoding failed: " + errmsg, offset);
    }

    png_set_read_fn(png, &state, png_read_cb);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte bit_depth = png_get_bit_depth(png, info);

    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int channels = static_cast<int>(png_get_channels(png, info));
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("unsupported PNG channel count " + std::to_string(channels),
                          state.pos);
    }

    Image img = Image::create(width, height, channels);
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y) {
        png_read_row(png, img.pixels.data() + y * stride, nullptr);
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

Image decode_image(const std::uint8_t* bytes, std::size_t len) {
    if (looks_like_png(bytes, len)) return decode_png(bytes, len);
    if (looks_like_jpeg(bytes, len)) return decode_jpeg(bytes, len);
    throw DecodeError("unrecognized image container (expected PNG or JPEG magic)", 0);
}

Image decode_image(const std::vector<std::uint8_t>& bytes) {
    return decode_image(bytes.data(), bytes.size());
}

Image load_image(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    try {
        return decode_image(bytes.data(), bytes.size());
    } catch (const DecodeError& e) {
        throw DecodeError(path + ": " + e.what(), e.byte_offset());
    }
}

void save_png(const Image& image, const std::string& path) {
    const auto bytes = encode_png(image);
    write_file(path, bytes.data(), bytes.size());
}

void save_jpeg(const Image& image, const std::string& path, int quality) {
    const auto bytes = encode_jpeg(image, quality);
    write_file(path, bytes.data(), bytes.size());
}

std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask) {
    if (mask.width <= 0 || mask.height <= 0 ||
        mask.bits.size() != static_cast<std::size_t>(mask.width) * mask.height) {
        throw InvalidArgumentError("mask dimensions inconsistent with bit buffer");
    }
    std::string errmsg;
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, &errmsg, png_error_cb, png_warning_cb);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    std::vector<std::uint8_t> out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("mask png encoding failed: " + errmsg);
    }

    png_set_write_fn(png, &out, png_write_cb, png_flush_cb);
    png_set_IHDR(png, info, mask.width, mask.height, 1, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const std::size_t stride = (static_cast<std::size_t>(mask.width) + 7) / 8;
    std::vector<std::uint8_t> row(stride);
    for (int y = 0; y < mask.height; ++y) {
        std::fill(row.begin(), row.end(), 0);
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y)) row[x / 8] |= static_cast<std::uint8_t>(0x80 >> (x % 8));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    return out;
}

BinaryMask decode_mask_png(const std::uint8_t* bytes, std::size_t len) {
    const Image img = decode_png(bytes, len);
    BinaryMask mask;
    mask.width = img.width;
    mask.height = img.height;
    mask.bits.resize(static_cast<std::size_t>(img.width) * img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            mask.at(x, y) = img.at(x, y, 0) >= 128 ? 1 : 0;
        }
    }
    return mask;
}

void save_mask_png(const BinaryMask& mask, const std::string& path) {
    const auto bytes = encode_mask_png(mask);
    write_file(path, bytes.data(), bytes.size());
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path);
    return bytes;
}

void write_file(const std::string& path, const void* data, std::size_t len) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!out) throw IoError("write failed for " + path);
}

void write_file(const std::string& path, const std::string& text) {
    write_file(path, text.data(), text.size());
}

}  // namespace privar
