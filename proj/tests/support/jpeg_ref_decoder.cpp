#include "jpeg_ref_decoder.hpp"

#include <array>
#include <cstring>

#include "errors.hpp"

namespace refjpeg {

namespace {

using privar::DecodeError;
using privar::Image;

constexpr int kZigzag[64] = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

struct HuffTable {
    bool present = false;
    // code -> value via canonical tables
    std::array<std::uint16_t, 17> min_code{};
    std::array<std::int32_t, 17> max_code{};  // -1 when no codes of this length
    std::array<std::uint16_t, 17> val_ptr{};
    std::array<std::uint8_t, 256> values{};
};

struct Component {
    int id = 0;
    int h = 1, v = 1;
    int quant_table = 0;
    int dc_table = 0;
    int ac_table = 0;
    int dc_pred = 0;
    std::vector<int> samples;  // full-resolution plane (w*h), no subsampling
};

struct Decoder {
    const std::uint8_t* data;
    std::size_t len;
    std::size_t pos = 0;

    int width = 0, height = 0;
    int num_components = 0;
    std::array<Component, 3> comps;
    std::array<std::array<std::uint16_t, 64>, 4> quant{};
    std::array<bool, 4> quant_present{};
    std::array<HuffTable, 4> dc_tables;
    std::array<HuffTable, 4> ac_tables;
    int restart_interval = 0;

    // entropy bit reader state
    std::uint32_t bit_buffer = 0;
    int bit_count = 0;

    [[noreturn]] void fail(const std::string& message) const {
        throw DecodeError("reference decoder: " + message, pos);
    }

    std::uint8_t u8() {
        if (pos >= len) fail("unexpected end of stream");
        return data[pos++];
    }

    int u16() {
        const int hi = u8();
        return (hi << 8) | u8();
    }

    void parse_dqt(int seg_len) {
        int remaining = seg_len - 2;
        while (remaining > 0) {
            const int pq_tq = u8();
            const int precision = pq_tq >> 4;
            const int id = pq_tq & 0x0f;
            if (id > 3) fail("bad quant table id");
            for (int i = 0; i < 64; ++i) {
                quant[id][kZigzag[i]] =
                    precision ? static_cast<std::uint16_t>(u16())
                              : static_cast<std::uint16_t>(u8());
            }
            quant_present[id] = true;
            remaining -= 1 + (precision ? 128 : 64);
        }
    }

    void parse_dht(int seg_len) {
        int remaining = seg_len - 2;
        while (remaining > 0) {
            const int tc_th = u8();
            const int tclass = tc_th >> 4;
            const int id = tc_th & 0x0f;
            if (tclass > 1 || id > 3) fail("bad huffman table spec");
            HuffTable& table = tclass == 0 ? dc_tables[id] : ac_tables[id];
            std::array<int, 17> counts{};
            int total = 0;
            for (int l = 1; l <= 16; ++l) {
                counts[l] = u8();
                total += counts[l];
            }
            if (total > 256) fail("huffman table too large");
            int code = 0;
            int k = 0;
            for (int l = 1; l <= 16; ++l) {
                table.val_ptr[l] = static_cast<std::uint16_t>(k);
                table.min_code[l] = static_cast<std::uint16_t>(code);
                code += counts[l];
                table.max_code[l] = counts[l] ? code - 1 : -1;
                code <<= 1;
                for (int i = 0; i < counts[l]; ++i) table.values[k++] = u8();
            }
            table.present = true;
            remaining -= 1 + 16 + total;
        }
    }

    void parse_sof0(int seg_len) {
        const int precision = u8();
        if (precision != 8) fail("only 8-bit precision supported");
        height = u16();
        width = u16();
        num_components = u8();
        if (width <= 0 || height <= 0) fail("bad frame dimensions");
        if (num_components != 1 && num_components != 3) {
            fail("only 1 or 3 components supported");
        }
        for (int c = 0; c < num_components; ++c) {
            comps[c].id = u8();
            const int hv = u8();
            comps[c].h = hv >> 4;
            comps[c].v = hv & 0x0f;
            comps[c].quant_table = u8();
            if (comps[c].h != 1 || comps[c].v != 1) {
                fail("subsampled streams unsupported (expected 4:4:4 or grayscale)");
            }
        }
        if (seg_len != 8 + 3 * num_components) fail("bad SOF0 length");
    }

    // ---- entropy decoding ----

    void reset_bits() {
        bit_buffer = 0;
        bit_count = 0;
    }

    int next_bit() {
        if (bit_count == 0) {
            if (pos >= len) fail("entropy stream ran dry");
            std::uint8_t byte = data[pos++];
            if (byte == 0xff) {
                if (pos >= len) fail("entropy stream ran dry after 0xff");
                const std::uint8_t marker = data[pos++];
                if (marker != 0x00) fail("unexpected marker inside entropy data");
            }
            bit_buffer = byte;
            bit_count = 8;
        }
        --bit_count;
        return (bit_buffer >> bit_count) & 1;
    }

    int receive(int length) {
        int v = 0;
        for (int i = 0; i < length; ++i) v = (v << 1) | next_bit();
        return v;
    }

    static int extend(int v, int length) {
        return v < (1 << (length - 1)) ? v - (1 << length) + 1 : v;
    }

    int decode_huffman(const HuffTable& table) {
        if (!table.present) fail("scan references an undefined huffman table");
        int code = next_bit();
        for (int length = 1; length <= 16; ++length) {
            if (table.max_code[length] >= 0 && code <= table.max_code[length]) {
                return table.values[table.val_ptr[length] +
                                    (code - table.min_code[length])];
            }
            code = (code << 1) | next_bit();
        }
        fail("invalid huffman code");
    }

    void decode_block(Component& comp, int* block) {
        std::memset(block, 0, 64 * sizeof(int));
        const HuffTable& dc = dc_tables[comp.dc_table];
        const HuffTable& ac = ac_tables[comp.ac_table];
        const std::array<std::uint16_t, 64>& q = quant[comp.quant_table];

        const int t = decode_huffman(dc);
        int diff = t ? extend(receive(t), t) : 0;
        comp.dc_pred += diff;
        block[0] = comp.dc_pred * q[0];

        int k = 1;
        while (k < 64) {
            const int rs = decode_huffman(ac);
            const int r = rs >> 4;
            const int s = rs & 0x0f;
            if (s == 0) {
                if (r == 15) {
                    k += 16;  // ZRL
                    continue;
                }
                break;  // EOB
            }
            k += r;
            if (k > 63) fail("AC run past end of block");
            const int zz = kZigzag[k];
            block[zz] = extend(receive(s), s) * q[zz];
            ++k;
        }
    }

    // Fixed-point scaled-integer IDCT (13-bit constants, two passes), the
    // same arithmetic family baseline decoders standardize on.
    static void idct_8x8(const int* in, std::uint8_t* out, int out_stride) {
        constexpr int CONST_BITS = 13;
        constexpr int PASS1_BITS = 2;
        constexpr std::int64_t FIX_0_298631336 = 2446;
        constexpr std::int64_t FIX_0_390180644 = 3196;
        constexpr std::int64_t FIX_0_541196100 = 4433;
        constexpr std::int64_t FIX_0_765366865 = 6270;
        constexpr std::int64_t FIX_0_899976223 = 7373;
        constexpr std::int64_t FIX_1_175875602 = 9633;
        constexpr std::int64_t FIX_1_501321110 = 12299;
        constexpr std::int64_t FIX_1_847759065 = 15137;
        constexpr std::int64_t FIX_1_961570560 = 16069;
        constexpr std::int64_t FIX_2_053119869 = 16819;
        constexpr std::int64_t FIX_2_562915447 = 20995;
        constexpr std::int64_t FIX_3_072711026 = 25172;

        auto descale = [](std::int64_t x, int n) {
            return static_cast<std::int64_t>((x + (std::int64_t(1) << (n - 1))) >> n);
        };

        std::int64_t ws[64];

        for (int col = 0; col < 8; ++col) {
            const int* c = in + col;
            if (c[8] == 0 && c[16] == 0 && c[24] == 0 && c[32] == 0 && c[40] == 0 &&
                c[48] == 0 && c[56] == 0) {
                const std::int64_t dc = static_cast<std::int64_t>(c[0]) << PASS1_BITS;
                for (int row = 0; row < 8; ++row) ws[row * 8 + col] = dc;
                continue;
            }

            std::int64_t z2 = c[16];
            std::int64_t z3 = c[48];
            std::int64_t z1 = (z2 + z3) * FIX_0_541196100;
            std::int64_t tmp2 = z1 + z3 * (-FIX_1_847759065);
            std::int64_t tmp3 = z1 + z2 * FIX_0_765366865;

            z2 = c[0];
            z3 = c[32];
            std::int64_t tmp0 = (z2 + z3) << CONST_BITS;
            std::int64_t tmp1 = (z2 - z3) << CONST_BITS;

            const std::int64_t t10 = tmp0 + tmp3;
            const std::int64_t t13 = tmp0 - tmp3;
            const std::int64_t t11 = tmp1 + tmp2;
            const std::int64_t t12 = tmp1 - tmp2;

            tmp0 = c[56];
            tmp1 = c[40];
            tmp2 = c[24];
            tmp3 = c[8];

            z1 = tmp0 + tmp3;
            z2 = tmp1 + tmp2;
            z3 = tmp0 + tmp2;
            std::int64_t z4 = tmp1 + tmp3;
            std::int64_t z5 = (z3 + z4) * FIX_1_175875602;

            tmp0 *= FIX_0_298631336;
            tmp1 *= FIX_2_053119869;
            tmp2 *= FIX_3_072711026;
            tmp3 *= FIX_1_501321110;
            z1 *= -FIX_0_899976223;
            z2 *= -FIX_2_562915447;
            z3 = z3 * (-FIX_1_961570560) + z5;
            z4 = z4 * (-FIX_0_390180644) + z5;

            tmp0 += z1 + z3;
            tmp1 += z2 + z4;
            tmp2 += z2 + z3;
            tmp3 += z1 + z4;

            ws[0 * 8 + col] = descale(t10 + tmp3, CONST_BITS - PASS1_BITS);
            ws[7 * 8 + col] = descale(t10 - tmp3, CONST_BITS - PASS1_BITS);
            ws[1 * 8 + col] = descale(t11 + tmp2, CONST_BITS - PASS1_BITS);
            ws[6 * 8 + col] = descale(t11 - tmp2, CONST_BITS - PASS1_BITS);
            ws[2 * 8 + col] = descale(t12 + tmp1, CONST_BITS - PASS1_BITS);
            ws[5 * 8 + col] = descale(t12 - tmp1, CONST_BITS - PASS1_BITS);
            ws[3 * 8 + col] = descale(t13 + tmp0, CONST_BITS - PASS1_BITS);
            ws[4 * 8 + col] = descale(t13 - tmp0, CONST_BITS - PASS1_BITS);
        }

        auto clamp8 = [](std::int64_t v) {
            const std::int64_t shifted = v + 128;
            if (shifted < 0) return std::uint8_t(0);
            if (shifted > 255) return std::uint8_t(255);
            return static_cast<std::uint8_t>(shifted);
        };

        for (int row = 0; row < 8; ++row) {
            const std::int64_t* w = ws + row * 8;
            std::uint8_t* o = out + row * out_stride;

            std::int64_t z2 = w[2];
            std::int64_t z3 = w[6];
            std::int64_t z1 = (z2 + z3) * FIX_0_541196100;
            std::int64_t tmp2 = z1 + z3 * (-FIX_1_847759065);
            std::int64_t tmp3 = z1 + z2 * FIX_0_765366865;

            std::int64_t tmp0 = (w[0] + w[4]) << CONST_BITS;
            std::int64_t tmp1 = (w[0] - w[4]) << CONST_BITS;

            const std::int64_t t10 = tmp0 + tmp3;
            const std::int64_t t13 = tmp0 - tmp3;
            const std::int64_t t11 = tmp1 + tmp2;
            const std::int64_t t12 = tmp1 - tmp2;

            tmp0 = w[7];
            tmp1 = w[5];
            tmp2 = w[3];
            tmp3 = w[1];

            z1 = tmp0 + tmp3;
            z2 = tmp1 + tmp2;
            z3 = tmp0 + tmp2;
            std::int64_t z4 = tmp1 + tmp3;
            std::int64_t z5 = (z3 + z4) * FIX_1_175875602;

            tmp0 *= FIX_0_298631336;
            tmp1 *= FIX_2_053119869;
            tmp2 *= FIX_3_072711026;
            tmp3 *= FIX_1_501321110;
            z1 *= -FIX_0_899976223;
            z2 *= -FIX_2_562915447;
            z3 = z3 * (-FIX_1_961570560) + z5;
            z4 = z4 * (-FIX_0_390180644) + z5;

            tmp0 += z1 + z3;
            tmp1 += z2 + z4;
            tmp2 += z2 + z3;
            tmp3 += z1 + z4;

            constexpr int FINAL = CONST_BITS + PASS1_BITS + 3;
            o[0] = clamp8(descale(t10 + tmp3, FINAL));
            o[7] = clamp8(descale(t10 - tmp3, FINAL));
            o[1] = clamp8(descale(t11 + tmp2, FINAL));
            o[6] = clamp8(descale(t11 - tmp2, FINAL));
            o[2] = clamp8(descale(t12 + tmp1, FINAL));
            o[5] = clamp8(descale(t12 - tmp1, FINAL));
            o[3] = clamp8(descale(t13 + tmp0, FINAL));
            o[4] = clamp8(descale(t13 - tmp0, FINAL));
        }
    }

    void decode_scan() {
        const int scan_len = u16();
        const int ns = u8();
        if (ns != num_components) fail("interleaved scan must cover all components");
        for (int i = 0; i < ns; ++i) {
            const int id = u8();
            const int tables = u8();
            bool found = false;
            for (int c = 0; c < num_components; ++c) {
                if (comps[c].id == id) {
                    comps[c].dc_table = tables >> 4;
                    comps[c].ac_table = tables & 0x0f;
                    found = true;
                }
            }
            if (!found) fail("scan names unknown component");
        }
        if (u8() != 0 || u8() != 63 || u8() != 0) fail("not a baseline sequential scan");
        (void)scan_len;

        const int mcus_x = (width + 7) / 8;
        const int mcus_y = (height + 7) / 8;
        const int plane_w = mcus_x * 8;
        const int plane_h = mcus_y * 8;
        std::vector<std::vector<std::uint8_t>> planes(num_components);
        for (int c = 0; c < num_components; ++c) {
            if (!quant_present[comps[c].quant_table]) fail("missing quant table");
            planes[c].assign(static_cast<std::size_t>(plane_w) * plane_h, 0);
            comps[c].dc_pred = 0;
        }

        reset_bits();
        int block[64];
        int mcu_index = 0;
        const int total_mcus = mcus_x * mcus_y;
        for (int my = 0; my < mcus_y; ++my) {
            for (int mx = 0; mx < mcus_x; ++mx) {
                if (restart_interval > 0 && mcu_index > 0 &&
                    mcu_index % restart_interval == 0) {
                    read_restart_marker();
                }
                for (int c = 0; c < num_components; ++c) {
                    decode_block(comps[c], block);
                    idct_8x8(block, planes[c].data() + (my * 8) * plane_w + mx * 8, plane_w);
                }
                ++mcu_index;
            }
        }
        if (mcu_index != total_mcus) fail("scan ended early");

        // Crop the padded MCU grid and convert color.
        Image out = Image::create(width, height, num_components == 1 ? 1 : 3);
        if (num_components == 1) {
            for (int y = 0; y < height; ++y) {
                std::memcpy(out.pixels.data() + static_cast<std::size_t>(y) * width,
                            planes[0].data() + static_cast<std::size_t>(y) * plane_w,
                            static_cast<std::size_t>(width));
            }
        } else {
            constexpr int SCALEBITS = 16;
            constexpr int ONE_HALF = 1 << (SCALEBITS - 1);
            auto fix = [](double x) {
                return static_cast<std::int64_t>(x * (1 << SCALEBITS) + 0.5);
            };
            const std::int64_t c_r_cr = fix(1.40200);
            const std::int64_t c_b_cb = fix(1.77200);
            const std::int64_t c_g_cr = -fix(0.71414);
            const std::int64_t c_g_cb = -fix(0.34414);
            auto clamp8 = [](std::int64_t v) {
                return static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
            };
            for (int y = 0; y < height; ++y) {
                for (int x = 0; x < width; ++x) {
                    const std::size_t p = static_cast<std::size_t>(y) * plane_w + x;
                    const std::int64_t Y = planes[0][p];
                    const std::int64_t cb = static_cast<std::int64_t>(planes[1][p]) - 128;
                    const std::int64_t cr = static_cast<std::int64_t>(planes[2][p]) - 128;
                    const std::size_t o = (static_cast<std::size_t>(y) * width + x) * 3;
                    out.pixels[o] = clamp8(Y + ((c_r_cr * cr + ONE_HALF) >> SCALEBITS));
                    out.pixels[o + 1] =
                        clamp8(Y + ((c_g_cb * cb + c_g_cr * cr + ONE_HALF) >> SCALEBITS));
                    out.pixels[o + 2] = clamp8(Y + ((c_b_cb * cb + ONE_HALF) >> SCALEBITS));
                }
            }
        }
        result = std::move(out);
    }

    void read_restart_marker() {
        reset_bits();
        if (pos + 1 >= len) fail("missing restart marker");
        if (data[pos] != 0xff || data[pos + 1] < 0xd0 || data[pos + 1] > 0xd7) {
            fail("expected restart marker");
        }
        pos += 2;
        for (int c = 0; c < num_components; ++c) comps[c].dc_pred = 0;
    }

    Image result;

    Image run() {
        if (len < 2 || u8() != 0xff || u8() != 0xd8) fail("missing SOI marker");
        bool frame_seen = false;
        while (true) {
            std::uint8_t b = u8();
            if (b != 0xff) fail("expected marker byte");
            std::uint8_t marker = u8();
            while (marker == 0xff) marker = u8();

            if (marker == 0xd9) {  // EOI
                if (result.width == 0) fail("EOI before any scan");
                return std::move(result);
            }
            if (marker == 0x01 || (marker >= 0xd0 && marker <= 0xd7)) continue;

            const int seg_len = u16();
            if (seg_len < 2) fail("bad segment length");
            switch (marker) {
                case 0xdb: parse_dqt(seg_len); break;
                case 0xc4: parse_dht(seg_len); break;
                case 0xc0:
                    parse_sof0(seg_len);
                    frame_seen = true;
                    break;
                case 0xc1: case 0xc2: case 0xc3: case 0xc5: case 0xc6: case 0xc7:
                case 0xc9: case 0xca: case 0xcb: case 0xcd: case 0xce: case 0xcf:
                    fail("non-baseline frame type unsupported");
                case 0xdd:
                    if (seg_len != 4) fail("bad DRI length");
                    restart_interval = u16();
                    break;
                case 0xda:
                    if (!frame_seen) fail("SOS before SOF0");
                    pos -= 2;  // decode_scan re-reads the length
                    decode_scan();
                    break;
                default:
                    // APPn, COM and friends: skip payload.
                    if (pos + seg_len - 2 > len) fail("segment overruns stream");
                    pos += static_cast<std::size_t>(seg_len) - 2;
                    break;
            }
        }
    }
};

}  // namespace

privar::Image decode(const std::uint8_t* bytes, std::size_t len) {
    Decoder decoder{bytes, len};
    return decoder.run();
}

privar::Image decode(const std::vector<std::uint8_t>& bytes) {
    return decode(bytes.data(), bytes.size());
}

}  // namespace refjpeg
