#include "litecua/sim/png.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

#include <zlib.h>

namespace litecua::sim {

namespace {

constexpr std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) << 24 | static_cast<std::uint32_t>(p[1]) << 16 |
           static_cast<std::uint32_t>(p[2]) << 8 | static_cast<std::uint32_t>(p[3]);
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc =
        crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::vector<std::uint8_t> encode_png(int width, int height, const std::uint8_t* rgb) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("encode_png: empty image");

    // Raw scanline stream: one filter byte (0 = none) in front of each row.
    const std::size_t stride = static_cast<std::size_t>(width) * 3;
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);
        raw.insert(raw.end(), rgb + y * stride, rgb + (y + 1) * stride);
    }

    uLongf compressed_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> compressed(compressed_len);
    const int rc = compress2(compressed.data(), &compressed_len, raw.data(),
                             static_cast<uLong>(raw.size()), Z_DEFAULT_COMPRESSION);
    if (rc != Z_OK) throw std::runtime_error("encode_png: deflate failed, rc " + std::to_string(rc));
    compressed.resize(compressed_len);

    std::vector<std::uint8_t> ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(width));
    put_u32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // color type: truecolor
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter method
    ihdr.push_back(0);  // no interlace

    std::vector<std::uint8_t> out(kSignature, kSignature + sizeof(kSignature));
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", compressed);
    put_chunk(out, "IEND", {});
    return out;
}

std::optional<std::pair<int, int>> png_dimensions(const std::uint8_t* bytes, std::size_t len) {
    // Signature (8) + IHDR length/type (8) + width/height (8).
    if (len < 24 || std::memcmp(bytes, kSignature, sizeof(kSignature)) != 0) return std::nullopt;
    if (std::memcmp(bytes + 12, "IHDR", 4) != 0) return std::nullopt;
    const std::uint32_t w = read_u32(bytes + 16);
    const std::uint32_t h = read_u32(bytes + 20);
    if (w == 0 || h == 0 || w > 1u << 24 || h > 1u << 24) return std::nullopt;
    return std::make_pair(static_cast<int>(w), static_cast<int>(h));
}

}  // namespace litecua::sim
