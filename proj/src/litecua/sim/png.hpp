#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace litecua::sim {

// Encodes an RGB8 row-major buffer as an 8-bit truecolor PNG (filter 0 on
// every row, one IDAT chunk). Deterministic: equal input bytes give equal
// output bytes.
std::vector<std::uint8_t> encode_png(int width, int height, const std::uint8_t* rgb);

// Reads {width, height} from a PNG header without decoding pixel data;
// nullopt when the signature or IHDR chunk is not where the format puts it.
std::optional<std::pair<int, int>> png_dimensions(const std::uint8_t* bytes, std::size_t len);

}  // namespace litecua::sim
