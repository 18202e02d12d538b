#pragma once

// Per-format decoders behind DecodeImage. Each returns nullopt on any error.

#include <cstdint>
#include <optional>
#include <span>

#include "dfbench/image.hpp"

namespace dfbench::codecs {

// Decoded images larger than this many pixels are rejected.
inline constexpr std::uint64_t kMaxPixels = std::uint64_t{1} << 26;

std::optional<RgbImage> DecodeBmp(std::span<const std::uint8_t> bytes);
std::optional<RgbImage> DecodeGif(std::span<const std::uint8_t> bytes);
std::optional<RgbImage> DecodePng(std::span<const std::uint8_t> bytes);
std::optional<RgbImage> DecodeTiff(std::span<const std::uint8_t> bytes);

}  // namespace dfbench::codecs
