#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace dfbench {

enum class ImageFormat { kBmp, kGif, kPng, kHeic, kTiff };

std::string_view ImageFormatName(ImageFormat f);
std::optional<ImageFormat> ParseImageFormat(std::string_view text);

// Sniffs the format from magic bytes.
std::optional<ImageFormat> DetectImageFormat(std::span<const std::uint8_t> bytes);

// 8-bit RGB, row-major, top row first.
struct RgbImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3
};

// True when a full pixel decoder is built in for the format. HEIC has none.
bool HasDecoder(ImageFormat f);

// Full decode. Throws NotDecodable on any structural or data error, and for
// formats without a decoder. When `format` is absent it is sniffed.
RgbImage DecodeImage(std::span<const std::uint8_t> bytes,
                     std::optional<ImageFormat> format = std::nullopt);

// Box-structure validation of an HEIF/HEIC file: top-level boxes tile the
// file exactly, the first is an 'ftyp' naming an HEIF brand, and a 'meta'
// box with well-formed children is present.
bool HeicStructureValid(std::span<const std::uint8_t> bytes);

// A full decode for formats with a decoder, the structural check otherwise.
bool IsDecodable(std::span<const std::uint8_t> bytes,
                 std::optional<ImageFormat> format = std::nullopt);

}  // namespace dfbench
