#include "dfbench/image.hpp"

#include <array>
#include <cstring>
#include <functional>

#include "dfbench/error.hpp"
#include "dfbench/text.hpp"
#include "image_codecs.hpp"

namespace dfbench {

std::string_view ImageFormatName(ImageFormat f) {
  switch (f) {
    case ImageFormat::kBmp: return "bmp";
    case ImageFormat::kGif: return "gif";
    case ImageFormat::kPng: return "png";
    case ImageFormat::kHeic: return "heic";
    case ImageFormat::kTiff: return "tiff";
  }
  return "";
}

std::optional<ImageFormat> ParseImageFormat(std::string_view text) {
  const std::string t = AsciiLower(Trim(text));
  if (t == "bmp") return ImageFormat::kBmp;
  if (t == "gif") return ImageFormat::kGif;
  if (t == "png") return ImageFormat::kPng;
  if (t == "heic" || t == "heif") return ImageFormat::kHeic;
  if (t == "tiff" || t == "tif") return ImageFormat::kTiff;
  return std::nullopt;
}

namespace {

bool HasPrefix(std::span<const std::uint8_t> b, std::string_view magic,
               std::size_t at = 0) {
  return b.size() >= at + magic.size() &&
         std::memcmp(b.data() + at, magic.data(), magic.size()) == 0;
}

std::uint32_t Be32(std::span<const std::uint8_t> b, std::size_t at) {
  return (static_cast<std::uint32_t>(b[at]) << 24) |
         (static_cast<std::uint32_t>(b[at + 1]) << 16) |
         (static_cast<std::uint32_t>(b[at + 2]) << 8) | b[at + 3];
}

bool IsHeifBrand(std::span<const std::uint8_t> b, std::size_t at) {
  static constexpr std::array<std::string_view, 10> kBrands = {
      "heic", "heix", "hevc", "hevx", "heim", "heis", "hevm", "hevs", "mif1", "msf1"};
  for (auto brand : kBrands) {
    if (HasPrefix(b, brand, at)) return true;
  }
  return false;
}

struct Box {
  std::string_view type;
  std::span<const std::uint8_t> payload;
};

// Calls `visit` for every box in `region`; false when the boxes do not tile
// the region exactly or a visitor rejects one.
bool WalkBoxes(std::span<const std::uint8_t> region,
               const std::function<bool(const Box&)>& visit) {
  std::size_t at = 0;
  while (at < region.size()) {
    if (region.size() - at < 8) return false;
    std::uint64_t size = Be32(region, at);
    std::size_t header = 8;
    if (size == 1) {
      if (region.size() - at < 16) return false;
      size = (static_cast<std::uint64_t>(Be32(region, at + 8)) << 32) |
             Be32(region, at + 12);
      header = 16;
    } else if (size == 0) {
      size = region.size() - at;
    }
    if (size < header || size > region.size() - at) return false;
    const Box box{
        std::string_view(reinterpret_cast<const char*>(region.data() + at + 4), 4),
        region.subspan(at + header, static_cast<std::size_t>(size) - header)};
    if (!visit(box)) return false;
    at += static_cast<std::size_t>(size);
  }
  return true;
}

}  // namespace

std::optional<ImageFormat> DetectImageFormat(std::span<const std::uint8_t> b) {
  if (HasPrefix(b, "\x89PNG\r\n\x1a\n")) return ImageFormat::kPng;
  if (HasPrefix(b, "GIF87a") || HasPrefix(b, "GIF89a")) return ImageFormat::kGif;
  if (HasPrefix(b, "BM")) return ImageFormat::kBmp;
  if (HasPrefix(b, std::string_view("II*\0", 4)) ||
      HasPrefix(b, std::string_view("MM\0*", 4))) {
    return ImageFormat::kTiff;
  }
  if (HasPrefix(b, "ftyp", 4) && IsHeifBrand(b, 8)) return ImageFormat::kHeic;
  return std::nullopt;
}

bool HasDecoder(ImageFormat f) { return f != ImageFormat::kHeic; }

bool HeicStructureValid(std::span<const std::uint8_t> bytes) {
  bool first = true;
  bool ftyp_ok = false;
  bool meta_ok = false;
  const bool tiled = WalkBoxes(bytes, [&](const Box& box) {
    if (first) {
      first = false;
      if (box.type != "ftyp" || box.payload.size() < 8) return false;
      if (IsHeifBrand(box.payload, 0)) ftyp_ok = true;
      for (std::size_t at = 8; at + 4 <= box.payload.size(); at += 4) {
        if (IsHeifBrand(box.payload, at)) ftyp_ok = true;
      }
      return ftyp_ok;
    }
    if (box.type == "meta") {
      // FullBox: 4 bytes of version and flags precede the children.
      if (box.payload.size() < 4) return false;
      bool pict = false;
      const bool children_ok = WalkBoxes(box.payload.subspan(4), [&](const Box& child) {
        if (child.type == "hdlr") {
          if (child.payload.size() < 12) return false;
          pict = HasPrefix(child.payload, "pict", 8);
        }
        return true;
      });
      if (!children_ok || !pict) return false;
      meta_ok = true;
    }
    return true;
  });
  return tiled && ftyp_ok && meta_ok;
}

RgbImage DecodeImage(std::span<const std::uint8_t> bytes,
                     std::optional<ImageFormat> format) {
  if (!format) format = DetectImageFormat(bytes);
  if (!format) Fail(ErrorKind::kNotDecodable, "unrecognised image format");
  std::optional<RgbImage> img;
  switch (*format) {
    case ImageFormat::kBmp: img = codecs::DecodeBmp(bytes); break;
    case ImageFormat::kGif: img = codecs::DecodeGif(bytes); break;
    case ImageFormat::kPng: img = codecs::DecodePng(bytes); break;
    case ImageFormat::kTiff: img = codecs::DecodeTiff(bytes); break;
    case ImageFormat::kHeic:
      Fail(ErrorKind::kNotDecodable, "no HEIC decoder in this build");
  }
  if (!img) {
    Fail(ErrorKind::kNotDecodable,
         "failed to decode " + std::string(ImageFormatName(*format)) + " data");
  }
  return std::move(*img);
}

bool IsDecodable(std::span<const std::uint8_t> bytes,
                 std::optional<ImageFormat> format) {
  if (!format) format = DetectImageFormat(bytes);
  if (!format) return false;
  if (!HasDecoder(*format)) return HeicStructureValid(bytes);
  try {
    DecodeImage(bytes, format);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace dfbench
