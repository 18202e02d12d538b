#include <array>
#include <bit>
#include <cstring>

#include "image_codecs.hpp"

namespace dfbench::codecs {

namespace {

constexpr std::uint32_t kBiRgb = 0;
constexpr std::uint32_t kBiRle8 = 1;
constexpr std::uint32_t kBiRle4 = 2;
constexpr std::uint32_t kBiBitfields = 3;
constexpr std::uint32_t kBiAlphaBitfields = 6;

std::uint16_t U16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}
std::uint32_t U32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

// Scales a masked channel to 8 bits.
struct Channel {
  std::uint32_t mask = 0;
  int shift = 0;
  int bits = 0;

  explicit Channel(std::uint32_t m = 0) : mask(m) {
    if (m == 0) return;
    shift = std::countr_zero(m);
    bits = std::popcount(m);
  }
  std::uint8_t Extract(std::uint32_t px) const {
    if (mask == 0) return 0;
    const std::uint32_t v = (px & mask) >> shift;
    const std::uint32_t max = bits >= 32 ? 0xFFFFFFFFu : ((1u << bits) - 1);
    return static_cast<std::uint8_t>((static_cast<std::uint64_t>(v) * 255 + max / 2) / max);
  }
};

struct Header {
  std::uint32_t pixel_offset = 0;
  std::uint32_t dib_size = 0;
  std::int64_t width = 0;
  std::int64_t height = 0;  // negative: top-down
  std::uint16_t bpp = 0;
  std::uint32_t compression = kBiRgb;
  std::uint32_t colors_used = 0;
  std::array<std::uint32_t, 3> masks{};
  std::vector<Rgb> palette;
};

std::optional<Header> ParseHeader(std::span<const std::uint8_t> b) {
  if (b.size() < 26 || b[0] != 'B' || b[1] != 'M') return std::nullopt;
  Header h;
  h.pixel_offset = U32(b, 10);
  h.dib_size = U32(b, 14);
  std::size_t palette_entry = 4;
  if (h.dib_size == 12) {
    h.width = U16(b, 18);
    h.height = static_cast<std::int16_t>(U16(b, 20));
    if (U16(b, 22) != 1) return std::nullopt;
    h.bpp = U16(b, 24);
    palette_entry = 3;
  } else if (h.dib_size >= 40 && h.dib_size <= 124) {
    if (b.size() < 14 + std::size_t{h.dib_size}) return std::nullopt;
    h.width = static_cast<std::int32_t>(U32(b, 18));
    h.height = static_cast<std::int32_t>(U32(b, 22));
    if (U16(b, 26) != 1) return std::nullopt;
    h.bpp = U16(b, 28);
    h.compression = U32(b, 30);
    h.colors_used = U32(b, 46);
  } else {
    return std::nullopt;
  }
  if (h.width <= 0 || h.height == 0) return std::nullopt;
  const std::uint64_t abs_height = static_cast<std::uint64_t>(h.height < 0 ? -h.height : h.height);
  if (static_cast<std::uint64_t>(h.width) * abs_height > kMaxPixels) return std::nullopt;

  std::size_t cursor = 14 + h.dib_size;
  if (h.compression == kBiBitfields || h.compression == kBiAlphaBitfields) {
    if (h.bpp != 16 && h.bpp != 32) return std::nullopt;
    // Masks live inside V2+ headers, after a 40-byte header otherwise.
    const std::size_t at = 14 + 40;
    if (b.size() < at + 12) return std::nullopt;
    h.masks = {U32(b, at), U32(b, at + 4), U32(b, at + 8)};
    if (h.dib_size == 40) cursor += h.compression == kBiAlphaBitfields ? 16 : 12;
  } else if (h.bpp == 16) {
    h.masks = {0x7C00, 0x03E0, 0x001F};
  } else if (h.bpp == 32) {
    h.masks = {0x00FF0000, 0x0000FF00, 0x000000FF};
  }

  switch (h.compression) {
    case kBiRgb:
      if (h.bpp != 1 && h.bpp != 4 && h.bpp != 8 && h.bpp != 16 &&
          h.bpp != 24 && h.bpp != 32) {
        return std::nullopt;
      }
      break;
    case kBiRle8:
      if (h.bpp != 8 || h.height < 0) return std::nullopt;
      break;
    case kBiRle4:
      if (h.bpp != 4 || h.height < 0) return std::nullopt;
      break;
    case kBiBitfields:
    case kBiAlphaBitfields:
      break;
    default:
      return std::nullopt;
  }

  if (h.bpp <= 8) {
    std::size_t n = h.colors_used != 0 ? h.colors_used : (std::size_t{1} << h.bpp);
    if (n > 256) return std::nullopt;
    if (cursor + n * palette_entry > b.size() || cursor + n * palette_entry > h.pixel_offset) {
      return std::nullopt;
    }
    h.palette.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t at = cursor + i * palette_entry;
      h.palette[i] = {b[at + 2], b[at + 1], b[at]};
    }
  }
  if (h.pixel_offset < cursor || h.pixel_offset > b.size()) return std::nullopt;
  return h;
}

void Put(RgbImage& img, std::uint64_t x, std::uint64_t y, Rgb c) {
  const std::size_t at = (y * img.width + x) * 3;
  img.pixels[at] = c.r;
  img.pixels[at + 1] = c.g;
  img.pixels[at + 2] = c.b;
}

Rgb PaletteColor(const Header& h, std::uint32_t index) {
  if (index >= h.palette.size()) return {};
  return h.palette[index];
}

bool DecodeUncompressed(std::span<const std::uint8_t> b, const Header& h,
                        RgbImage& img) {
  const std::uint64_t stride = (static_cast<std::uint64_t>(h.bpp) * img.width + 31) / 32 * 4;
  if (h.pixel_offset + stride * img.height > b.size()) return false;
  const Channel cr(h.masks[0]), cg(h.masks[1]), cb(h.masks[2]);
  for (std::uint64_t row = 0; row < img.height; ++row) {
    const std::uint64_t y = h.height < 0 ? row : img.height - 1 - row;
    const std::uint8_t* p = b.data() + h.pixel_offset + row * stride;
    for (std::uint64_t x = 0; x < img.width; ++x) {
      Rgb c;
      switch (h.bpp) {
        case 1: c = PaletteColor(h, (p[x / 8] >> (7 - x % 8)) & 1); break;
        case 4: c = PaletteColor(h, (p[x / 2] >> (x % 2 ? 0 : 4)) & 0xF); break;
        case 8: c = PaletteColor(h, p[x]); break;
        case 16: {
          const std::uint32_t v = p[2 * x] | (p[2 * x + 1] << 8);
          c = {cr.Extract(v), cg.Extract(v), cb.Extract(v)};
          break;
        }
        case 24: c = {p[3 * x + 2], p[3 * x + 1], p[3 * x]}; break;
        case 32: {
          const std::uint32_t v = static_cast<std::uint32_t>(p[4 * x]) |
                                  (static_cast<std::uint32_t>(p[4 * x + 1]) << 8) |
                                  (static_cast<std::uint32_t>(p[4 * x + 2]) << 16) |
                                  (static_cast<std::uint32_t>(p[4 * x + 3]) << 24);
          c = {cr.Extract(v), cg.Extract(v), cb.Extract(v)};
          break;
        }
        default: return false;
      }
      Put(img, x, y, c);
    }
  }
  return true;
}

// RLE8/RLE4; bottom-up only. The stream must end with an end-of-bitmap code.
bool DecodeRle(std::span<const std::uint8_t> b, const Header& h, RgbImage& img,
               bool four_bit) {
  std::size_t at = h.pixel_offset;
  std::uint64_t x = 0, row = 0;
  const auto emit = [&](std::uint32_t index) {
    if (x < img.width && row < img.height) Put(img, x, img.height - 1 - row, PaletteColor(h, index));
    ++x;
  };
  while (at + 2 <= b.size()) {
    const std::uint8_t count = b[at], value = b[at + 1];
    at += 2;
    if (count > 0) {
      for (std::uint32_t i = 0; i < count; ++i) {
        emit(four_bit ? ((i % 2 == 0) ? value >> 4 : value & 0xF) : value);
      }
      continue;
    }
    switch (value) {
      case 0:
        x = 0;
        ++row;
        break;
      case 1:
        return true;
      case 2:
        if (at + 2 > b.size()) return false;
        x += b[at];
        row += b[at + 1];
        at += 2;
        break;
      default: {
        const std::size_t n = value;
        const std::size_t bytes = four_bit ? (n + 1) / 2 : n;
        const std::size_t padded = bytes + (bytes % 2);
        if (at + padded > b.size()) return false;
        for (std::size_t i = 0; i < n; ++i) {
          emit(four_bit ? ((i % 2 == 0) ? b[at + i / 2] >> 4 : b[at + i / 2] & 0xF)
                        : b[at + i]);
        }
        at += padded;
        break;
      }
    }
    if (row > img.height) return false;
  }
  return false;
}

}  // namespace

std::optional<RgbImage> DecodeBmp(std::span<const std::uint8_t> bytes) {
  const auto header = ParseHeader(bytes);
  if (!header) return std::nullopt;
  RgbImage img;
  img.width = static_cast<std::uint32_t>(header->width);
  img.height = static_cast<std::uint32_t>(header->height < 0 ? -header->height : header->height);
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height * 3, 0);

  bool ok = false;
  if (header->compression == kBiRle8) {
    ok = DecodeRle(bytes, *header, img, false);
  } else if (header->compression == kBiRle4) {
    ok = DecodeRle(bytes, *header, img, true);
  } else {
    ok = DecodeUncompressed(bytes, *header, img);
  }
  if (!ok) return std::nullopt;
  return img;
}

}  // namespace dfbench::codecs
