#include <array>

#include "image_codecs.hpp"

namespace dfbench::codecs {

namespace {

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> b) : b_(b) {}
  bool Has(std::size_t n) const { return pos_ + n <= b_.size(); }
  std::uint8_t U8() { return b_[pos_++]; }
  std::uint16_t U16() {
    const std::uint16_t v = static_cast<std::uint16_t>(b_[pos_] | (b_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::span<const std::uint8_t> Take(std::size_t n) {
    auto s = b_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

using Palette = std::vector<std::array<std::uint8_t, 3>>;

bool ReadPalette(Cursor& c, std::size_t entries, Palette& out) {
  if (!c.Has(entries * 3)) return false;
  out.resize(entries);
  for (auto& e : out) e = {c.U8(), c.U8(), c.U8()};
  return true;
}

// Concatenates data sub-blocks up to the zero-length terminator.
bool ReadSubBlocks(Cursor& c, std::vector<std::uint8_t>* out) {
  while (true) {
    if (!c.Has(1)) return false;
    const std::uint8_t n = c.U8();
    if (n == 0) return true;
    if (!c.Has(n)) return false;
    const auto chunk = c.Take(n);
    if (out) out->insert(out->end(), chunk.begin(), chunk.end());
  }
}

// Variable-width LZW as used by GIF. Produces exactly `count` indices or
// fails; codes after the image is complete are ignored.
bool DecodeLzw(std::span<const std::uint8_t> data, int min_code_size,
               std::size_t count, std::vector<std::uint8_t>& out) {
  if (min_code_size < 2 || min_code_size > 11) return false;
  constexpr int kMaxCodes = 4096;
  std::array<std::uint16_t, kMaxCodes> prefix{};
  std::array<std::uint8_t, kMaxCodes> suffix{};
  std::array<std::uint8_t, kMaxCodes> first{};
  std::array<std::uint8_t, kMaxCodes + 1> stack{};

  const int clear = 1 << min_code_size;
  const int eoi = clear + 1;
  int code_size = min_code_size + 1;
  int next = clear + 2;
  int prev = -1;
  for (int i = 0; i < clear; ++i) {
    suffix[i] = first[i] = static_cast<std::uint8_t>(i);
  }

  out.clear();
  out.reserve(count);
  std::uint32_t bit_buffer = 0;
  int bits = 0;
  std::size_t at = 0;
  while (out.size() < count) {
    while (bits < code_size) {
      if (at >= data.size()) return false;
      bit_buffer |= static_cast<std::uint32_t>(data[at++]) << bits;
      bits += 8;
    }
    const int code = static_cast<int>(bit_buffer & ((1u << code_size) - 1));
    bit_buffer >>= code_size;
    bits -= code_size;

    if (code == clear) {
      code_size = min_code_size + 1;
      next = clear + 2;
      prev = -1;
      continue;
    }
    if (code == eoi) return false;  // image data ended early

    int sp = 0;
    int cur = code;
    if (prev < 0) {
      if (code >= clear) return false;
      out.push_back(static_cast<std::uint8_t>(code));
      prev = code;
      continue;
    }
    if (code > next || (code == next && next >= kMaxCodes)) return false;
    if (code == next) {
      stack[sp++] = first[prev];
      cur = prev;
    }
    while (cur >= clear) {
      if (sp >= kMaxCodes) return false;
      stack[sp++] = suffix[cur];
      cur = prefix[cur];
    }
    stack[sp++] = static_cast<std::uint8_t>(cur);
    const std::uint8_t head = static_cast<std::uint8_t>(cur);
    while (sp > 0 && out.size() < count) out.push_back(stack[--sp]);

    if (next < kMaxCodes) {
      prefix[next] = static_cast<std::uint16_t>(prev);
      suffix[next] = head;
      first[next] = first[prev];
      ++next;
      if (next == (1 << code_size) && code_size < 12) ++code_size;
    }
    prev = code;
  }
  return true;
}

}  // namespace

std::optional<RgbImage> DecodeGif(std::span<const std::uint8_t> bytes) {
  Cursor c(bytes);
  if (!c.Has(13)) return std::nullopt;
  const auto sig = c.Take(6);
  if (!(sig[0] == 'G' && sig[1] == 'I' && sig[2] == 'F' && sig[3] == '8' &&
        (sig[4] == '7' || sig[4] == '9') && sig[5] == 'a')) {
    return std::nullopt;
  }
  RgbImage img;
  img.width = c.U16();
  img.height = c.U16();
  const std::uint8_t packed = c.U8();
  const std::uint8_t background = c.U8();
  c.U8();  // aspect ratio
  if (img.width == 0 || img.height == 0) return std::nullopt;

  Palette global;
  if (packed & 0x80) {
    if (!ReadPalette(c, std::size_t{1} << ((packed & 7) + 1), global)) return std::nullopt;
  }
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height * 3, 0);
  if (background < global.size()) {
    for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
      img.pixels[i] = global[background][0];
      img.pixels[i + 1] = global[background][1];
      img.pixels[i + 2] = global[background][2];
    }
  }

  bool have_frame = false;
  while (true) {
    if (!c.Has(1)) return std::nullopt;  // missing trailer
    const std::uint8_t tag = c.U8();
    if (tag == 0x3B) break;
    if (tag == 0x21) {
      if (!c.Has(1)) return std::nullopt;
      c.U8();  // label
      if (!ReadSubBlocks(c, nullptr)) return std::nullopt;
      continue;
    }
    if (tag != 0x2C) return std::nullopt;

    if (!c.Has(10)) return std::nullopt;
    const std::uint32_t left = c.U16(), top = c.U16();
    const std::uint32_t w = c.U16(), h = c.U16();
    const std::uint8_t flags = c.U8();
    Palette local;
    if (flags & 0x80) {
      if (!ReadPalette(c, std::size_t{1} << ((flags & 7) + 1), local)) return std::nullopt;
    }
    const Palette& palette = local.empty() ? global : local;
    if (palette.empty() || w == 0 || h == 0) return std::nullopt;
    if (!c.Has(1)) return std::nullopt;
    const int min_code_size = c.U8();
    std::vector<std::uint8_t> data;
    if (!ReadSubBlocks(c, &data)) return std::nullopt;

    std::vector<std::uint8_t> indices;
    if (!DecodeLzw(data, min_code_size, static_cast<std::size_t>(w) * h, indices)) {
      return std::nullopt;
    }
    if (have_frame) continue;  // only the first frame is rendered
    have_frame = true;

    std::vector<std::uint32_t> rows(h);
    if (flags & 0x40) {
      std::uint32_t r = 0;
      for (std::uint32_t y = 0; y < h; y += 8) rows[r++] = y;
      for (std::uint32_t y = 4; y < h; y += 8) rows[r++] = y;
      for (std::uint32_t y = 2; y < h; y += 4) rows[r++] = y;
      for (std::uint32_t y = 1; y < h; y += 2) rows[r++] = y;
    } else {
      for (std::uint32_t y = 0; y < h; ++y) rows[y] = y;
    }
    for (std::uint32_t i = 0; i < h; ++i) {
      const std::uint32_t y = top + rows[i];
      if (y >= img.height) continue;
      for (std::uint32_t x = 0; x < w; ++x) {
        const std::uint32_t cx = left + x;
        if (cx >= img.width) continue;
        const std::uint8_t index = indices[static_cast<std::size_t>(i) * w + x];
        if (index >= palette.size()) continue;
        const std::size_t at = (static_cast<std::size_t>(y) * img.width + cx) * 3;
        img.pixels[at] = palette[index][0];
        img.pixels[at + 1] = palette[index][1];
        img.pixels[at + 2] = palette[index][2];
      }
    }
  }
  if (!have_frame) return std::nullopt;
  return img;
}

}  // namespace dfbench::codecs
