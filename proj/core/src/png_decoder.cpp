#include <png.h>

#include <csetjmp>
#include <cstring>

#include "image_codecs.hpp"

namespace dfbench::codecs {

namespace {

struct MemoryReader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void ReadFromMemory(png_structp png, png_bytep out, png_size_t n) {
  auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (r->pos + n > r->bytes.size()) png_error(png, "read past end of data");
  std::memcpy(out, r->bytes.data() + r->pos, n);
  r->pos += n;
}

void SilentWarning(png_structp, png_const_charp) {}

[[noreturn]] void SilentError(png_structp png, png_const_charp) { png_longjmp(png, 1); }

// Everything with a destructor lives in the caller; this frame only holds
// trivially destructible state across setjmp.
bool Decode(png_structp png, png_infop info, MemoryReader* reader,
            RgbImage* img, std::vector<png_bytep>* rows) {
  if (setjmp(png_jmpbuf(png))) return false;

  png_set_read_fn(png, reader, ReadFromMemory);
  png_read_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  if (static_cast<std::uint64_t>(width) * height > kMaxPixels) return false;

  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  if (png_get_rowbytes(png, info) != static_cast<png_size_t>(width) * 3) return false;

  img->width = width;
  img->height = height;
  img->pixels.resize(static_cast<std::size_t>(width) * height * 3);
  rows->resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    (*rows)[y] = img->pixels.data() + static_cast<std::size_t>(y) * width * 3;
  }
  png_read_image(png, rows->data());
  png_read_end(png, nullptr);
  return true;
}

}  // namespace

std::optional<RgbImage> DecodePng(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) return std::nullopt;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, SilentError, SilentWarning);
  if (!png) return std::nullopt;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return std::nullopt;
  }
  MemoryReader reader{bytes, 0};
  RgbImage img;
  std::vector<png_bytep> rows;
  const bool ok = Decode(png, info, &reader, &img, &rows);
  png_destroy_read_struct(&png, &info, nullptr);
  if (!ok) return std::nullopt;
  return img;
}

}  // namespace dfbench::codecs
