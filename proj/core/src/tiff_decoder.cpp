#include <tiffio.h>

#include <cstring>
#include <mutex>

#include "image_codecs.hpp"

namespace dfbench::codecs {

namespace {

struct MemoryFile {
  std::span<const std::uint8_t> bytes;
  toff_t pos = 0;
};

tsize_t Read(thandle_t h, tdata_t out, tsize_t n) {
  auto* f = static_cast<MemoryFile*>(h);
  if (n < 0 || f->pos >= f->bytes.size()) return 0;
  const toff_t left = f->bytes.size() - f->pos;
  const toff_t take = static_cast<toff_t>(n) < left ? static_cast<toff_t>(n) : left;
  std::memcpy(out, f->bytes.data() + f->pos, take);
  f->pos += take;
  return static_cast<tsize_t>(take);
}

tsize_t Write(thandle_t, tdata_t, tsize_t) { return 0; }

toff_t Seek(thandle_t h, toff_t off, int whence) {
  auto* f = static_cast<MemoryFile*>(h);
  toff_t base = 0;
  if (whence == SEEK_CUR) base = f->pos;
  if (whence == SEEK_END) base = f->bytes.size();
  f->pos = base + off;
  return f->pos;
}

int Close(thandle_t) { return 0; }
toff_t Size(thandle_t h) { return static_cast<MemoryFile*>(h)->bytes.size(); }
int Map(thandle_t, tdata_t*, toff_t*) { return 0; }
void Unmap(thandle_t, tdata_t, toff_t) {}

void SilenceLibtiff() {
  static std::once_flag once;
  std::call_once(once, [] {
    TIFFSetErrorHandler(nullptr);
    TIFFSetWarningHandler(nullptr);
  });
}

}  // namespace

std::optional<RgbImage> DecodeTiff(std::span<const std::uint8_t> bytes) {
  SilenceLibtiff();
  MemoryFile file{bytes, 0};
  TIFF* tif = TIFFClientOpen("memory", "rm", &file, Read, Write, Seek, Close,
                             Size, Map, Unmap);
  if (!tif) return std::nullopt;

  std::optional<RgbImage> result;
  std::uint32_t width = 0, height = 0;
  if (TIFFGetField(tif, TIFFTAG_IMAGEWIDTH, &width) &&
      TIFFGetField(tif, TIFFTAG_IMAGELENGTH, &height) && width > 0 &&
      height > 0 && static_cast<std::uint64_t>(width) * height <= kMaxPixels) {
    std::vector<std::uint32_t> raster(static_cast<std::size_t>(width) * height);
    if (TIFFReadRGBAImageOriented(tif, width, height, raster.data(),
                                  ORIENTATION_TOPLEFT, 1)) {
      RgbImage img;
      img.width = width;
      img.height = height;
      img.pixels.resize(raster.size() * 3);
      for (std::size_t i = 0; i < raster.size(); ++i) {
        img.pixels[3 * i] = static_cast<std::uint8_t>(TIFFGetR(raster[i]));
        img.pixels[3 * i + 1] = static_cast<std::uint8_t>(TIFFGetG(raster[i]));
        img.pixels[3 * i + 2] = static_cast<std::uint8_t>(TIFFGetB(raster[i]));
      }
      result = std::move(img);
    }
  }
  TIFFClose(tif);
  return result;
}

}  // namespace dfbench::codecs
