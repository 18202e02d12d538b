#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dfbench/csv.hpp"
#include "dfbench/fileio.hpp"
#include "dfbench/image.hpp"
#include "dfbench/phash.hpp"
#include "expect.hpp"
#include "images.hpp"

namespace dfbench {
namespace {

namespace fs = std::filesystem;
using namespace testing;

const fs::path kPhashDir = fs::path(DFBENCH_FIXTURES) / "phash";

std::vector<std::uint8_t> Load(const fs::path& p) {
  auto bytes = ReadFileBytes(p.string());
  EXPECT_TRUE(bytes) << p;
  return bytes.value_or(std::vector<std::uint8_t>{});
}

TEST(DetectImageFormat, Signatures) {
  const RgbImage img = MakePatternImage(8, 8, 1);
  EXPECT_EQ(DetectImageFormat(EncodeBmp(img)), ImageFormat::kBmp);
  EXPECT_EQ(DetectImageFormat(EncodePng(img)), ImageFormat::kPng);
  EXPECT_EQ(DetectImageFormat(EncodeGif(img)), ImageFormat::kGif);
  EXPECT_EQ(DetectImageFormat(EncodeTiff(img)), ImageFormat::kTiff);
  EXPECT_EQ(DetectImageFormat(MakeHeic(1, 64)), ImageFormat::kHeic);
  const std::vector<std::uint8_t> junk(64, 0x41);
  EXPECT_FALSE(DetectImageFormat(junk));
}

TEST(ParseImageFormat, Names) {
  EXPECT_EQ(ParseImageFormat("PNG"), ImageFormat::kPng);
  EXPECT_EQ(ParseImageFormat("tif"), ImageFormat::kTiff);
  EXPECT_FALSE(ParseImageFormat("jpeg2000"));
  for (auto f : {ImageFormat::kBmp, ImageFormat::kGif, ImageFormat::kPng, ImageFormat::kHeic,
                 ImageFormat::kTiff}) {
    EXPECT_EQ(ParseImageFormat(ImageFormatName(f)), f);
  }
}

TEST(Decoders, LosslessRoundTrip) {
  const RgbImage img = MakePatternImage(37, 21, 9);
  for (const auto& bytes : {EncodeBmp(img), EncodePng(img), EncodeTiff(img)}) {
    const RgbImage back = DecodeImage(bytes);
    EXPECT_EQ(back.width, img.width);
    EXPECT_EQ(back.height, img.height);
    EXPECT_EQ(back.pixels, img.pixels);
  }
}

TEST(Decoders, GifPaletteRoundTrip) {
  const RgbImage img = MakePatternImage(40, 30, 4);
  const RgbImage back = DecodeImage(EncodeGif(img));
  ASSERT_EQ(back.pixels.size(), img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
    // 3-3-2 quantization keeps the top bits of each channel.
    EXPECT_EQ(back.pixels[i] & 0xE0, img.pixels[i] & 0xE0);
    EXPECT_EQ(back.pixels[i + 1] & 0xE0, img.pixels[i + 1] & 0xE0);
    EXPECT_EQ(back.pixels[i + 2] & 0xC0, img.pixels[i + 2] & 0xC0);
  }
}

TEST(Decoders, ForeignEncodersAgree) {
  for (const char* name : {"wave", "wide", "odd"}) {
    const RgbImage png = DecodeImage(Load(kPhashDir / (std::string(name) + ".png")));
    for (const char* ext : {".bmp", ".tiff"}) {
      const RgbImage other = DecodeImage(Load(kPhashDir / (std::string(name) + ext)));
      EXPECT_EQ(other.width, png.width);
      EXPECT_EQ(other.height, png.height);
      EXPECT_EQ(other.pixels, png.pixels) << name << ext;
    }
    const RgbImage gif = DecodeImage(Load(kPhashDir / (std::string(name) + ".gif")));
    EXPECT_EQ(gif.width, png.width);
    EXPECT_EQ(gif.height, png.height);
  }
}

TEST(Decoders, DamagedInputIsNotDecodable) {
  const RgbImage img = MakePatternImage(32, 32, 2);
  for (auto bytes : {EncodeBmp(img), EncodePng(img), EncodeGif(img), EncodeTiff(img)}) {
    bytes.resize(bytes.size() / 3);
    EXPECT_DFB_ERROR(DecodeImage(bytes), ErrorKind::kNotDecodable);
    EXPECT_FALSE(IsDecodable(bytes));
  }
  const std::vector<std::uint8_t> junk(100, 7);
  EXPECT_DFB_ERROR(DecodeImage(junk), ErrorKind::kNotDecodable);
  EXPECT_DFB_ERROR(DecodeImage(EncodePng(img), ImageFormat::kBmp), ErrorKind::kNotDecodable);
}

TEST(Heic, StructureCheck) {
  const auto heic = MakeHeic(3, 1000);
  EXPECT_TRUE(HeicStructureValid(heic));
  EXPECT_TRUE(IsDecodable(heic));
  EXPECT_FALSE(HasDecoder(ImageFormat::kHeic));
  EXPECT_DFB_ERROR(DecodeImage(heic), ErrorKind::kNotDecodable);

  auto truncated = heic;
  truncated.resize(heic.size() - 10);
  EXPECT_FALSE(HeicStructureValid(truncated));

  auto not_ftyp = heic;
  not_ftyp[4] = 'x';
  EXPECT_FALSE(HeicStructureValid(not_ftyp));
}

TEST(Phash, MatchesFrozenOracle) {
  std::ifstream in(kPhashDir / "expected.csv");
  ASSERT_TRUE(in);
  CsvTable table(in);
  CsvRecord row;
  int checked = 0;
  while (table.Next(row)) {
    const auto bytes = Load(kPhashDir / row[0]);
    const PerceptualHash h = ComputePhash(bytes);
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h.bits));
    EXPECT_EQ(std::string(hex), row[1]) << row[0];
    ++checked;
  }
  EXPECT_EQ(checked, 12);
}

TEST(Phash, StableUnderReencodingAndDistinctAcrossImages) {
  const RgbImage a = MakePatternImage(64, 64, 1);
  const RgbImage b = MakePatternImage(64, 64, 2);
  const auto ha = ComputePhash(a);
  EXPECT_EQ(ComputePhash(EncodePng(a)), ha);
  EXPECT_LE(HammingDistance(ComputePhash(EncodeGif(a)), ha), 6);
  EXPECT_GT(HammingDistance(ComputePhash(b), ha), 10);
  EXPECT_EQ(HammingDistance(ha, ha), 0);
}

}  // namespace
}  // namespace dfbench
