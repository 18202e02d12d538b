#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "dfbench/image.hpp"

namespace dfbench {

struct PerceptualHash {
  std::uint64_t bits = 0;

  friend bool operator==(const PerceptualHash&, const PerceptualHash&) = default;
};

int HammingDistance(PerceptualHash a, PerceptualHash b);

// DCT perceptual hash. The pipeline is fixed for reproducibility:
//
//   1. luminance Y = 0.299 R + 0.587 G + 0.114 B, in double precision
//   2. area-weighted resample to 32x32 (separable box filter, horizontal
//      pass first)
//   3. orthonormal 2-D type-II DCT
//   4. keep the 8x8 lowest frequencies c[u][v], u the vertical frequency
//   5. replace c[0][0] by the median of the 63 AC terms, then take m, the
//      median of all 64 (mean of the two middle values)
//   6. bit (63 - (8u + v)) is set iff c[u][v] > m
PerceptualHash ComputePhash(const RgbImage& image);

// Decodes, then hashes. Throws NotDecodable.
PerceptualHash ComputePhash(std::span<const std::uint8_t> bytes,
                            std::optional<ImageFormat> format = std::nullopt);

}  // namespace dfbench
