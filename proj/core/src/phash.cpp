#include "dfbench/phash.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

namespace dfbench {

namespace {

constexpr int kSize = 32;
constexpr int kLow = 8;

// Resamples `n_in` samples to kSize outputs; output o averages the input
// interval [o * n_in / kSize, (o + 1) * n_in / kSize) weighted by overlap.
std::vector<std::vector<std::pair<int, double>>> AreaWeights(int n_in) {
  std::vector<std::vector<std::pair<int, double>>> weights(kSize);
  const double scale = static_cast<double>(n_in) / kSize;
  for (int o = 0; o < kSize; ++o) {
    const double lo = o * scale;
    const double hi = (o + 1) * scale;
    const int first = static_cast<int>(std::floor(lo));
    const int last = std::min(n_in - 1, static_cast<int>(std::ceil(hi)) - 1);
    for (int i = first; i <= last; ++i) {
      const double overlap = std::min<double>(i + 1, hi) - std::max<double>(i, lo);
      if (overlap > 0) weights[o].emplace_back(i, overlap / scale);
    }
  }
  return weights;
}

const std::array<std::array<double, kSize>, kLow>& DctBasis() {
  static const auto basis = [] {
    std::array<std::array<double, kSize>, kLow> b{};
    for (int k = 0; k < kLow; ++k) {
      const double alpha = k == 0 ? std::sqrt(1.0 / kSize) : std::sqrt(2.0 / kSize);
      for (int n = 0; n < kSize; ++n) {
        b[k][n] = alpha * std::cos(std::numbers::pi * (2 * n + 1) * k / (2.0 * kSize));
      }
    }
    return b;
  }();
  return basis;
}

}  // namespace

int HammingDistance(PerceptualHash a, PerceptualHash b) {
  return std::popcount(a.bits ^ b.bits);
}

PerceptualHash ComputePhash(const RgbImage& image) {
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);

  std::vector<double> luma(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < luma.size(); ++i) {
    luma[i] = 0.299 * image.pixels[3 * i] + 0.587 * image.pixels[3 * i + 1] +
              0.114 * image.pixels[3 * i + 2];
  }

  // Columns first: h x 32, then rows: 32 x 32.
  const auto wx = AreaWeights(w);
  std::vector<double> narrow(static_cast<std::size_t>(h) * kSize, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int ox = 0; ox < kSize; ++ox) {
      double acc = 0.0;
      for (const auto& [x, weight] : wx[ox]) acc += weight * luma[static_cast<std::size_t>(y) * w + x];
      narrow[static_cast<std::size_t>(y) * kSize + ox] = acc;
    }
  }
  const auto wy = AreaWeights(h);
  std::array<std::array<double, kSize>, kSize> small{};
  for (int oy = 0; oy < kSize; ++oy) {
    for (int x = 0; x < kSize; ++x) {
      double acc = 0.0;
      for (const auto& [y, weight] : wy[oy]) acc += weight * narrow[static_cast<std::size_t>(y) * kSize + x];
      small[oy][x] = acc;
    }
  }

  // Only the 8x8 low-frequency corner of the DCT is needed.
  const auto& basis = DctBasis();
  std::array<std::array<double, kSize>, kLow> rows_dct{};  // [u][x]
  for (int u = 0; u < kLow; ++u) {
    for (int x = 0; x < kSize; ++x) {
      double acc = 0.0;
      for (int y = 0; y < kSize; ++y) acc += basis[u][y] * small[y][x];
      rows_dct[u][x] = acc;
    }
  }
  std::array<double, kLow * kLow> coeffs{};
  for (int u = 0; u < kLow; ++u) {
    for (int v = 0; v < kLow; ++v) {
      double acc = 0.0;
      for (int x = 0; x < kSize; ++x) acc += basis[v][x] * rows_dct[u][x];
      coeffs[u * kLow + v] = acc;
    }
  }

  std::array<double, kLow * kLow - 1> ac{};
  std::copy(coeffs.begin() + 1, coeffs.end(), ac.begin());
  std::sort(ac.begin(), ac.end());
  coeffs[0] = ac[ac.size() / 2];
  std::array<double, kLow * kLow> sorted = coeffs;
  std::sort(sorted.begin(), sorted.end());
  const double median = (sorted[31] + sorted[32]) / 2.0;

  PerceptualHash hash;
  for (int k = 0; k < kLow * kLow; ++k) {
    if (coeffs[k] > median) hash.bits |= std::uint64_t{1} << (63 - k);
  }
  return hash;
}

PerceptualHash ComputePhash(std::span<const std::uint8_t> bytes,
                            std::optional<ImageFormat> format) {
  return ComputePhash(DecodeImage(bytes, format));
}

}  // namespace dfbench
