#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfbench/image.hpp"
#include "dfbench/metrics.hpp"

namespace dfbench {

inline constexpr std::size_t kSimilarityChunk = 512;

// Fraction of the ground-truth file's 512-byte chunks whose exact content
// occurs at some 512-aligned offset of the carved file. A trailing partial
// ground-truth chunk matches when some aligned carved chunk starts with it.
// Normalized by the ground-truth chunk count, so not symmetric.
double ByteSimilarity(std::span<const std::uint8_t> carved,
                      std::span<const std::uint8_t> ground_truth);

struct CarvedFile {
  std::string name;
  std::vector<std::uint8_t> bytes;
  std::optional<ImageFormat> claimed_format;
};

// A reference image loaded from the ground-truth corpus.
struct GroundTruthImage {
  std::string name;
  std::vector<std::uint8_t> bytes;
  std::optional<ImageFormat> format;
};

enum class CarvingOutcome { kTp, kFp, kFn };
std::string_view CarvingOutcomeName(CarvingOutcome o);

// One verdict per ground-truth file (tp or fn, naming the paired carved file
// when a candidate existed) followed by one fp verdict per carved file left
// unclaimed.
struct CarvingVerdict {
  std::optional<std::string> gt_file;
  std::optional<std::string> carved_file;
  double similarity = 0.0;
  bool decodable = false;
  // Hamming distance of the pairing; absent when either side has no hash.
  std::optional<int> hamming_distance;
  CarvingOutcome outcome = CarvingOutcome::kFn;
};

struct CarvingOptions {
  // Inclusive lower bound on ByteSimilarity for a TP.
  double similarity_threshold = 0.20;
};

struct CarvingScore {
  MatchCounts counts;
  Metrics metrics;
  std::vector<CarvingVerdict> verdicts;
};

// Ground-truth files are visited in name order. Each is paired with the
// unclaimed carved file of least pHash Hamming distance; ties, and files
// without a hash (undecodable, or a format with no pixel decoder), fall back
// to higher ByteSimilarity, then the smaller name. The pair is a TP, and the
// carved file claimed, iff similarity >= threshold and the carved file is
// decodable; otherwise the ground-truth file is an FN. Carved files left
// unclaimed are FPs.
CarvingScore ScoreCarving(std::span<const GroundTruthImage> ground_truth,
                          std::span<const CarvedFile> carved,
                          const CarvingOptions& options = {});

}  // namespace dfbench
