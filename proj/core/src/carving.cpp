#include "dfbench/carving.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <string_view>
#include <unordered_set>

#include "dfbench/error.hpp"
#include "dfbench/phash.hpp"

namespace dfbench {

double ByteSimilarity(std::span<const std::uint8_t> carved,
                      std::span<const std::uint8_t> ground_truth) {
  if (ground_truth.empty()) return 0.0;
  const auto view = [](std::span<const std::uint8_t> s, std::size_t at, std::size_t n) {
    return std::string_view(reinterpret_cast<const char*>(s.data()) + at, n);
  };

  std::unordered_set<std::string_view> carved_chunks;
  for (std::size_t at = 0; at + kSimilarityChunk <= carved.size(); at += kSimilarityChunk) {
    carved_chunks.insert(view(carved, at, kSimilarityChunk));
  }

  const std::size_t full = ground_truth.size() / kSimilarityChunk;
  const std::size_t tail = ground_truth.size() % kSimilarityChunk;
  const std::size_t total = full + (tail != 0);
  std::size_t matched = 0;
  for (std::size_t i = 0; i < full; ++i) {
    if (carved_chunks.count(view(ground_truth, i * kSimilarityChunk, kSimilarityChunk))) {
      ++matched;
    }
  }
  if (tail != 0) {
    const auto partial = view(ground_truth, full * kSimilarityChunk, tail);
    for (std::size_t at = 0; at + tail <= carved.size(); at += kSimilarityChunk) {
      if (view(carved, at, tail) == partial) {
        ++matched;
        break;
      }
    }
  }
  return static_cast<double>(matched) / static_cast<double>(total);
}

std::string_view CarvingOutcomeName(CarvingOutcome o) {
  switch (o) {
    case CarvingOutcome::kTp: return "tp";
    case CarvingOutcome::kFp: return "fp";
    case CarvingOutcome::kFn: return "fn";
  }
  return "";
}

namespace {

struct Prepared {
  bool decodable = false;
  std::optional<PerceptualHash> hash;
};

Prepared Prepare(std::span<const std::uint8_t> bytes, std::optional<ImageFormat> format) {
  Prepared p;
  if (!format) format = DetectImageFormat(bytes);
  if (!format) return p;
  if (!HasDecoder(*format)) {
    p.decodable = HeicStructureValid(bytes);
    return p;
  }
  try {
    p.hash = ComputePhash(DecodeImage(bytes, format));
    p.decodable = true;
  } catch (const Error&) {
  }
  return p;
}

// Sentinel ranking for pairs without a hash: after every real distance.
constexpr int kNoDistance = 65;

}  // namespace

CarvingScore ScoreCarving(std::span<const GroundTruthImage> ground_truth,
                          std::span<const CarvedFile> carved,
                          const CarvingOptions& options) {
  std::vector<Prepared> carved_info;
  carved_info.reserve(carved.size());
  for (const auto& f : carved) carved_info.push_back(Prepare(f.bytes, f.claimed_format));

  std::vector<std::size_t> gt_order(ground_truth.size());
  std::iota(gt_order.begin(), gt_order.end(), 0);
  std::stable_sort(gt_order.begin(), gt_order.end(), [&](std::size_t a, std::size_t b) {
    return ground_truth[a].name < ground_truth[b].name;
  });

  CarvingScore out;
  std::vector<bool> claimed(carved.size(), false);
  for (std::size_t gi : gt_order) {
    const GroundTruthImage& gt = ground_truth[gi];
    const Prepared gt_info = Prepare(gt.bytes, gt.format);

    CarvingVerdict verdict;
    verdict.gt_file = gt.name;
    verdict.outcome = CarvingOutcome::kFn;

    std::optional<std::size_t> best;
    int best_distance = kNoDistance;
    double best_similarity = -1.0;
    for (std::size_t ci = 0; ci < carved.size(); ++ci) {
      if (claimed[ci]) continue;
      const int distance = gt_info.hash && carved_info[ci].hash
                               ? HammingDistance(*gt_info.hash, *carved_info[ci].hash)
                               : kNoDistance;
      if (best && distance > best_distance) continue;
      const double similarity = ByteSimilarity(carved[ci].bytes, gt.bytes);
      const bool better =
          !best || distance < best_distance ||
          (similarity > best_similarity ||
           (similarity == best_similarity && carved[ci].name < carved[*best].name));
      if (better) {
        best = ci;
        best_distance = distance;
        best_similarity = similarity;
      }
    }

    if (best) {
      verdict.carved_file = carved[*best].name;
      verdict.similarity = best_similarity;
      verdict.decodable = carved_info[*best].decodable;
      if (best_distance != kNoDistance) verdict.hamming_distance = best_distance;
      if (best_similarity >= options.similarity_threshold && verdict.decodable) {
        verdict.outcome = CarvingOutcome::kTp;
        claimed[*best] = true;
      }
    }
    if (verdict.outcome == CarvingOutcome::kTp) {
      ++out.counts.tp;
    } else {
      ++out.counts.fn;
    }
    out.verdicts.push_back(std::move(verdict));
  }

  std::vector<std::size_t> leftovers;
  for (std::size_t ci = 0; ci < carved.size(); ++ci) {
    if (!claimed[ci]) leftovers.push_back(ci);
  }
  std::stable_sort(leftovers.begin(), leftovers.end(), [&](std::size_t a, std::size_t b) {
    return carved[a].name < carved[b].name;
  });
  for (std::size_t ci : leftovers) {
    CarvingVerdict v;
    v.carved_file = carved[ci].name;
    v.decodable = carved_info[ci].decodable;
    v.outcome = CarvingOutcome::kFp;
    out.verdicts.push_back(std::move(v));
    ++out.counts.fp;
  }
  out.metrics = ComputeMetrics(out.counts);
  return out;
}

}  // namespace dfbench
