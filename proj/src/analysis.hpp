#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frame.hpp"

namespace cve {

struct Histogram {
  std::array<uint64_t, 256> counts{};
  uint64_t total = 0;
};

Histogram channel_histogram(const Frame& frame, int channel);

// Mean half squared difference over all ordered bin pairs.
double histogram_variance(const Histogram& h);

// Chi-square statistic against the uniform byte distribution.
double chi_square(const Histogram& h);

// 5% critical value of chi-square with 255 degrees of freedom.
inline constexpr double kChiSquare05Df255 = 293.25;

// Shannon entropy of the byte distribution, bits per byte.
double entropy(const Histogram& h);

enum class Direction { Horizontal, Vertical, Diagonal };

struct PairSample {
  std::vector<uint8_t> x;
  std::vector<uint8_t> y;
};

// Uniform sample, without replacement, of pixel positions that have a
// neighbour in the given direction. Deterministic for a fixed seed.
PairSample sample_adjacent_pairs(const Frame& frame, int channel, Direction d,
                                 uint32_t count, uint64_t seed);

// Pearson coefficient with population moments. Zero variance on either side
// is reported as nullopt instead of a NaN.
std::optional<double> correlation(std::span<const uint8_t> x,
                                  std::span<const uint8_t> y);

// Same-position correlation of one channel across two frames.
std::optional<double> position_correlation(const Frame& a, const Frame& b,
                                           int channel);

inline constexpr uint32_t kLocalEntropyBlocks = 30;
inline constexpr uint32_t kLocalEntropyBlockSide = 44;

// Mean entropy over non-overlapping random square blocks; the block set is
// drawn once per seed and shared across channels.
double local_entropy(const Frame& frame, int channel,
                     uint32_t blocks = kLocalEntropyBlocks,
                     uint32_t block_side = kLocalEntropyBlockSide,
                     uint64_t seed = 1);

struct DiffStats {
  double npcr = 0;  // percent of differing positions
  double uaci = 0;  // percent of mean absolute difference over 255
};

DiffStats npcr_uaci(const Frame& a, const Frame& b, int channel);

// Overwrites round(rate * side^2) distinct pixels with 0x00 or 0xFF across
// all three channels. Deterministic for a fixed seed.
void add_salt_pepper(Frame& frame, double rate, uint64_t seed);

struct CropBlock {
  uint32_t x = 0;
  uint32_t y = 0;
  uint32_t side = 0;
  uint8_t fill = 0;
};

void crop_fill(Frame& frame, std::span<const CropBlock> blocks);

// key=value report / CSV over all channels; second frame adds NPCR/UACI.
std::string analysis_report(const Frame& frame, const Frame* second,
                            uint32_t samples, uint64_t seed);
std::string analysis_csv(const Frame& frame, const Frame* second,
                         uint32_t samples, uint64_t seed);

}  // namespace cve
