#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "frame.hpp"
#include "keying.hpp"

namespace cve {

// Defaults shared with the command line.
inline constexpr uint64_t kDefaultBytegenIterations = 50000000;
inline constexpr uint32_t kDefaultPhasesSide = 960;
inline constexpr uint32_t kDefaultPhasesImages = 100;
inline constexpr uint32_t kDefaultVideoFrames = 600;
inline constexpr uint16_t kDefaultVideoFps = 20;
inline constexpr uint32_t kTable2VideoFrames = 300;
inline constexpr uint16_t kTable2VideoFps = 24;
inline constexpr uint32_t kDefaultVideoSides[] = {96,  192, 288, 384,
                                                  480, 576, 672, 768};

struct BytegenResult {
  MapKind kind;
  uint32_t workers;
  uint64_t iterations;
  uint64_t bytes;
  double elapsed_ms;
  double mbps;
};

// Concurrent generation, the derivation and warm-up done outside the timed
// window. iterations are map iterations, split across the workers.
std::vector<BytegenResult> bench_bytegen(const Key& key,
                                         std::span<const uint32_t> workers,
                                         uint64_t iterations);
std::string bytegen_csv(std::span<const BytegenResult> rows);

struct PhasesResult {
  MapKind kind;
  uint32_t side, workers, rounds, images;
  double confuse_mean_ms, confuse_min_ms, confuse_max_ms;
  double diffuse_mean_ms, diffuse_min_ms, diffuse_max_ms;  // includes bytegen
};

PhasesResult bench_phases(const Key& key, uint32_t side, uint32_t workers,
                          uint32_t rounds, uint32_t images, bool parallel);
std::string phases_csv(std::span<const PhasesResult> rows);

struct VideoResult {
  MapKind kind;
  uint32_t side, workers, rounds, frames;
  uint16_t fps;
  double bytegen_mean_ms, confuse_mean_ms, diffuse_mean_ms;
  double total_mean_ms, total_min_ms, total_max_ms;
  double mbps;
  bool realtime_ok;  // total_mean_ms <= 1000 / fps
};

VideoResult bench_video(const Key& key, uint32_t side, uint32_t workers,
                        uint32_t rounds, uint32_t frames, uint16_t fps,
                        bool parallel);
std::string video_csv(std::span<const VideoResult> rows);

struct SweepRow {
  uint32_t round;
  double npcr[3];
  double uaci[3];
  double conf_corr[3];  // plain vs scrambled, same positions
};

// Diffusion-only rounds under a one-byte plaintext change, and confusion-only
// rounds against the plain image. Row 0 is the unprocessed pair.
std::vector<SweepRow> sweep_rounds(const Key& key, const Frame& plain,
                                   uint32_t workers, uint32_t max_rounds,
                                   uint64_t seed);
std::string sweep_csv(std::span<const SweepRow> rows);

}  // namespace cve
