#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frame.hpp"

namespace cve {

std::vector<uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const uint8_t> data);

struct PpmImage {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> rgb;
};

// Binary P6 only, maxval 255 only. Comments and arbitrary whitespace in the
// header are accepted.
PpmImage parse_p6(std::span<const uint8_t> data);
std::vector<uint8_t> serialize_p6(uint32_t width, uint32_t height,
                                  std::span<const uint8_t> rgb);

Frame load_ppm(const std::string& path, uint32_t workers);
void store_ppm(const std::string& path, const Frame& frame);

// Plain-side frame feed: a single P6 file, a directory of P6 files (sorted
// by name, equal dimensions), or raw RGB24 of declared dimensions.
class FrameSource {
 public:
  struct RawDesc {
    uint32_t width = 0;
    uint32_t height = 0;
  };

  static FrameSource open(const std::string& path,
                          const std::optional<RawDesc>& raw, uint32_t workers);
  ~FrameSource();
  FrameSource(FrameSource&&) noexcept;
  FrameSource& operator=(FrameSource&&) noexcept;

  uint32_t frame_count() const;
  uint32_t width() const;
  uint32_t height() const;
  // Padded to the worker-aligned square.
  Frame next();

 private:
  FrameSource();
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Plain-side frame writer. PPM mode writes one file, or a directory of
// frame_NNNNNN.ppm once more than one frame arrives; RAW mode appends bare
// RGB24. Frames are cropped to their original dimensions.
class FrameSink {
 public:
  enum class Format { Ppm, Raw };

  static FrameSink open(const std::string& path, Format format,
                        uint32_t frame_count);
  ~FrameSink();
  FrameSink(FrameSink&&) noexcept;
  FrameSink& operator=(FrameSink&&) noexcept;

  void put(const Frame& frame);
  void finish();

 private:
  FrameSink();
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cve
