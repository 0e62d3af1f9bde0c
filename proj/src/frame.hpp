#pragma once

#include <cstdint>
#include <vector>

namespace cve {

// Square working image, row-major, channel-interleaved RGB24. The original
// dimensions ride along so padding can be cropped off after decryption.
struct Frame {
  uint32_t side = 0;
  uint32_t orig_width = 0;
  uint32_t orig_height = 0;
  std::vector<uint8_t> pixels;

  static Frame make(uint32_t side);

  size_t byte_count() const { return size_t(side) * side * 3; }

  uint8_t* px(uint32_t row, uint32_t col) {
    return pixels.data() + (size_t(row) * side + col) * 3;
  }
  const uint8_t* px(uint32_t row, uint32_t col) const {
    return pixels.data() + (size_t(row) * side + col) * 3;
  }

  bool operator==(const Frame&) const = default;
};

// Smallest multiple of `workers` that covers both dimensions.
uint32_t padded_side(uint32_t width, uint32_t height, uint32_t workers);

// Pads right and bottom with zero bytes.
Frame pad_to_square(const uint8_t* rgb, uint32_t width, uint32_t height,
                    uint32_t workers);

// Drops the padding again.
std::vector<uint8_t> crop_to_original(const Frame& frame);

}  // namespace cve
