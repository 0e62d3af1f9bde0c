#include "frame.hpp"

#include <algorithm>
#include <cstring>

#include "errors.hpp"

namespace cve {

Frame Frame::make(uint32_t side) {
  Frame f;
  f.side = side;
  f.orig_width = side;
  f.orig_height = side;
  f.pixels.assign(f.byte_count(), 0);
  return f;
}

uint32_t padded_side(uint32_t width, uint32_t height, uint32_t workers) {
  if (width == 0 || height == 0) {
    fail(Errc::invalid_argument, "frame dimensions must be >= 1");
  }
  if (workers == 0) fail(Errc::invalid_argument, "worker count must be >= 1");
  const uint32_t longest = std::max(width, height);
  return (longest + workers - 1) / workers * workers;
}

Frame pad_to_square(const uint8_t* rgb, uint32_t width, uint32_t height,
                    uint32_t workers) {
  Frame f;
  f.side = padded_side(width, height, workers);
  f.orig_width = width;
  f.orig_height = height;
  f.pixels.assign(f.byte_count(), 0);
  for (uint32_t r = 0; r < height; ++r) {
    std::memcpy(f.px(r, 0), rgb + size_t(r) * width * 3, size_t(width) * 3);
  }
  return f;
}

std::vector<uint8_t> crop_to_original(const Frame& frame) {
  if (frame.orig_width > frame.side || frame.orig_height > frame.side) {
    fail(Errc::invalid_argument, "original dimensions exceed the frame side");
  }
  std::vector<uint8_t> out(size_t(frame.orig_width) * frame.orig_height * 3);
  for (uint32_t r = 0; r < frame.orig_height; ++r) {
    std::memcpy(out.data() + size_t(r) * frame.orig_width * 3, frame.px(r, 0),
                size_t(frame.orig_width) * 3);
  }
  return out;
}

}  // namespace cve
