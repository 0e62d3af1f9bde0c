#pragma once

#include <cstdint>

#include "frame.hpp"

namespace cve {

// Uniform pseudo-random bytes; stands in for arbitrary plaintext.
Frame make_noise_frame(uint32_t side, uint64_t seed);

// Smooth low-frequency fields plus a few flat patches: high adjacent-pixel
// correlation and a lumpy histogram, like a photograph.
Frame make_natural_frame(uint32_t side, uint64_t seed);

}  // namespace cve
