#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "errors.hpp"

namespace cve {

Frame make_noise_frame(uint32_t side, uint64_t seed) {
  if (side == 0) fail(Errc::invalid_argument, "frame side must be >= 1");
  Frame f = Frame::make(side);
  std::mt19937_64 rng(seed);
  size_t i = 0;
  const size_t n = f.pixels.size();
  while (i + 8 <= n) {
    uint64_t v = rng();
    for (int k = 0; k < 8; ++k) f.pixels[i++] = uint8_t(v >> (8 * k));
  }
  uint64_t v = rng();
  for (int k = 0; i < n; ++k) f.pixels[i++] = uint8_t(v >> (8 * k));
  return f;
}

Frame make_natural_frame(uint32_t side, uint64_t seed) {
  if (side == 0) fail(Errc::invalid_argument, "frame side must be >= 1");
  Frame f = Frame::make(side);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tau = 2.0 * std::numbers::pi;

  struct Field {
    double fr, fc, fd, pr, pc, pd, a1, a2;
  };
  Field fields[3];
  for (auto& fl : fields) {
    fl.fr = 1.0 + 3.0 * unit(rng);
    fl.fc = 1.0 + 3.0 * unit(rng);
    fl.fd = 0.5 + 2.0 * unit(rng);
    fl.pr = tau * unit(rng);
    fl.pc = tau * unit(rng);
    fl.pd = tau * unit(rng);
    fl.a1 = 50.0 + 25.0 * unit(rng);
    fl.a2 = 30.0 + 20.0 * unit(rng);
  }

  for (uint32_t r = 0; r < side; ++r) {
    for (uint32_t c = 0; c < side; ++c) {
      uint8_t* p = f.px(r, c);
      for (int ch = 0; ch < 3; ++ch) {
        const auto& fl = fields[ch];
        const double u = double(r) / double(side);
        const double v = double(c) / double(side);
        double val = 118.0 +
                     fl.a1 * std::sin(tau * fl.fr * u + fl.pr) *
                         std::cos(tau * fl.fc * v + fl.pc) +
                     fl.a2 * std::sin(tau * fl.fd * (u + v) + fl.pd);
        val = std::clamp(val, 0.0, 255.0);
        p[ch] = uint8_t(std::lround(val));
      }
    }
  }

  // A few flat ellipses on top give the histogram photographic spikes.
  const int patches = 4;
  for (int i = 0; i < patches; ++i) {
    const double cx = double(side) * unit(rng);
    const double cy = double(side) * unit(rng);
    const double rx = double(side) * (0.05 + 0.10 * unit(rng));
    const double ry = double(side) * (0.05 + 0.10 * unit(rng));
    uint8_t color[3] = {uint8_t(40 + 180 * unit(rng)),
                        uint8_t(40 + 180 * unit(rng)),
                        uint8_t(40 + 180 * unit(rng))};
    const uint32_t r0 = uint32_t(std::max(0.0, cy - ry));
    const uint32_t r1 = uint32_t(std::min(double(side) - 1, cy + ry));
    for (uint32_t r = r0; r <= r1; ++r) {
      for (uint32_t c = 0; c < side; ++c) {
        const double dx = (double(c) - cx) / rx;
        const double dy = (double(r) - cy) / ry;
        if (dx * dx + dy * dy <= 1.0) {
          uint8_t* p = f.px(r, c);
          p[0] = color[0];
          p[1] = color[1];
          p[2] = color[2];
        }
      }
    }
  }
  return f;
}

}  // namespace cve
