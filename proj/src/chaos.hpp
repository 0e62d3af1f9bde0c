#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace cve {

enum class MapKind : uint8_t { Plcm = 0, Lasm = 1 };

// Iterations discarded after seeding a generator, before any byte is emitted.
inline constexpr int kWarmupSteps = 256;
// Mantissa bytes harvested per map output.
inline constexpr int kBytesPerValue = 6;

// Piecewise linear chaotic map on [0,1], control parameter p in (0,0.5).
double plcm_step(double x, double p);

// Two-dimensional logistic-adjusted sine map. The y update already sees the
// new x.
std::pair<double, double> lasm_step(double x, double y, double mu);

// Chaotic bands of the LASM control parameter.
bool lasm_mu_valid(double mu);

// Low 48 bits of the binary64 fraction field, least significant byte first.
std::array<uint8_t, kBytesPerValue> extract_bytes(double v);

struct PlcmParams {
  double x0;
  double p;
};

struct LasmParams {
  double x0;
  double y0;
  double mu;
};

void validate(const PlcmParams& q);
void validate(const LasmParams& q);

// Byte generator over two independent map lanes. Each iteration steps both
// lanes and XORs their extracted bytes: 6 per iteration for PLCM, 12 for
// LASM (x bytes then y bytes). Output is invariant under chunking.
class Prbg {
 public:
  Prbg(const PlcmParams& lane_a, const PlcmParams& lane_b);
  Prbg(const LasmParams& lane_a, const LasmParams& lane_b);

  void fill(std::span<uint8_t> out);
  std::vector<uint8_t> take(size_t count);

  MapKind kind() const { return kind_; }
  uint64_t bytes_emitted() const { return emitted_; }

 private:
  struct Lane {
    double x = 0;
    double y = 0;
    double p = 0;
    double mu = 0;
  };

  void step_lane(Lane& lane);
  void refill();

  MapKind kind_;
  Lane a_;
  Lane b_;
  std::array<uint8_t, 2 * kBytesPerValue> buf_{};
  size_t buf_len_ = 0;
  size_t buf_pos_ = 0;
  uint64_t emitted_ = 0;
};

}  // namespace cve
