#include "chaos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>

#include "errors.hpp"

namespace cve {

namespace {

constexpr double kGuardEps = 0x1p-52;

// 0, p, 0.5 and 1 all collapse the PLCM orbit onto the fixed point at 0.
double plcm_guard(double x, double p) {
  if (x == 0.0 || x == p || x == 0.5 || x == 1.0) {
    x += kGuardEps;
    if (x > 1.0) x -= 1.0;
  }
  return x;
}

}  // namespace

double plcm_step(double x, double p) {
  if (x > 0.5) x = 1.0 - x;
  if (x < p) return x / p;
  return (x - p) / (0.5 - p);
}

std::pair<double, double> lasm_step(double x, double y, double mu) {
  const double pi = std::numbers::pi;
  double xn = std::sin(pi * mu * (y + 3.0) * x * (1.0 - x));
  double yn = std::sin(pi * mu * (xn + 3.0) * y * (1.0 - y));
  return {xn, yn};
}

bool lasm_mu_valid(double mu) {
  return (mu >= 0.37 && mu <= 0.38) || (mu >= 0.40 && mu <= 0.42) ||
         (mu >= 0.44 && mu <= 0.93) || mu == 1.0;
}

std::array<uint8_t, kBytesPerValue> extract_bytes(double v) {
  if (!std::isfinite(v)) {
    fail(Errc::invalid_argument, "extract_bytes: value is not finite");
  }
  const uint64_t bits = std::bit_cast<uint64_t>(v);
  std::array<uint8_t, kBytesPerValue> out;
  for (int i = 0; i < kBytesPerValue; ++i) {
    out[size_t(i)] = uint8_t(bits >> (8 * i));
  }
  return out;
}

void validate(const PlcmParams& q) {
  if (!(std::isfinite(q.x0) && q.x0 >= 0.0 && q.x0 <= 1.0)) {
    fail(Errc::bad_key, "plcm x0 outside [0,1]");
  }
  if (!(std::isfinite(q.p) && q.p > 0.0 && q.p < 0.5)) {
    fail(Errc::bad_key, "plcm p outside (0,0.5)");
  }
}

void validate(const LasmParams& q) {
  if (!(std::isfinite(q.x0) && q.x0 >= 0.0 && q.x0 <= 1.0)) {
    fail(Errc::bad_key, "lasm x0 outside [0,1]");
  }
  if (!(std::isfinite(q.y0) && q.y0 >= 0.0 && q.y0 <= 1.0)) {
    fail(Errc::bad_key, "lasm y0 outside [0,1]");
  }
  if (!(std::isfinite(q.mu) && lasm_mu_valid(q.mu))) {
    fail(Errc::bad_key, "lasm mu outside the chaotic bands");
  }
}

Prbg::Prbg(const PlcmParams& lane_a, const PlcmParams& lane_b)
    : kind_(MapKind::Plcm) {
  validate(lane_a);
  validate(lane_b);
  a_.x = plcm_guard(lane_a.x0, lane_a.p);
  a_.p = lane_a.p;
  b_.x = plcm_guard(lane_b.x0, lane_b.p);
  b_.p = lane_b.p;
  for (int i = 0; i < kWarmupSteps; ++i) {
    step_lane(a_);
    step_lane(b_);
  }
}

Prbg::Prbg(const LasmParams& lane_a, const LasmParams& lane_b)
    : kind_(MapKind::Lasm) {
  validate(lane_a);
  validate(lane_b);
  a_.x = lane_a.x0;
  a_.y = lane_a.y0;
  a_.mu = lane_a.mu;
  b_.x = lane_b.x0;
  b_.y = lane_b.y0;
  b_.mu = lane_b.mu;
  for (int i = 0; i < kWarmupSteps; ++i) {
    step_lane(a_);
    step_lane(b_);
  }
}

void Prbg::step_lane(Lane& lane) {
  if (kind_ == MapKind::Plcm) {
    lane.x = plcm_guard(plcm_step(lane.x, lane.p), lane.p);
  } else {
    auto [xn, yn] = lasm_step(lane.x, lane.y, lane.mu);
    lane.x = xn;
    lane.y = yn;
  }
}

void Prbg::refill() {
  step_lane(a_);
  step_lane(b_);
  if (kind_ == MapKind::Plcm) {
    const auto ba = extract_bytes(a_.x);
    const auto bb = extract_bytes(b_.x);
    for (int i = 0; i < kBytesPerValue; ++i) {
      buf_[size_t(i)] = ba[size_t(i)] ^ bb[size_t(i)];
    }
    buf_len_ = kBytesPerValue;
  } else {
    const auto xa = extract_bytes(a_.x);
    const auto ya = extract_bytes(a_.y);
    const auto xb = extract_bytes(b_.x);
    const auto yb = extract_bytes(b_.y);
    for (int i = 0; i < kBytesPerValue; ++i) {
      buf_[size_t(i)] = xa[size_t(i)] ^ xb[size_t(i)];
      buf_[size_t(kBytesPerValue + i)] = ya[size_t(i)] ^ yb[size_t(i)];
    }
    buf_len_ = 2 * kBytesPerValue;
  }
  buf_pos_ = 0;
}

void Prbg::fill(std::span<uint8_t> out) {
  size_t done = 0;
  while (done < out.size()) {
    if (buf_pos_ == buf_len_) refill();
    const size_t take = std::min(out.size() - done, buf_len_ - buf_pos_);
    std::memcpy(out.data() + done, buf_.data() + buf_pos_, take);
    buf_pos_ += take;
    done += take;
  }
  emitted_ += out.size();
}

std::vector<uint8_t> Prbg::take(size_t count) {
  std::vector<uint8_t> out(count);
  fill(out);
  return out;
}

}  // namespace cve
