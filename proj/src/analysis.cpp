#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_set>

#include "errors.hpp"

namespace cve {

namespace {

void check_channel(int channel) {
  if (channel < 0 || channel > 2) {
    fail(Errc::invalid_argument, "channel must be 0, 1 or 2");
  }
}

void check_same_shape(const Frame& a, const Frame& b) {
  if (a.side != b.side) {
    fail(Errc::invalid_argument, "frames have different sides");
  }
}

double block_entropy(const Frame& frame, int channel, uint32_t x, uint32_t y,
                     uint32_t block_side) {
  Histogram h;
  for (uint32_t r = 0; r < block_side; ++r) {
    for (uint32_t c = 0; c < block_side; ++c) {
      ++h.counts[frame.px(y + r, x + c)[channel]];
    }
  }
  h.total = uint64_t(block_side) * block_side;
  return entropy(h);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string format_opt(const std::optional<double>& v) {
  return v ? format_double(*v) : "undefined";
}

}  // namespace

Histogram channel_histogram(const Frame& frame, int channel) {
  check_channel(channel);
  Histogram h;
  const size_t count = size_t(frame.side) * frame.side;
  const uint8_t* p = frame.pixels.data() + channel;
  for (size_t i = 0; i < count; ++i, p += 3) ++h.counts[*p];
  h.total = count;
  return h;
}

double histogram_variance(const Histogram& h) {
  double acc = 0;
  for (int i = 0; i < 256; ++i) {
    for (int j = 0; j < 256; ++j) {
      const double d = double(h.counts[size_t(i)]) - double(h.counts[size_t(j)]);
      acc += 0.5 * d * d;
    }
  }
  return acc / (256.0 * 256.0);
}

double chi_square(const Histogram& h) {
  if (h.total == 0) fail(Errc::invalid_argument, "empty histogram");
  const double expected = double(h.total) / 256.0;
  double acc = 0;
  for (const auto count : h.counts) {
    const double d = double(count) - expected;
    acc += d * d / expected;
  }
  return acc;
}

double entropy(const Histogram& h) {
  if (h.total == 0) fail(Errc::invalid_argument, "empty histogram");
  double acc = 0;
  for (const auto count : h.counts) {
    if (count == 0) continue;
    const double p = double(count) / double(h.total);
    acc -= p * std::log2(p);
  }
  return acc;
}

PairSample sample_adjacent_pairs(const Frame& frame, int channel, Direction d,
                                 uint32_t count, uint64_t seed) {
  check_channel(channel);
  const uint32_t w = frame.side;
  const uint32_t rows = (d == Direction::Horizontal) ? w : w - 1;
  const uint32_t cols = (d == Direction::Vertical) ? w : w - 1;
  const uint64_t available = uint64_t(rows) * cols;
  if (count == 0 || count > available) {
    fail(Errc::invalid_argument, "pair sample count exceeds available positions");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint64_t> dist(0, available - 1);
  std::unordered_set<uint64_t> chosen;
  chosen.reserve(count * 2);
  PairSample out;
  out.x.reserve(count);
  out.y.reserve(count);
  const uint32_t dr = (d == Direction::Horizontal) ? 0 : 1;
  const uint32_t dc = (d == Direction::Vertical) ? 0 : 1;
  while (out.x.size() < count) {
    const uint64_t idx = dist(rng);
    if (!chosen.insert(idx).second) continue;
    const uint32_t r = uint32_t(idx / cols);
    const uint32_t c = uint32_t(idx % cols);
    out.x.push_back(frame.px(r, c)[channel]);
    out.y.push_back(frame.px(r + dr, c + dc)[channel]);
  }
  return out;
}

std::optional<double> correlation(std::span<const uint8_t> x,
                                  std::span<const uint8_t> y) {
  if (x.size() != y.size() || x.empty()) {
    fail(Errc::invalid_argument, "correlation needs two equal nonempty series");
  }
  const double n = double(x.size());
  double ex = 0, ey = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    ex += x[i];
    ey += y[i];
  }
  ex /= n;
  ey /= n;
  double cov = 0, dx = 0, dy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double a = double(x[i]) - ex;
    const double b = double(y[i]) - ey;
    cov += a * b;
    dx += a * a;
    dy += b * b;
  }
  if (dx == 0.0 || dy == 0.0) return std::nullopt;
  return (cov / n) / (std::sqrt(dx / n) * std::sqrt(dy / n));
}

std::optional<double> position_correlation(const Frame& a, const Frame& b,
                                           int channel) {
  check_channel(channel);
  check_same_shape(a, b);
  const size_t count = size_t(a.side) * a.side;
  std::vector<uint8_t> xs(count), ys(count);
  const uint8_t* pa = a.pixels.data() + channel;
  const uint8_t* pb = b.pixels.data() + channel;
  for (size_t i = 0; i < count; ++i, pa += 3, pb += 3) {
    xs[i] = *pa;
    ys[i] = *pb;
  }
  return correlation(xs, ys);
}

double local_entropy(const Frame& frame, int channel, uint32_t blocks,
                     uint32_t block_side, uint64_t seed) {
  check_channel(channel);
  if (blocks == 0) fail(Errc::invalid_argument, "need at least one block");
  if (block_side == 0 || block_side > frame.side) {
    fail(Errc::invalid_argument, "block side exceeds the frame");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint32_t> dist(0, frame.side - block_side);
  struct Rect {
    uint32_t x, y;
  };
  std::vector<Rect> accepted;
  accepted.reserve(blocks);
  uint64_t attempts = 0;
  const uint64_t attempt_cap = uint64_t(blocks) * 100000;
  while (accepted.size() < blocks) {
    if (++attempts > attempt_cap) {
      fail(Errc::invalid_argument,
           "frame too small for the requested non-overlapping blocks");
    }
    const Rect cand{dist(rng), dist(rng)};
    bool overlaps = false;
    for (const auto& r : accepted) {
      if (cand.x < r.x + block_side && r.x < cand.x + block_side &&
          cand.y < r.y + block_side && r.y < cand.y + block_side) {
        overlaps = true;
        break;
      }
    }
    if (!overlaps) accepted.push_back(cand);
  }
  double acc = 0;
  for (const auto& r : accepted) {
    acc += block_entropy(frame, channel, r.x, r.y, block_side);
  }
  return acc / double(blocks);
}

DiffStats npcr_uaci(const Frame& a, const Frame& b, int channel) {
  check_channel(channel);
  check_same_shape(a, b);
  const size_t count = size_t(a.side) * a.side;
  uint64_t differing = 0;
  uint64_t abs_sum = 0;
  const uint8_t* pa = a.pixels.data() + channel;
  const uint8_t* pb = b.pixels.data() + channel;
  for (size_t i = 0; i < count; ++i, pa += 3, pb += 3) {
    const int d = int(*pa) - int(*pb);
    differing += d != 0;
    abs_sum += uint64_t(d < 0 ? -d : d);
  }
  DiffStats s;
  s.npcr = 100.0 * double(differing) / double(count);
  s.uaci = 100.0 * double(abs_sum) / (255.0 * double(count));
  return s;
}

void add_salt_pepper(Frame& frame, double rate, uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    fail(Errc::invalid_argument, "noise rate must be in [0,1]");
  }
  if (frame.side == 0) fail(Errc::invalid_argument, "empty frame");
  const uint64_t positions = uint64_t(frame.side) * frame.side;
  const uint64_t hits = uint64_t(std::llround(rate * double(positions)));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint64_t> dist(0, positions - 1);
  std::unordered_set<uint64_t> chosen;
  chosen.reserve(size_t(hits) * 2);
  while (chosen.size() < hits) {
    const uint64_t idx = dist(rng);
    if (!chosen.insert(idx).second) continue;
    const uint8_t v = (rng() & 1) ? 0xFF : 0x00;
    uint8_t* p = frame.pixels.data() + idx * 3;
    p[0] = v;
    p[1] = v;
    p[2] = v;
  }
}

void crop_fill(Frame& frame, std::span<const CropBlock> blocks) {
  for (const auto& b : blocks) {
    if (b.side == 0 || b.x + b.side > frame.side || b.y + b.side > frame.side) {
      fail(Errc::invalid_argument, "crop block outside the frame");
    }
    if (b.fill != 0x00 && b.fill != 0xFF) {
      fail(Errc::invalid_argument, "crop fill must be 0x00 or 0xFF");
    }
    for (uint32_t r = 0; r < b.side; ++r) {
      uint8_t* p = frame.px(b.y + r, b.x);
      for (uint32_t c = 0; c < b.side * 3; ++c) p[c] = b.fill;
    }
  }
}

namespace {

struct ChannelStats {
  double variance, chi2, ent;
  std::optional<double> local_ent;
  std::optional<double> corr_h, corr_v, corr_d;
  std::optional<DiffStats> diff;
};

// Metrics that need more pixels than the frame has degrade to nullopt, so
// reports work on any frame size.
ChannelStats channel_stats(const Frame& frame, const Frame* second,
                           int channel, uint32_t samples, uint64_t seed) {
  ChannelStats s{};
  const auto hist = channel_histogram(frame, channel);
  s.variance = histogram_variance(hist);
  s.chi2 = chi_square(hist);
  s.ent = entropy(hist);
  if (frame.side >= kLocalEntropyBlockSide) {
    try {
      s.local_ent = local_entropy(frame, channel, kLocalEntropyBlocks,
                                  kLocalEntropyBlockSide, seed);
    } catch (const Error&) {
      // Disjoint blocks did not fit.
    }
  }
  const auto corr_of = [&](Direction d, uint64_t salt) -> std::optional<double> {
    if (frame.side < 2) return std::nullopt;
    const uint64_t available =
        d == Direction::Diagonal
            ? uint64_t(frame.side - 1) * (frame.side - 1)
            : uint64_t(frame.side) * (frame.side - 1);
    const auto count = uint32_t(std::min<uint64_t>(samples, available));
    const auto pairs =
        sample_adjacent_pairs(frame, channel, d, count, seed + salt);
    return correlation(pairs.x, pairs.y);
  };
  s.corr_h = corr_of(Direction::Horizontal, 0x68);
  s.corr_v = corr_of(Direction::Vertical, 0x76);
  s.corr_d = corr_of(Direction::Diagonal, 0x64);
  if (second) s.diff = npcr_uaci(frame, *second, channel);
  return s;
}

}  // namespace

std::string analysis_report(const Frame& frame, const Frame* second,
                            uint32_t samples, uint64_t seed) {
  static const char* names[3] = {"R", "G", "B"};
  std::string out;
  out += "side=" + std::to_string(frame.side) + "\n";
  out += "orig_width=" + std::to_string(frame.orig_width) + "\n";
  out += "orig_height=" + std::to_string(frame.orig_height) + "\n";
  out += "samples=" + std::to_string(samples) + "\n";
  out += "seed=" + std::to_string(seed) + "\n";
  for (int ch = 0; ch < 3; ++ch) {
    const auto s = channel_stats(frame, second, ch, samples, seed);
    const std::string p = std::string("channel.") + names[ch] + ".";
    out += p + "variance=" + format_double(s.variance) + "\n";
    out += p + "chi_square=" + format_double(s.chi2) + "\n";
    out += p + "chi_square_uniform=" +
           (s.chi2 < kChiSquare05Df255 ? "yes" : "no") + "\n";
    out += p + "entropy=" + format_double(s.ent) + "\n";
    out += p + "local_entropy=" + format_opt(s.local_ent) + "\n";
    out += p + "corr_horizontal=" + format_opt(s.corr_h) + "\n";
    out += p + "corr_vertical=" + format_opt(s.corr_v) + "\n";
    out += p + "corr_diagonal=" + format_opt(s.corr_d) + "\n";
    if (s.diff) {
      out += p + "npcr=" + format_double(s.diff->npcr) + "\n";
      out += p + "uaci=" + format_double(s.diff->uaci) + "\n";
    }
  }
  return out;
}

std::string analysis_csv(const Frame& frame, const Frame* second,
                         uint32_t samples, uint64_t seed) {
  static const char* names[3] = {"R", "G", "B"};
  std::string out =
      "channel,variance,chi_square,entropy,local_entropy,corr_horizontal,"
      "corr_vertical,corr_diagonal";
  if (second) out += ",npcr,uaci";
  out += "\n";
  for (int ch = 0; ch < 3; ++ch) {
    const auto s = channel_stats(frame, second, ch, samples, seed);
    out += names[ch];
    out += "," + format_double(s.variance);
    out += "," + format_double(s.chi2);
    out += "," + format_double(s.ent);
    out += "," + format_opt(s.local_ent);
    out += "," + format_opt(s.corr_h);
    out += "," + format_opt(s.corr_v);
    out += "," + format_opt(s.corr_d);
    if (s.diff) {
      out += "," + format_double(s.diff->npcr);
      out += "," + format_double(s.diff->uaci);
    }
    out += "\n";
  }
  return out;
}

}  // namespace cve
