#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <random>
#include <thread>

#include "analysis.hpp"
#include "engine.hpp"
#include "errors.hpp"
#include "synth.hpp"

namespace cve {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

const char* map_name(MapKind kind) {
  return kind == MapKind::Plcm ? "plcm" : "lasm";
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string num6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

constexpr double kMegabyte = 1024.0 * 1024.0;

struct Stat {
  double sum = 0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  uint64_t n = 0;

  void add(double v) {
    sum += v;
    min = std::min(min, v);
    max = std::max(max, v);
    ++n;
  }
  double mean() const { return n ? sum / double(n) : 0.0; }
};

}  // namespace

std::vector<BytegenResult> bench_bytegen(const Key& key,
                                         std::span<const uint32_t> workers,
                                         uint64_t iterations) {
  if (iterations == 0) fail(Errc::invalid_argument, "need iterations >= 1");
  const uint32_t bytes_per_iter =
      key.kind == MapKind::Plcm ? kBytesPerValue : 2 * kBytesPerValue;
  std::vector<BytegenResult> out;
  for (const uint32_t n : workers) {
    if (n == 0) fail(Errc::invalid_argument, "worker count must be >= 1");
    Coordinator coord(key);
    auto params = coord.derive_worker_params(n);
    std::vector<Prbg> prbgs;
    prbgs.reserve(n);
    for (uint32_t i = 0; i < n; ++i) prbgs.push_back(params.make_prbg(i));

    std::vector<uint64_t> budget(n, (iterations / n) * bytes_per_iter);
    budget[0] += (iterations % n) * bytes_per_iter;

    std::vector<uint8_t> sinks(size_t(n) << 16);
    const auto t0 = Clock::now();
    {
      std::vector<std::thread> threads;
      threads.reserve(n);
      for (uint32_t i = 0; i < n; ++i) {
        threads.emplace_back([&, i] {
          std::span<uint8_t> buf(sinks.data() + (size_t(i) << 16),
                                 size_t(1) << 16);
          uint64_t left = budget[i];
          while (left > 0) {
            const size_t chunk = size_t(std::min<uint64_t>(left, buf.size()));
            prbgs[i].fill(buf.subspan(0, chunk));
            left -= chunk;
          }
        });
      }
      for (auto& t : threads) t.join();
    }
    const double ms = ms_since(t0);

    BytegenResult r;
    r.kind = key.kind;
    r.workers = n;
    r.iterations = iterations;
    r.bytes = iterations * bytes_per_iter;
    r.elapsed_ms = ms;
    r.mbps = double(r.bytes) / kMegabyte / (ms / 1000.0);
    out.push_back(r);
  }
  return out;
}

std::string bytegen_csv(std::span<const BytegenResult> rows) {
  std::string out = "map,workers,iterations,bytes,elapsed_ms,throughput_mbps\n";
  for (const auto& r : rows) {
    out += map_name(r.kind);
    out += "," + std::to_string(r.workers);
    out += "," + std::to_string(r.iterations);
    out += "," + std::to_string(r.bytes);
    out += "," + num(r.elapsed_ms);
    out += "," + num(r.mbps);
    out += "\n";
  }
  return out;
}

PhasesResult bench_phases(const Key& key, uint32_t side, uint32_t workers,
                          uint32_t rounds, uint32_t images, bool parallel) {
  if (images == 0) fail(Errc::invalid_argument, "need images >= 1");
  Engine engine(key, workers, rounds, parallel);
  std::vector<Frame> pool;
  const uint32_t distinct = std::min(images, 16u);
  pool.reserve(distinct);
  for (uint32_t i = 0; i < distinct; ++i) {
    pool.push_back(make_noise_frame(side, 0xB0 + i));
  }

  Stat confuse, diffuse;
  PhaseTimings t;
  engine.set_timings(&t);
  for (uint32_t i = 0; i < images; ++i) {
    const Frame& img = pool[i % distinct];
    t = PhaseTimings{};
    engine.transform(img, rounds, true, false);
    confuse.add(t.confuse_ms);
    t = PhaseTimings{};
    engine.transform(img, rounds, false, true);
    diffuse.add(t.bytegen_ms + t.diffuse_ms);
  }
  engine.set_timings(nullptr);

  PhasesResult r;
  r.kind = key.kind;
  r.side = side;
  r.workers = workers;
  r.rounds = rounds;
  r.images = images;
  r.confuse_mean_ms = confuse.mean();
  r.confuse_min_ms = confuse.min;
  r.confuse_max_ms = confuse.max;
  r.diffuse_mean_ms = diffuse.mean();
  r.diffuse_min_ms = diffuse.min;
  r.diffuse_max_ms = diffuse.max;
  return r;
}

std::string phases_csv(std::span<const PhasesResult> rows) {
  std::string out =
      "map,side,workers,rounds,images,confuse_mean_ms,confuse_min_ms,"
      "confuse_max_ms,diffuse_mean_ms,diffuse_min_ms,diffuse_max_ms\n";
  for (const auto& r : rows) {
    out += map_name(r.kind);
    out += "," + std::to_string(r.side);
    out += "," + std::to_string(r.workers);
    out += "," + std::to_string(r.rounds);
    out += "," + std::to_string(r.images);
    out += "," + num(r.confuse_mean_ms);
    out += "," + num(r.confuse_min_ms);
    out += "," + num(r.confuse_max_ms);
    out += "," + num(r.diffuse_mean_ms);
    out += "," + num(r.diffuse_min_ms);
    out += "," + num(r.diffuse_max_ms);
    out += "\n";
  }
  return out;
}

VideoResult bench_video(const Key& key, uint32_t side, uint32_t workers,
                        uint32_t rounds, uint32_t frames, uint16_t fps,
                        bool parallel) {
  if (frames == 0) fail(Errc::invalid_argument, "need frames >= 1");
  if (fps == 0) fail(Errc::invalid_argument, "need fps >= 1");
  Engine engine(key, workers, rounds, parallel);
  std::vector<Frame> pool;
  const uint32_t distinct = std::min(frames, 32u);
  pool.reserve(distinct);
  for (uint32_t i = 0; i < distinct; ++i) {
    pool.push_back(make_noise_frame(side, 0xF0 + i));
  }

  Stat total;
  double bytegen_sum = 0, confuse_sum = 0, diffuse_sum = 0;
  PhaseTimings t;
  engine.set_timings(&t);
  for (uint32_t i = 0; i < frames; ++i) {
    t = PhaseTimings{};
    const auto t0 = Clock::now();
    Frame c = engine.encrypt(pool[i % distinct]);
    total.add(ms_since(t0));
    bytegen_sum += t.bytegen_ms;
    confuse_sum += t.confuse_ms;
    diffuse_sum += t.diffuse_ms;
    (void)c;
  }
  engine.set_timings(nullptr);

  VideoResult r;
  r.kind = key.kind;
  r.side = side;
  r.workers = workers;
  r.rounds = rounds;
  r.frames = frames;
  r.fps = fps;
  r.bytegen_mean_ms = bytegen_sum / double(frames);
  r.confuse_mean_ms = confuse_sum / double(frames);
  r.diffuse_mean_ms = diffuse_sum / double(frames);
  r.total_mean_ms = total.mean();
  r.total_min_ms = total.min;
  r.total_max_ms = total.max;
  r.mbps = double(side) * side * 3 / kMegabyte / (r.total_mean_ms / 1000.0);
  r.realtime_ok = r.total_mean_ms <= 1000.0 / double(fps);
  return r;
}

std::string video_csv(std::span<const VideoResult> rows) {
  std::string out =
      "map,side,workers,rounds,frames,fps,bytegen_mean_ms,confuse_mean_ms,"
      "diffuse_mean_ms,total_mean_ms,total_min_ms,total_max_ms,"
      "throughput_mbps,realtime_ok\n";
  for (const auto& r : rows) {
    out += map_name(r.kind);
    out += "," + std::to_string(r.side);
    out += "," + std::to_string(r.workers);
    out += "," + std::to_string(r.rounds);
    out += "," + std::to_string(r.frames);
    out += "," + std::to_string(r.fps);
    out += "," + num(r.bytegen_mean_ms);
    out += "," + num(r.confuse_mean_ms);
    out += "," + num(r.diffuse_mean_ms);
    out += "," + num(r.total_mean_ms);
    out += "," + num(r.total_min_ms);
    out += "," + num(r.total_max_ms);
    out += "," + num(r.mbps);
    out += ",";
    out += r.realtime_ok ? "1" : "0";
    out += "\n";
  }
  return out;
}

std::vector<SweepRow> sweep_rounds(const Key& key, const Frame& plain,
                                   uint32_t workers, uint32_t max_rounds,
                                   uint64_t seed) {
  if (max_rounds == 0) fail(Errc::invalid_argument, "need max_rounds >= 1");
  std::mt19937_64 rng(seed);
  Frame modified = plain;
  const uint32_t mr = uint32_t(rng() % plain.side);
  const uint32_t mc = uint32_t(rng() % plain.side);
  const int mch = int(rng() % 3);
  modified.px(mr, mc)[mch] = uint8_t(modified.px(mr, mc)[mch] + 1);

  const auto capture = [&](const Frame& in, bool confusion, bool diffusion) {
    // Fresh engine per run: both plaintexts see identical stream bytes.
    Engine engine(key, workers, max_rounds, false);
    std::vector<Frame> states;
    states.reserve(max_rounds);
    engine.transform(in, max_rounds, confusion, diffusion,
                     [&](uint32_t, const Frame& f) { states.push_back(f); });
    return states;
  };

  const auto base_states = capture(plain, false, true);
  const auto mod_states = capture(modified, false, true);
  const auto conf_states = capture(plain, true, false);

  std::vector<SweepRow> rows;
  rows.reserve(max_rounds + 1);
  for (uint32_t k = 0; k <= max_rounds; ++k) {
    SweepRow row{};
    row.round = k;
    const Frame& a = k == 0 ? plain : base_states[k - 1];
    const Frame& b = k == 0 ? modified : mod_states[k - 1];
    const Frame& s = k == 0 ? plain : conf_states[k - 1];
    for (int ch = 0; ch < 3; ++ch) {
      const auto d = npcr_uaci(a, b, ch);
      row.npcr[ch] = d.npcr;
      row.uaci[ch] = d.uaci;
      row.conf_corr[ch] = position_correlation(plain, s, ch).value_or(0.0);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out =
      "round,npcr_r,npcr_g,npcr_b,uaci_r,uaci_g,uaci_b,conf_corr_r,"
      "conf_corr_g,conf_corr_b\n";
  for (const auto& r : rows) {
    out += std::to_string(r.round);
    for (const double v : r.npcr) out += "," + num6(v);
    for (const double v : r.uaci) out += "," + num6(v);
    for (const double v : r.conf_corr) out += "," + num6(v);
    out += "\n";
  }
  return out;
}

}  // namespace cve
