#include "engine.hpp"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <numbers>
#include <thread>

#include "errors.hpp"

namespace cve {

uint32_t euclid_mod(int64_t v, uint32_t m) {
  const int64_t r = v % int64_t(m);
  return uint32_t(r < 0 ? r + int64_t(m) : r);
}

int64_t confusion_shift(uint32_t alpha, uint32_t side, uint32_t seed) {
  const double angle = 2.0 * std::numbers::pi * double(alpha) / double(side);
  return int64_t(std::floor(double(seed) * std::sin(angle)));
}

std::vector<int64_t> build_shift_table(uint32_t side, uint32_t seed) {
  std::vector<int64_t> shift(side);
  for (uint32_t alpha = 0; alpha < side; ++alpha) {
    shift[alpha] = confusion_shift(alpha, side, seed);
  }
  return shift;
}

void confuse_rows(const Frame& snapshot, Frame& out, uint32_t row_begin,
                  uint32_t row_end, std::span<const int64_t> shift) {
  const uint32_t w = snapshot.side;
  for (uint32_t a = row_begin; a < row_end; ++a) {
    const uint8_t* src = snapshot.px(a, 0);
    for (uint32_t o = 0; o < w; ++o) {
      uint32_t alpha = a + o;
      if (alpha >= w) alpha -= w;
      const uint32_t beta = euclid_mod(int64_t(o) + shift[alpha], w);
      uint8_t* dst = out.px(alpha, beta);
      dst[0] = src[3 * o];
      dst[1] = src[3 * o + 1];
      dst[2] = src[3 * o + 2];
    }
  }
}

void inverse_confuse_rows(const Frame& snapshot, Frame& out,
                          uint32_t alpha_begin, uint32_t alpha_end,
                          std::span<const int64_t> shift) {
  const uint32_t w = snapshot.side;
  for (uint32_t alpha = alpha_begin; alpha < alpha_end; ++alpha) {
    const uint8_t* src = snapshot.px(alpha, 0);
    for (uint32_t beta = 0; beta < w; ++beta) {
      const uint32_t o = euclid_mod(int64_t(beta) - shift[alpha], w);
      const uint32_t a = euclid_mod(int64_t(alpha) - int64_t(o), w);
      uint8_t* dst = out.px(a, o);
      dst[0] = src[3 * beta];
      dst[1] = src[3 * beta + 1];
      dst[2] = src[3 * beta + 2];
    }
  }
}

void diffuse_region(const uint8_t* plain, uint8_t* cipher, size_t len,
                    std::span<const uint8_t> stream, uint8_t seed_byte) {
  uint8_t prev = seed_byte;
  for (size_t j = 0; j < len; ++j) {
    prev = diffuse_byte(plain[j], stream[j], prev);
    cipher[j] = prev;
  }
}

PendingHead inverse_diffuse_region(const uint8_t* cipher, uint8_t* plain,
                                   size_t base, size_t len,
                                   std::span<const uint8_t> stream) {
  for (size_t j = 1; j < len; ++j) {
    plain[base + j] = inverse_diffuse_byte(cipher[base + j], stream[j],
                                           cipher[base + j - 1]);
  }
  return PendingHead{base, cipher[base], stream[0]};
}

namespace {

// Two-phase barrier pool: run() publishes one task, blocks until every
// worker has executed it once, then returns.
class WorkerPool {
 public:
  explicit WorkerPool(uint32_t n) {
    threads_.reserve(n);
    for (uint32_t i = 0; i < n; ++i) {
      threads_.emplace_back([this, i] { loop(i); });
    }
  }

  ~WorkerPool() {
    {
      std::lock_guard<std::mutex> lock(m_);
      stop_ = true;
      ++generation_;
    }
    cv_start_.notify_all();
    for (auto& t : threads_) t.join();
  }

  void run(const std::function<void(uint32_t)>& task) {
    std::unique_lock<std::mutex> lock(m_);
    task_ = &task;
    pending_ = uint32_t(threads_.size());
    ++generation_;
    cv_start_.notify_all();
    cv_done_.wait(lock, [this] { return pending_ == 0; });
    task_ = nullptr;
  }

 private:
  void loop(uint32_t index) {
    uint64_t seen = 0;
    for (;;) {
      const std::function<void(uint32_t)>* task = nullptr;
      {
        std::unique_lock<std::mutex> lock(m_);
        cv_start_.wait(lock, [&] { return generation_ != seen; });
        seen = generation_;
        if (stop_) return;
        task = task_;
      }
      (*task)(index);
      {
        std::lock_guard<std::mutex> lock(m_);
        if (--pending_ == 0) cv_done_.notify_all();
      }
    }
  }

  std::vector<std::thread> threads_;
  std::mutex m_;
  std::condition_variable cv_start_;
  std::condition_variable cv_done_;
  const std::function<void(uint32_t)>* task_ = nullptr;
  uint64_t generation_ = 0;
  uint32_t pending_ = 0;
  bool stop_ = false;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

struct Engine::Impl {
  Key key;
  uint32_t n;
  uint32_t r;
  bool parallel;
  Coordinator coord;
  WorkerParams params;
  std::vector<Prbg> prbgs;
  std::unique_ptr<WorkerPool> pool;
  std::vector<std::vector<uint8_t>> streams;
  PhaseTimings* timings = nullptr;

  Impl(const Key& k, uint32_t workers, uint32_t rounds, bool par)
      : key(k), n(workers), r(rounds), parallel(par), coord(k) {
    if (workers == 0) fail(Errc::invalid_argument, "workers must be >= 1");
    if (rounds == 0 || rounds > 255) {
      fail(Errc::invalid_argument, "rounds must be in 1..255");
    }
    params = coord.derive_worker_params(n);
    prbgs.reserve(n);
    for (uint32_t i = 0; i < n; ++i) prbgs.push_back(params.make_prbg(i));
    streams.resize(n);
    if (parallel && n > 1) pool = std::make_unique<WorkerPool>(n);
  }

  void run_phase(const std::function<void(uint32_t)>& task) {
    if (pool) {
      pool->run(task);
    } else {
      for (uint32_t i = 0; i < n; ++i) task(i);
    }
  }

  void check_frame(const Frame& in) const {
    if (in.side == 0 || in.byte_count() != in.pixels.size()) {
      fail(Errc::invalid_argument, "frame buffer does not match its side");
    }
    if (in.side % n != 0) {
      fail(Errc::mismatch, "frame side is not divisible by the worker count");
    }
  }

  void draw_streams(uint32_t rounds, size_t region_len) {
    const auto t0 = std::chrono::steady_clock::now();
    run_phase([&](uint32_t i) {
      streams[i].resize(rounds * region_len);
      prbgs[i].fill(streams[i]);
    });
    if (timings) timings->bytegen_ms += ms_since(t0);
  }

  Frame forward(const Frame& in, uint32_t rounds, bool confusion,
                bool diffusion, uint32_t seed,
                const std::function<void(uint32_t, const Frame&)>& per_round) {
    check_frame(in);
    const uint32_t w = in.side;
    const uint32_t rows = w / n;
    const size_t region = size_t(rows) * w * 3;

    if (diffusion) draw_streams(rounds, region);
    std::vector<int64_t> shift;
    if (confusion) shift = build_shift_table(w, seed);

    Frame a = in;
    Frame b = in;  // same metadata; contents overwritten phase by phase

    for (uint32_t k = 0; k < rounds; ++k) {
      if (confusion) {
        const auto t0 = std::chrono::steady_clock::now();
        run_phase([&](uint32_t i) {
          confuse_rows(a, b, i * rows, (i + 1) * rows, shift);
        });
        if (timings) timings->confuse_ms += ms_since(t0);
        std::swap(a, b);
      }
      if (diffusion) {
        // a is this round's pre-diffusion snapshot: plain bytes and the
        // neighbour seed byte both come from it.
        const auto t0 = std::chrono::steady_clock::now();
        run_phase([&](uint32_t i) {
          const size_t base = size_t(i) * region;
          const uint8_t sd = a.pixels[(size_t((i + 1) % n) + 1) * region - 1];
          diffuse_region(a.pixels.data() + base, b.pixels.data() + base,
                         region,
                         std::span(streams[i]).subspan(size_t(k) * region,
                                                       region),
                         sd);
        });
        if (timings) timings->diffuse_ms += ms_since(t0);
        std::swap(a, b);
      }
      if (per_round) per_round(k + 1, a);
    }
    return a;
  }

  Frame inverse(const Frame& in, uint32_t rounds, uint32_t seed) {
    check_frame(in);
    const uint32_t w = in.side;
    const uint32_t rows = w / n;
    const size_t region = size_t(rows) * w * 3;

    draw_streams(rounds, region);
    const auto shift = build_shift_table(w, seed);

    Frame a = in;
    Frame b = in;
    std::vector<PendingHead> heads(n);

    for (uint32_t k = rounds; k-- > 0;) {
      run_phase([&](uint32_t i) {
        heads[i] = inverse_diffuse_region(
            a.pixels.data(), b.pixels.data(), size_t(i) * region, region,
            std::span(streams[i]).subspan(size_t(k) * region, region));
      });
      // Heads resolve against the neighbour's recovered last byte.
      for (uint32_t i = 0; i < n; ++i) {
        const uint8_t sd = b.pixels[(size_t((i + 1) % n) + 1) * region - 1];
        b.pixels[heads[i].index] =
            inverse_diffuse_byte(heads[i].cipher, heads[i].stream, sd);
      }
      std::swap(a, b);
      run_phase([&](uint32_t i) {
        inverse_confuse_rows(a, b, i * rows, (i + 1) * rows, shift);
      });
      std::swap(a, b);
    }
    return a;
  }
};

Engine::Engine(const Key& key, uint32_t workers, uint32_t rounds,
               bool parallel)
    : impl_(std::make_unique<Impl>(key, workers, rounds, parallel)) {}

Engine::~Engine() = default;

Frame Engine::encrypt(const Frame& in) {
  const uint32_t seed = impl_->coord.next_confusion_seed();
  return impl_->forward(in, impl_->r, true, true, seed, nullptr);
}

Frame Engine::decrypt(const Frame& in) {
  const uint32_t seed = impl_->coord.next_confusion_seed();
  return impl_->inverse(in, impl_->r, seed);
}

Frame Engine::transform(
    const Frame& in, uint32_t rounds, bool confusion, bool diffusion,
    const std::function<void(uint32_t, const Frame&)>& per_round) {
  const uint32_t seed = impl_->coord.next_confusion_seed();
  return impl_->forward(in, rounds, confusion, diffusion, seed, per_round);
}

uint32_t Engine::workers() const { return impl_->n; }
uint32_t Engine::rounds() const { return impl_->r; }
uint64_t Engine::seeds_drawn() const { return impl_->coord.seeds_drawn(); }

uint64_t Engine::stream_bytes_drawn() const {
  uint64_t total = 0;
  for (const auto& g : impl_->prbgs) total += g.bytes_emitted();
  return total;
}

void Engine::set_timings(PhaseTimings* sink) { impl_->timings = sink; }

}  // namespace cve
