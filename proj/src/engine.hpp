#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "frame.hpp"
#include "keying.hpp"

namespace cve {

uint32_t euclid_mod(int64_t v, uint32_t m);

// Column displacement of destination row alpha under confusion seed s.
int64_t confusion_shift(uint32_t alpha, uint32_t side, uint32_t seed);

// shift[alpha] for every row; one evaluation per row per frame.
std::vector<int64_t> build_shift_table(uint32_t side, uint32_t seed);

// Moves whole pixels: source (a, o) lands at alpha = (a + o) mod side,
// beta = (o + shift[alpha]) mod side. A bijection of the pixel grid.
void confuse_rows(const Frame& snapshot, Frame& out, uint32_t row_begin,
                  uint32_t row_end, std::span<const int64_t> shift);

// Exact inverse, partitioned over destination rows alpha.
void inverse_confuse_rows(const Frame& snapshot, Frame& out,
                          uint32_t alpha_begin, uint32_t alpha_end,
                          std::span<const int64_t> shift);

inline uint8_t diffuse_byte(uint8_t v, uint8_t b, uint8_t prev) {
  return uint8_t(b ^ ((v + b) & 0xFF) ^ prev);
}

inline uint8_t inverse_diffuse_byte(uint8_t c, uint8_t b, uint8_t prev) {
  return uint8_t(((b ^ c ^ prev) - b) & 0xFF);
}

// Chains the interleaved R,G,B bytes of one worker region. seed_byte seeds
// the first byte; every later byte chains on the previous cipher byte.
void diffuse_region(const uint8_t* plain, uint8_t* cipher, size_t len,
                    std::span<const uint8_t> stream, uint8_t seed_byte);

// First byte of a region cannot be recovered until the neighbour region's
// last plain byte is known; it is reported back for a second pass.
struct PendingHead {
  size_t index = 0;   // absolute byte index of the region head
  uint8_t cipher = 0; // cipher byte at the head
  uint8_t stream = 0; // stream byte for the head
};

PendingHead inverse_diffuse_region(const uint8_t* cipher, uint8_t* plain,
                                   size_t base, size_t len,
                                   std::span<const uint8_t> stream);

struct PhaseTimings {
  double bytegen_ms = 0;
  double confuse_ms = 0;
  double diffuse_ms = 0;
};

// Drives the two-phase rounds over a fixed worker partition. Workers read a
// frozen snapshot each phase and write disjoint cells, so the parallel and
// the serial schedule produce identical bytes.
class Engine {
 public:
  Engine(const Key& key, uint32_t workers, uint32_t rounds,
         bool parallel = true);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  Frame encrypt(const Frame& in);
  Frame decrypt(const Frame& in);

  // Forward rounds with selectable phases; draws one confusion seed like
  // encrypt() does. per_round, when set, sees the frame after each round.
  Frame transform(const Frame& in, uint32_t rounds, bool confusion,
                  bool diffusion,
                  const std::function<void(uint32_t, const Frame&)>&
                      per_round = nullptr);

  uint32_t workers() const;
  uint32_t rounds() const;
  uint64_t seeds_drawn() const;
  uint64_t stream_bytes_drawn() const;

  // Optional per-phase wall-clock accumulation.
  void set_timings(PhaseTimings* sink);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cve
