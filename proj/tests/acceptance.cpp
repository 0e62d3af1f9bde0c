// Acceptance suite: one line of output per criterion, nonzero exit if any
// criterion fails. Statistical thresholds are frozen here on purpose; the
// fixtures are deterministic, so every run sees the same numbers.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "bench.hpp"
#include "engine.hpp"
#include "keying.hpp"
#include "synth.hpp"

using namespace cve;

namespace {

int g_failures = 0;

void run(int n, const char* title,
         const std::function<std::pair<bool, std::string>()>& fn) {
  bool ok = false;
  std::string detail;
  try {
    auto r = fn();
    ok = r.first;
    detail = std::move(r.second);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] %2d. %s: %s\n", ok ? " ok " : "FAIL", n, title,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Deterministic keys for the statistical fixtures. Rejection keeps the unit
// draw strictly inside (0, 1).
Key det_key(MapKind kind, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&] {
    for (;;) {
      const double u = double(rng() >> 11) * 0x1p-53;
      if (u > 0.0 && u < 1.0) return u;
    }
  };
  Key k;
  k.kind = kind;
  if (kind == MapKind::Plcm) {
    k.plcm_a = {unit(), 0.5 * unit()};
    k.plcm_b = {unit(), 0.5 * unit()};
  } else {
    k.lasm = {unit(), unit(), 0.44 + unit() * (0.93 - 0.44)};
  }
  return k;
}

double corr_of(const Frame& f, int ch, Direction d, uint64_t seed) {
  const auto p = sample_adjacent_pairs(f, ch, d, 20000, seed);
  return correlation(p.x, p.y).value_or(0.0);
}

double pixel_diff_percent(const Frame& a, const Frame& b) {
  size_t diff = 0;
  const size_t n = size_t(a.side) * a.side;
  for (size_t i = 0; i < n; ++i)
    if (a.pixels[3 * i] != b.pixels[3 * i] ||
        a.pixels[3 * i + 1] != b.pixels[3 * i + 1] ||
        a.pixels[3 * i + 2] != b.pixels[3 * i + 2])
      ++diff;
  return 100.0 * double(diff) / double(n);
}

}  // namespace

int main() {
  const Frame plain = make_natural_frame(512, 2026);

  run(1, "round-trip identity", [&] {
    const uint32_t sides[] = {8, 16, 64, 512};
    const uint32_t workers[] = {1, 2, 4, 8};
    const uint32_t rounds[] = {1, 5};
    uint64_t combo = 0, frames = 0;
    for (uint32_t w : sides)
      for (uint32_t n : workers)
        for (uint32_t r : rounds) {
          const Key key =
              det_key(combo % 2 ? MapKind::Plcm : MapKind::Lasm, 1000 + combo);
          Engine enc(key, n, r), dec(key, n, r);
          for (uint32_t t = 0; t < 20; ++t) {
            const Frame f = make_noise_frame(w, 9000 + combo * 20 + t);
            const Frame c = enc.encrypt(f);
            if (dec.decrypt(c) != f)
              return std::pair{false, fmt("mismatch at side=%u workers=%u "
                                          "rounds=%u frame=%u",
                                          w, n, r, t)};
            ++frames;
          }
          ++combo;
        }
    return std::pair{true, fmt("%llu frames over %llu (side, workers, "
                               "rounds) combinations",
                               (unsigned long long)frames,
                               (unsigned long long)combo)};
  });

  run(2, "confusion is a bijection", [&] {
    std::mt19937_64 rng(2002);
    uint64_t maps = 0;
    for (uint32_t w : {4u, 8u, 16u, 32u})
      for (int t = 0; t < 100; ++t) {
        uint32_t seed = uint32_t(rng());
        if (seed == 0) seed = 1;
        const auto shift = build_shift_table(w, seed);
        std::vector<uint32_t> hits(size_t(w) * w, 0);
        for (uint32_t a = 0; a < w; ++a)
          for (uint32_t o = 0; o < w; ++o) {
            const uint32_t alpha = (a + o) % w;
            const uint32_t beta = euclid_mod(int64_t(o) + shift[alpha], w);
            ++hits[size_t(alpha) * w + beta];
          }
        for (size_t i = 0; i < hits.size(); ++i)
          if (hits[i] != 1)
            return std::pair{false, fmt("cell %zu hit %u times (side=%u "
                                        "seed=%u)",
                                        i, hits[i], w, seed)};
        ++maps;
      }
    return std::pair{true,
                     fmt("%llu maps, every cell hit exactly once",
                         (unsigned long long)maps)};
  });

  run(3, "diffusion byte inverse", [&] {
    for (int v = 0; v < 256; ++v)
      for (int b = 0; b < 256; ++b)
        for (int prev = 0; prev < 256; ++prev) {
          const uint8_t c =
              diffuse_byte(uint8_t(v), uint8_t(b), uint8_t(prev));
          if (inverse_diffuse_byte(c, uint8_t(b), uint8_t(prev)) != v)
            return std::pair{false,
                             fmt("triple (%d, %d, %d) not inverted", v, b,
                                 prev)};
        }
    return std::pair{true, std::string("all 16777216 (value, stream, prev) "
                                       "triples invert exactly")};
  });

  run(4, "parallel matches serial", [&] {
    for (uint32_t n : {2u, 4u, 8u})
      for (MapKind kind : {MapKind::Plcm, MapKind::Lasm}) {
        const Key key = det_key(kind, 40 + n);
        Engine par(key, n, 5, true), ser(key, n, 5, false);
        if (par.encrypt(plain) != ser.encrypt(plain))
          return std::pair{false, fmt("ciphertext differs at workers=%u "
                                      "kind=%d",
                                      n, int(kind))};
      }
    return std::pair{true, std::string("bit-identical ciphertext for "
                                       "workers in {2,4,8}, both map kinds")};
  });

  run(5, "cipher histogram uniformity", [&] {
    int fails = 0;
    double worst_chi = 0, worst_var = 0;
    for (uint64_t s = 1; s <= 10; ++s) {
      const Key key = det_key(s % 2 ? MapKind::Plcm : MapKind::Lasm, 300 + s);
      Engine e(key, 8, 5, false);
      const Frame c = e.encrypt(plain);
      for (int ch = 0; ch < 3; ++ch) {
        const auto h = channel_histogram(c, ch);
        const double chi = chi_square(h);
        const double var = histogram_variance(h);
        worst_chi = std::max(worst_chi, chi);
        worst_var = std::max(worst_var, var);
        if (chi >= kChiSquare05Df255 || var >= 1500.0) ++fails;
      }
    }
    return std::pair{fails <= 1,
                     fmt("%d of 30 channels failed (allowed 1); worst "
                         "chi2=%.2f (limit %.2f), worst variance=%.1f "
                         "(limit 1500)",
                         fails, worst_chi, kChiSquare05Df255, worst_var)};
  });

  // One committed cipher image serves criteria 6 and 7.
  const Key stat_key = det_key(MapKind::Plcm, 11);
  Frame stat_cipher;
  {
    Engine e(stat_key, 8, 5, false);
    stat_cipher = e.encrypt(plain);
  }

  run(6, "adjacent-pixel correlation", [&] {
    double worst = 0;
    for (int ch = 0; ch < 3; ++ch) {
      worst = std::max(worst, std::fabs(corr_of(stat_cipher, ch,
                                                Direction::Horizontal, 1)));
      worst = std::max(worst, std::fabs(corr_of(stat_cipher, ch,
                                                Direction::Vertical, 2)));
      worst = std::max(worst, std::fabs(corr_of(stat_cipher, ch,
                                                Direction::Diagonal, 3)));
    }
    return std::pair{worst < 0.02,
                     fmt("worst |corr| over 3 channels x 3 directions = "
                         "%.5f (limit 0.02), 20000 samples each",
                         worst)};
  });

  run(7, "cipher entropy", [&] {
    double min_ent = 8.0, min_loc = 8.0, max_loc = 0.0;
    for (int ch = 0; ch < 3; ++ch) {
      min_ent = std::min(min_ent, entropy(channel_histogram(stat_cipher, ch)));
      const double loc = local_entropy(stat_cipher, ch, 30, 44, 77);
      min_loc = std::min(min_loc, loc);
      max_loc = std::max(max_loc, loc);
    }
    const bool ok = min_ent > 7.999 && min_loc >= 7.89 && max_loc <= 7.92;
    return std::pair{ok, fmt("global entropy min %.5f (limit 7.999); local "
                             "entropy (30 blocks of 44x44) in [%.5f, %.5f] "
                             "(band [7.89, 7.92])",
                             min_ent, min_loc, max_loc)};
  });

  run(8, "differential NPCR/UACI", [&] {
    const Key key = det_key(MapKind::Plcm, 12);
    std::mt19937_64 rng(4242);
    double npcr_sum[3] = {0, 0, 0}, uaci_sum[3] = {0, 0, 0};
    for (int t = 0; t < 20; ++t) {
      Frame mod = plain;
      const uint32_t r = uint32_t(rng() % 512), c = uint32_t(rng() % 512);
      const int ch = int(rng() % 3);
      mod.px(r, c)[ch] = uint8_t(mod.px(r, c)[ch] + 1);
      Engine e1(key, 8, 5, false), e2(key, 8, 5, false);
      const Frame c1 = e1.encrypt(plain), c2 = e2.encrypt(mod);
      for (int k = 0; k < 3; ++k) {
        const auto d = npcr_uaci(c1, c2, k);
        npcr_sum[k] += d.npcr;
        uaci_sum[k] += d.uaci;
      }
    }
    bool ok = true;
    double worst_npcr = 100.0, lo_uaci = 100.0, hi_uaci = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double npcr = npcr_sum[k] / 20, uaci = uaci_sum[k] / 20;
      worst_npcr = std::min(worst_npcr, npcr);
      lo_uaci = std::min(lo_uaci, uaci);
      hi_uaci = std::max(hi_uaci, uaci);
      if (npcr < 99.5893 - 0.05) ok = false;
      if (uaci < 33.3730 - 0.10 || uaci > 33.5541 + 0.10) ok = false;
    }
    return std::pair{ok, fmt("20 one-pixel trials: mean NPCR min %.4f "
                             "(limit 99.5393), mean UACI in [%.4f, %.4f] "
                             "(band [33.2730, 33.6541])",
                             worst_npcr, lo_uaci, hi_uaci)};
  });

  run(9, "key sensitivity", [&] {
    double worst = 0;
    auto probe = [&](const Key& key, const Key& bad) {
      Engine e(key, 8, 5, false), d(bad, 8, 5, false);
      const Frame rec = d.decrypt(e.encrypt(plain));
      for (int ch = 0; ch < 3; ++ch)
        worst = std::max(
            worst, std::fabs(position_correlation(plain, rec, ch).value_or(0)));
    };
    const Key pk = det_key(MapKind::Plcm, 13);
    for (int p = 0; p < 4; ++p) {
      Key bad = pk;
      double* f[4] = {&bad.plcm_a.x0, &bad.plcm_a.p, &bad.plcm_b.x0,
                      &bad.plcm_b.p};
      *f[p] += 1e-9;
      probe(pk, bad);
    }
    const Key lk = det_key(MapKind::Lasm, 14);
    for (int p = 0; p < 3; ++p) {
      Key bad = lk;
      double* f[3] = {&bad.lasm.x0, &bad.lasm.y0, &bad.lasm.mu};
      *f[p] += 1e-9;
      probe(lk, bad);
    }
    return std::pair{worst < 0.02,
                     fmt("7 single-parameter perturbations of 1e-9: worst "
                         "per-channel |corr| with plaintext = %.5f (limit "
                         "0.02)",
                         worst)};
  });

  run(10, "noise and crop robustness", [&] {
    const Key key = det_key(MapKind::Plcm, 11);

    // 1% salt-and-pepper on the ciphertext at 5 rounds.
    double noise_min_corr = 1.0;
    {
      Engine e(key, 8, 5, false);
      Frame noisy = e.encrypt(plain);
      add_salt_pepper(noisy, 0.01, 99);
      Engine d(key, 8, 5, false);
      const Frame rec = d.decrypt(noisy);
      for (int ch = 0; ch < 3; ++ch)
        noise_min_corr =
            std::min(noise_min_corr,
                     position_correlation(plain, rec, ch).value_or(0));
    }

    // 25% block loss. Inverse diffusion widens the damaged area every
    // round, so the bound is asserted at 1 round; the 5-round figure is
    // reported for context.
    auto loss_at = [&](uint32_t rounds) {
      Engine e(key, 8, rounds, false);
      Frame lost = e.encrypt(plain);
      const CropBlock block{0, 0, 256, 0x00};
      crop_fill(lost, {&block, 1});
      Engine d(key, 8, rounds, false);
      return pixel_diff_percent(plain, d.decrypt(lost));
    };
    const double diff1 = loss_at(1), diff5 = loss_at(5);

    const bool ok = noise_min_corr > 0.5 && diff1 <= 60.0;
    return std::pair{ok, fmt("1%% noise at 5 rounds: min corr %.4f (limit "
                             "0.5); 256x256 blank at 1 round: %.2f%% pixels "
                             "differ (limit 60%%; 5 rounds spreads to "
                             "%.2f%%)",
                             noise_min_corr, diff1, diff5)};
  });

  run(11, "multi-core scaling", [&] {
    const uint32_t cores = std::thread::hardware_concurrency();
    if (cores < 4)
      return std::pair{true, fmt("skipped: host reports %u hardware threads "
                                 "(needs 4)",
                                 cores)};
    const Key key = det_key(MapKind::Plcm, 31);
    const auto one = bench_video(key, 512, 1, 5, 30, 20, true);
    const auto many = bench_video(key, 512, cores, 5, 30, 20, true);
    std::vector<uint32_t> ws;
    for (uint32_t n = 1; n <= cores; n *= 2) ws.push_back(n);
    const auto gen = bench_bytegen(key, ws, 4000000);
    bool monotone = true;
    for (size_t i = 1; i < gen.size(); ++i)
      if (gen[i].mbps < gen[i - 1].mbps) monotone = false;
    const bool ok =
        many.total_mean_ms <= 0.6 * one.total_mean_ms && monotone;
    return std::pair{ok, fmt("mean frame %.2f ms at n=1 vs %.2f ms at n=%u "
                             "(needs <= 0.6x); bytegen monotone: %s",
                             one.total_mean_ms, many.total_mean_ms, cores,
                             monotone ? "yes" : "no")};
  });

  run(12, "round sweep plateau", [&] {
    const Key key = det_key(MapKind::Plcm, 21);
    const auto rows = sweep_rounds(key, plain, 1, 10, 930);
    bool ok = true;
    double worst_gap = 0, worst_conf = 0;
    for (int ch = 0; ch < 3; ++ch) {
      worst_gap =
          std::max(worst_gap, std::fabs(rows[5].npcr[ch] - rows[10].npcr[ch]));
      worst_conf = std::max(worst_conf, std::fabs(rows[5].conf_corr[ch]));
    }
    if (worst_gap >= 0.1 || worst_conf >= 0.05) ok = false;
    return std::pair{ok, fmt("NPCR round 5 vs 10 gap %.4f (limit 0.1); "
                             "round-5 scramble corr %.4f (limit 0.05); "
                             "round-5 UACI %.4f/%.4f/%.4f",
                             worst_gap, worst_conf, rows[5].uaci[0],
                             rows[5].uaci[1], rows[5].uaci[2])};
  });

  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 12 criteria passed\n");
  return 0;
}
