#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "engine.hpp"
#include "errors.hpp"
#include "keying.hpp"
#include "synth.hpp"

using namespace cve;

namespace {

const std::string kPlcmHex =
    "005f633937dd9abf3f93ba8c762f1bd43fb8560e3cdd9aef3f7c74d008a265d13f";
const std::string kLasmHex =
    "01333333333333d33f666666666666e63f6f8104c58f31ed3f";

// Pixels labelled by their position so moves can be traced.
Frame labelled_frame(uint32_t side) {
  Frame f = Frame::make(side);
  for (uint32_t r = 0; r < side; ++r) {
    for (uint32_t c = 0; c < side; ++c) {
      uint8_t* p = f.px(r, c);
      p[0] = uint8_t(r);
      p[1] = uint8_t(c);
      p[2] = uint8_t(r * 31 + c);
    }
  }
  return f;
}

std::multiset<std::array<uint8_t, 3>> pixel_multiset(const Frame& f) {
  std::multiset<std::array<uint8_t, 3>> out;
  for (uint32_t r = 0; r < f.side; ++r) {
    for (uint32_t c = 0; c < f.side; ++c) {
      const uint8_t* p = f.px(r, c);
      out.insert({p[0], p[1], p[2]});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("euclid_mod is the non-negative remainder") {
  CHECK(euclid_mod(5, 4) == 1);
  CHECK(euclid_mod(-1, 4) == 3);
  CHECK(euclid_mod(-8, 4) == 0);
  CHECK(euclid_mod(0, 7) == 0);
  CHECK(euclid_mod(-15, 7) == 6);
  CHECK(euclid_mod(15, 7) == 1);
}

TEST_CASE("confusion shift table samples the sine wave") {
  const auto shift = build_shift_table(4, 7);
  REQUIRE(shift.size() == 4);
  CHECK(shift[0] == 0);
  CHECK(shift[1] == 7);
  CHECK(shift[2] == 0);
  CHECK(shift[3] == -7);
  CHECK(confusion_shift(1, 4, 7) == 7);
  CHECK(confusion_shift(3, 4, 7) == -7);
}

TEST_CASE("confusion moves whole pixels to the mapped cell") {
  const Frame in = labelled_frame(4);
  Frame out = Frame::make(4);

  // Zero shifts leave beta == o: (a, o) lands at ((a + o) mod w, o).
  const std::vector<int64_t> zero(4, 0);
  confuse_rows(in, out, 0, 4, zero);
  {
    const uint8_t* src = in.px(1, 2);
    const uint8_t* dst = out.px(3, 2);
    CHECK(dst[0] == src[0]);
    CHECK(dst[1] == src[1]);
    CHECK(dst[2] == src[2]);
  }

  const auto shift = build_shift_table(4, 7);
  confuse_rows(in, out, 0, 4, shift);
  {
    // (2,2): alpha = 0, beta = (2 + shift[0]) mod 4 = 2.
    const uint8_t* src = in.px(2, 2);
    const uint8_t* dst = out.px(0, 2);
    CHECK(dst[0] == src[0]);
    CHECK(dst[1] == src[1]);
    CHECK(dst[2] == src[2]);
  }
}

TEST_CASE("confusion is a bijection and inverts exactly") {
  for (const uint32_t side : {4u, 8u, 16u}) {
    for (const uint32_t seed : {1u, 12345u, 0xFFFFFFFFu}) {
      const Frame in = labelled_frame(side);
      const auto shift = build_shift_table(side, seed);
      Frame scrambled = Frame::make(side);
      confuse_rows(in, scrambled, 0, side, shift);
      CAPTURE(side);
      CAPTURE(seed);
      CHECK(pixel_multiset(scrambled) == pixel_multiset(in));

      Frame back = Frame::make(side);
      inverse_confuse_rows(scrambled, back, 0, side, shift);
      CHECK(back.pixels == in.pixels);
    }
  }
}

TEST_CASE("diffuse_byte worked example and exact inverse") {
  CHECK(diffuse_byte(0xF0, 0x10, 0x0F) == 0x1F);
  CHECK(inverse_diffuse_byte(0x1F, 0x10, 0x0F) == 0xF0);
}

TEST_CASE("diffuse_byte inverts over the full byte cube") {
  for (int v = 0; v < 256; ++v) {
    for (int b = 0; b < 256; ++b) {
      for (int prev = 0; prev < 256; ++prev) {
        const uint8_t c = diffuse_byte(uint8_t(v), uint8_t(b), uint8_t(prev));
        if (inverse_diffuse_byte(c, uint8_t(b), uint8_t(prev)) != v) {
          REQUIRE(inverse_diffuse_byte(c, uint8_t(b), uint8_t(prev)) == v);
        }
      }
    }
  }
  CHECK(true);
}

TEST_CASE("diffuse_region chains on the previous cipher byte") {
  // Zero stream, constant plain, zero seed: the chain alternates.
  const std::vector<uint8_t> plain(8, 0x37);
  const std::vector<uint8_t> stream(8, 0x00);
  std::vector<uint8_t> cipher(8);
  diffuse_region(plain.data(), cipher.data(), 8, stream, 0x00);
  for (size_t i = 0; i < 8; ++i) {
    CHECK(cipher[i] == ((i % 2 == 0) ? 0x37 : 0x00));
  }
}

TEST_CASE("inverse_diffuse_region recovers everything past the head") {
  std::mt19937_64 rng(7);
  std::vector<uint8_t> plain(64), stream(64);
  for (auto& b : plain) b = uint8_t(rng());
  for (auto& b : stream) b = uint8_t(rng());
  const uint8_t seed_byte = 0xA7;

  std::vector<uint8_t> cipher(64);
  diffuse_region(plain.data(), cipher.data(), 64, stream, seed_byte);

  std::vector<uint8_t> back(64, 0);
  const PendingHead head =
      inverse_diffuse_region(cipher.data(), back.data(), 0, 64, stream);
  CHECK(head.index == 0);
  CHECK(head.cipher == cipher[0]);
  CHECK(head.stream == stream[0]);
  back[0] = inverse_diffuse_byte(head.cipher, head.stream, seed_byte);
  CHECK(back == plain);
}

TEST_CASE("engine round trips across worker counts and rounds") {
  for (const auto& hex : {kPlcmHex, kLasmHex}) {
    const Key key = parse_key_hex(hex);
    for (const uint32_t workers : {1u, 2u, 4u}) {
      for (const uint32_t rounds : {1u, 3u}) {
        Engine enc(key, workers, rounds);
        Engine dec(key, workers, rounds);
        for (uint64_t s = 0; s < 3; ++s) {
          const Frame plain = make_noise_frame(8, 100 + s);
          const Frame cipher = enc.encrypt(plain);
          CHECK(cipher.pixels != plain.pixels);
          const Frame back = dec.decrypt(cipher);
          CAPTURE(hex.size());
          CAPTURE(workers);
          CAPTURE(rounds);
          CHECK(back == plain);
        }
      }
    }
  }
}

TEST_CASE("worker count changes the ciphertext") {
  const Key key = parse_key_hex(kPlcmHex);
  const Frame plain = make_noise_frame(8, 5);
  Engine two(key, 2, 3);
  Engine four(key, 4, 3);
  CHECK(two.encrypt(plain).pixels != four.encrypt(plain).pixels);
}

TEST_CASE("parallel and serial schedules agree bit for bit") {
  for (const auto& hex : {kPlcmHex, kLasmHex}) {
    const Key key = parse_key_hex(hex);
    const Frame plain = make_noise_frame(16, 9);
    Engine par(key, 4, 5, true);
    Engine ser(key, 4, 5, false);
    const Frame a = par.encrypt(plain);
    const Frame b = ser.encrypt(plain);
    CHECK(a.pixels == b.pixels);
    Engine dec_par(key, 4, 5, true);
    Engine dec_ser(key, 4, 5, false);
    CHECK(dec_par.decrypt(a).pixels == dec_ser.decrypt(b).pixels);
  }
}

TEST_CASE("engine draws one confusion seed per frame") {
  const Key key = parse_key_hex(kPlcmHex);
  Engine e(key, 2, 2);
  CHECK(e.seeds_drawn() == 0);
  const Frame plain = make_noise_frame(8, 1);
  const Frame c1 = e.encrypt(plain);
  CHECK(e.seeds_drawn() == 1);
  const Frame c2 = e.encrypt(plain);
  CHECK(e.seeds_drawn() == 2);
  // Fresh seed per frame: the same plaintext encrypts differently.
  CHECK(c1.pixels != c2.pixels);
  (void)e.transform(plain, 1, true, false);
  CHECK(e.seeds_drawn() == 3);
}

TEST_CASE("engine draws exactly rounds * frame bytes of stream") {
  const Key key = parse_key_hex(kPlcmHex);
  const uint32_t side = 8;
  for (const uint32_t workers : {1u, 2u, 4u}) {
    for (const uint32_t rounds : {1u, 4u}) {
      Engine e(key, workers, rounds);
      (void)e.encrypt(make_noise_frame(side, 3));
      CAPTURE(workers);
      CAPTURE(rounds);
      CHECK(e.stream_bytes_drawn() ==
            uint64_t(rounds) * side * side * 3);
    }
  }
}

TEST_CASE("decrypting with the wrong key does not recover the plaintext") {
  const Frame plain = make_noise_frame(8, 77);
  Engine enc(parse_key_hex(kPlcmHex), 2, 5);
  const Frame cipher = enc.encrypt(plain);

  Key other = parse_key_hex(kPlcmHex);
  other.plcm_a.x0 = 0.123456790;
  Engine dec(other, 2, 5);
  CHECK(dec.decrypt(cipher).pixels != plain.pixels);
}

TEST_CASE("engine validates its inputs") {
  const Key key = parse_key_hex(kPlcmHex);
  CHECK_THROWS_AS(Engine(key, 0, 5), Error);
  CHECK_THROWS_AS(Engine(key, 2, 0), Error);
  CHECK_THROWS_AS(Engine(key, 2, 256), Error);

  Engine e(key, 4, 2);
  CHECK(e.workers() == 4);
  CHECK(e.rounds() == 2);
  // side not divisible by the worker count
  CHECK_THROWS_AS((void)e.encrypt(make_noise_frame(6, 1)), Error);
  // pixel buffer inconsistent with the declared side
  Frame bad = make_noise_frame(8, 1);
  bad.pixels.pop_back();
  CHECK_THROWS_AS((void)e.encrypt(bad), Error);
}

TEST_CASE("confusion-only transform permutes, diffusion-only rewrites") {
  const Key key = parse_key_hex(kPlcmHex);
  const Frame plain = labelled_frame(8);

  Engine conf(key, 2, 1);
  const Frame scrambled = conf.transform(plain, 3, true, false);
  CHECK(scrambled.pixels != plain.pixels);
  CHECK(pixel_multiset(scrambled) == pixel_multiset(plain));

  Engine diff(key, 2, 1);
  const Frame rewritten = diff.transform(plain, 3, false, true);
  CHECK(rewritten.pixels != plain.pixels);
  CHECK(pixel_multiset(rewritten) != pixel_multiset(plain));
}

TEST_CASE("per-round callback sees every round and ends on the result") {
  const Key key = parse_key_hex(kLasmHex);
  Engine e(key, 2, 1);
  const Frame plain = make_noise_frame(8, 13);
  std::vector<uint32_t> rounds_seen;
  Frame last;
  const Frame out = e.transform(plain, 3, true, true,
                                [&](uint32_t k, const Frame& f) {
                                  rounds_seen.push_back(k);
                                  last = f;
                                });
  CHECK(rounds_seen == std::vector<uint32_t>{1, 2, 3});
  CHECK(last == out);
}
