#include "cve.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "bench.hpp"
#include "container.hpp"
#include "engine.hpp"
#include "errors.hpp"
#include "frame.hpp"
#include "image_io.hpp"
#include "keying.hpp"
#include "synth.hpp"

struct cve_cipher {
  cve::Key key;
  cve::Engine engine;

  cve_cipher(const cve::Key& k, uint32_t workers, uint32_t rounds,
             bool parallel)
      : key(k), engine(k, workers, rounds, parallel) {}
};

namespace {

thread_local std::string g_last_error;

cve_status status_of(cve::Errc code) {
  switch (code) {
    case cve::Errc::invalid_argument:
      return CVE_ERROR_INVALID_ARGUMENT;
    case cve::Errc::bad_key:
      return CVE_ERROR_BAD_KEY;
    case cve::Errc::io:
      return CVE_ERROR_IO;
    case cve::Errc::bad_format:
      return CVE_ERROR_BAD_FORMAT;
    case cve::Errc::mismatch:
      return CVE_ERROR_MISMATCH;
  }
  return CVE_ERROR_INTERNAL;
}

template <typename Fn>
cve_status guarded(Fn&& fn) {
  try {
    fn();
    return CVE_OK;
  } catch (const cve::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CVE_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CVE_ERROR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) cve::fail(cve::Errc::invalid_argument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cve::MapKind to_kind(cve_map_kind kind) {
  require(kind == CVE_MAP_PLCM || kind == CVE_MAP_LASM, "unknown map kind");
  return static_cast<cve::MapKind>(kind);
}

cve::Key key_from(const char* key_hex, cve_map_kind fallback_kind) {
  if (key_hex != nullptr) return cve::parse_key_hex(key_hex);
  return cve::generate_key(to_kind(fallback_kind));
}

bool is_container(const std::vector<uint8_t>& data) {
  return data.size() >= cve::kContainerMagic.size() &&
         std::memcmp(data.data(), cve::kContainerMagic.data(),
                     cve::kContainerMagic.size()) == 0;
}

cve::Frame frame_from_square_p6(std::vector<uint8_t>&& data) {
  cve::PpmImage img = cve::parse_p6(data);
  if (img.width != img.height) {
    cve::fail(cve::Errc::invalid_argument, "this operation needs a square image");
  }
  cve::Frame f;
  f.side = img.width;
  f.orig_width = img.width;
  f.orig_height = img.height;
  f.pixels = std::move(img.rgb);
  return f;
}

cve::Frame load_frame_any(const char* path, uint32_t frame_index) {
  std::vector<uint8_t> data = cve::read_file(path);
  if (is_container(data)) {
    cve::ContainerReader reader(path);
    if (frame_index >= reader.header().frame_count) {
      cve::fail(cve::Errc::invalid_argument, "frame index out of range");
    }
    cve::Frame f;
    for (uint32_t i = 0; i <= frame_index; ++i) f = reader.next();
    return f;
  }
  return frame_from_square_p6(std::move(data));
}

// Applies fn to every frame of a container, or to the single P6 image.
template <typename Fn>
void rewrite_frames(const char* in_path, const char* out_path, Fn&& fn) {
  std::vector<uint8_t> data = cve::read_file(in_path);
  if (is_container(data)) {
    cve::ContainerReader reader(in_path);
    cve::ContainerWriter writer(out_path, reader.header());
    for (uint32_t i = 0; i < reader.header().frame_count; ++i) {
      cve::Frame f = reader.next();
      fn(f, i);
      writer.put(f);
    }
    writer.finish();
    return;
  }
  cve::Frame f = frame_from_square_p6(std::move(data));
  fn(f, 0);
  cve::write_file(out_path, cve::serialize_p6(f.side, f.side, f.pixels));
}

struct IoConfig {
  uint32_t workers = 8;
  uint32_t rounds = 5;
  bool parallel = true;
  uint16_t fps = 20;
  std::optional<cve::FrameSource::RawDesc> raw;
};

IoConfig resolve_io(const cve_io_options* io) {
  IoConfig cfg;
  if (io == nullptr) return cfg;
  if (io->workers != 0) cfg.workers = io->workers;
  if (io->rounds != 0) cfg.rounds = io->rounds;
  cfg.parallel = io->serial == 0;
  if (io->fps != 0) cfg.fps = io->fps;
  if (io->raw_width != 0 || io->raw_height != 0) {
    require(io->raw_width != 0 && io->raw_height != 0,
            "raw input needs both dimensions");
    cfg.raw = cve::FrameSource::RawDesc{io->raw_width, io->raw_height};
  }
  return cfg;
}

cve_status run_frame(cve_cipher* cipher, uint8_t* pixels, uint32_t side,
                     bool decrypt) {
  return guarded([&] {
    require(cipher != nullptr, "cipher is null");
    require(pixels != nullptr, "pixels is null");
    require(side != 0, "side must be >= 1");
    cve::Frame f;
    f.side = side;
    f.orig_width = side;
    f.orig_height = side;
    f.pixels.assign(pixels, pixels + f.byte_count());
    cve::Frame r =
        decrypt ? cipher->engine.decrypt(f) : cipher->engine.encrypt(f);
    std::memcpy(pixels, r.pixels.data(), r.pixels.size());
  });
}

}  // namespace

extern "C" {

const char* cve_version(void) { return "1.0.0"; }

const char* cve_status_message(cve_status status) {
  switch (status) {
    case CVE_OK:
      return "ok";
    case CVE_ERROR_INVALID_ARGUMENT:
      return "invalid argument";
    case CVE_ERROR_BAD_KEY:
      return "malformed or out-of-domain key";
    case CVE_ERROR_IO:
      return "file i/o failure";
    case CVE_ERROR_BAD_FORMAT:
      return "unrecognized or corrupt input format";
    case CVE_ERROR_MISMATCH:
      return "parameters do not match the input";
    case CVE_ERROR_INTERNAL:
      return "internal failure";
  }
  return "unknown status";
}

const char* cve_last_error(void) { return g_last_error.c_str(); }

void cve_string_free(char* s) { std::free(s); }

cve_status cve_key_generate(cve_map_kind kind, char* hex_out, size_t hex_cap) {
  return guarded([&] {
    require(hex_out != nullptr, "hex_out is null");
    const std::string hex = cve::key_to_hex(cve::generate_key(to_kind(kind)));
    require(hex_cap >= hex.size() + 1, "key buffer too small");
    std::memcpy(hex_out, hex.c_str(), hex.size() + 1);
  });
}

cve_status cve_key_validate(const char* key_hex, cve_map_kind* kind_out) {
  return guarded([&] {
    require(key_hex != nullptr, "key_hex is null");
    const cve::Key key = cve::parse_key_hex(key_hex);
    if (kind_out != nullptr) {
      *kind_out = static_cast<cve_map_kind>(key.kind);
    }
  });
}

cve_status cve_cipher_create(const char* key_hex, uint32_t workers,
                             uint32_t rounds, int parallel, cve_cipher** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(key_hex != nullptr, "key_hex is null");
    const cve::Key key = cve::parse_key_hex(key_hex);
    *out = new cve_cipher(key, workers, rounds, parallel != 0);
  });
}

void cve_cipher_destroy(cve_cipher* cipher) { delete cipher; }

cve_status cve_cipher_encrypt_frame(cve_cipher* cipher, uint8_t* pixels,
                                    uint32_t side) {
  return run_frame(cipher, pixels, side, false);
}

cve_status cve_cipher_decrypt_frame(cve_cipher* cipher, uint8_t* pixels,
                                    uint32_t side) {
  return run_frame(cipher, pixels, side, true);
}

cve_status cve_cipher_seeds_drawn(const cve_cipher* cipher, uint64_t* out) {
  return guarded([&] {
    require(cipher != nullptr, "cipher is null");
    require(out != nullptr, "out is null");
    *out = cipher->engine.seeds_drawn();
  });
}

cve_status cve_encrypt_file(const char* key_hex, const cve_io_options* io,
                            const char* in_path, const char* out_path) {
  return guarded([&] {
    require(key_hex != nullptr, "key_hex is null");
    require(in_path != nullptr && out_path != nullptr, "path is null");
    const IoConfig cfg = resolve_io(io);
    require(cfg.workers <= 0xFFFF, "workers must fit the container header");
    require(cfg.rounds >= 1 && cfg.rounds <= 255, "rounds must be in 1..255");
    const cve::Key key = cve::parse_key_hex(key_hex);

    cve::FrameSource src =
        cve::FrameSource::open(in_path, cfg.raw, cfg.workers);
    cve::ContainerHeader h;
    h.map_kind = key.kind;
    h.side = cve::padded_side(src.width(), src.height(), cfg.workers);
    h.orig_width = src.width();
    h.orig_height = src.height();
    h.workers = uint16_t(cfg.workers);
    h.rounds = uint8_t(cfg.rounds);
    h.fps = cfg.fps;
    h.frame_count = src.frame_count();

    cve::Engine engine(key, cfg.workers, cfg.rounds, cfg.parallel);
    cve::ContainerWriter writer(out_path, h);
    for (uint32_t i = 0; i < h.frame_count; ++i) {
      writer.put(engine.encrypt(src.next()));
    }
    writer.finish();
  });
}

cve_status cve_decrypt_file(const char* key_hex, const cve_io_options* io,
                            cve_out_format format, const char* in_path,
                            const char* out_path) {
  return guarded([&] {
    require(key_hex != nullptr, "key_hex is null");
    require(in_path != nullptr && out_path != nullptr, "path is null");
    require(format == CVE_OUT_AUTO || format == CVE_OUT_PPM ||
                format == CVE_OUT_RAW,
            "unknown output format");
    const cve::Key key = cve::parse_key_hex(key_hex);

    cve::ContainerReader reader(in_path);
    const cve::ContainerHeader& h = reader.header();
    if (key.kind != h.map_kind) {
      cve::fail(cve::Errc::mismatch, "key map kind does not match the container");
    }
    uint32_t workers = h.workers;
    uint32_t rounds = h.rounds;
    bool parallel = true;
    if (io != nullptr) {
      if (io->workers != 0 && io->workers != workers) {
        cve::fail(cve::Errc::mismatch, "workers does not match the container");
      }
      if (io->rounds != 0 && io->rounds != rounds) {
        cve::fail(cve::Errc::mismatch, "rounds does not match the container");
      }
      parallel = io->serial == 0;
    }

    const auto sink_format = format == CVE_OUT_RAW
                                 ? cve::FrameSink::Format::Raw
                                 : cve::FrameSink::Format::Ppm;
    cve::Engine engine(key, workers, rounds, parallel);
    cve::FrameSink sink =
        cve::FrameSink::open(out_path, sink_format, h.frame_count);
    while (!reader.done()) {
      sink.put(engine.decrypt(reader.next()));
    }
    sink.finish();
  });
}

cve_status cve_analyze(const cve_analyze_options* options, char** text_out) {
  return guarded([&] {
    require(options != nullptr, "options is null");
    require(text_out != nullptr, "text_out is null");
    require(options->input != nullptr, "input is null");
    const uint32_t samples = options->samples != 0 ? options->samples : 20000;

    const cve::Frame frame = load_frame_any(options->input, options->frame_index);
    std::optional<cve::Frame> second;
    if (options->second != nullptr) {
      second = load_frame_any(options->second, options->second_frame_index);
      if (second->side != frame.side) {
        cve::fail(cve::Errc::mismatch, "images differ in size");
      }
    }

    const cve::Frame* second_ptr = second ? &*second : nullptr;
    const std::string text =
        options->csv != 0
            ? cve::analysis_csv(frame, second_ptr, samples, options->seed)
            : cve::analysis_report(frame, second_ptr, samples, options->seed);
    *text_out = dup_string(text);
  });
}

cve_status cve_add_noise_file(const char* in_path, const char* out_path,
                              double rate, uint64_t seed) {
  return guarded([&] {
    require(in_path != nullptr && out_path != nullptr, "path is null");
    rewrite_frames(in_path, out_path, [&](cve::Frame& f, uint32_t index) {
      cve::add_salt_pepper(f, rate, seed + index);
    });
  });
}

cve_status cve_crop_file(const char* in_path, const char* out_path,
                         const cve_crop_block* blocks, size_t block_count) {
  return guarded([&] {
    require(in_path != nullptr && out_path != nullptr, "path is null");
    require(block_count == 0 || blocks != nullptr, "blocks is null");
    std::vector<cve::CropBlock> list(block_count);
    for (size_t i = 0; i < block_count; ++i) {
      list[i] = {blocks[i].x, blocks[i].y, blocks[i].side, blocks[i].fill};
    }
    rewrite_frames(in_path, out_path, [&](cve::Frame& f, uint32_t) {
      cve::crop_fill(f, list);
    });
  });
}

cve_status cve_nist_export(const char* key_hex, uint32_t workers,
                           uint64_t byte_count, const char* out_path) {
  return guarded([&] {
    require(key_hex != nullptr, "key_hex is null");
    require(out_path != nullptr, "path is null");
    require(byte_count != 0, "byte_count must be >= 1");
    const uint32_t n = workers != 0 ? workers : 8;
    const cve::Key key = cve::parse_key_hex(key_hex);
    cve::Coordinator coord(key);
    const cve::WorkerParams params = coord.derive_worker_params(n);

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) cve::fail(cve::Errc::io, "cannot open output file");
    const uint64_t base = byte_count / n;
    const uint64_t extra = byte_count % n;
    std::vector<uint8_t> buf(size_t(1) << 16);
    for (uint32_t i = 0; i < n; ++i) {
      cve::Prbg prbg = params.make_prbg(i);
      uint64_t left = base + (i < extra ? 1 : 0);
      while (left > 0) {
        const size_t chunk = size_t(std::min<uint64_t>(left, buf.size()));
        prbg.fill(std::span(buf).subspan(0, chunk));
        out.write(reinterpret_cast<const char*>(buf.data()),
                  std::streamsize(chunk));
        left -= chunk;
      }
    }
    out.flush();
    if (!out) cve::fail(cve::Errc::io, "short write");
  });
}

cve_status cve_bench_bytegen(const cve_bench_bytegen_options* options,
                             char** csv_out) {
  return guarded([&] {
    require(options != nullptr, "options is null");
    require(csv_out != nullptr, "csv_out is null");
    const cve::Key key = key_from(options->key_hex, options->map_kind);
    static constexpr uint32_t kDefaultCounts[] = {1, 2, 4, 8};
    std::span<const uint32_t> counts(kDefaultCounts);
    if (options->worker_count_len != 0) {
      require(options->worker_counts != nullptr, "worker_counts is null");
      counts = std::span(options->worker_counts, options->worker_count_len);
    }
    const uint64_t iterations = options->iterations != 0
                                    ? options->iterations
                                    : cve::kDefaultBytegenIterations;
    const auto rows = cve::bench_bytegen(key, counts, iterations);
    *csv_out = dup_string(cve::bytegen_csv(rows));
  });
}

cve_status cve_bench_phases(const cve_bench_phases_options* options,
                            char** csv_out) {
  return guarded([&] {
    require(options != nullptr, "options is null");
    require(csv_out != nullptr, "csv_out is null");
    const cve::Key key = key_from(options->key_hex, options->map_kind);
    const uint32_t side =
        options->side != 0 ? options->side : cve::kDefaultPhasesSide;
    const uint32_t workers = options->workers != 0 ? options->workers : 8;
    const uint32_t rounds = options->rounds != 0 ? options->rounds : 5;
    const uint32_t images =
        options->images != 0 ? options->images : cve::kDefaultPhasesImages;
    const auto row = cve::bench_phases(key, side, workers, rounds, images,
                                       options->serial == 0);
    *csv_out = dup_string(cve::phases_csv(std::span(&row, 1)));
  });
}

cve_status cve_bench_video(const cve_bench_video_options* options,
                           char** csv_out) {
  return guarded([&] {
    require(options != nullptr, "options is null");
    require(csv_out != nullptr, "csv_out is null");
    const cve::Key key = key_from(options->key_hex, options->map_kind);
    std::span<const uint32_t> sides(cve::kDefaultVideoSides);
    if (options->side_len != 0) {
      require(options->sides != nullptr, "sides is null");
      sides = std::span(options->sides, options->side_len);
    }
    const uint32_t workers = options->workers != 0 ? options->workers : 8;
    const uint32_t rounds = options->rounds != 0 ? options->rounds : 5;
    const uint32_t frames =
        options->frames != 0 ? options->frames : cve::kDefaultVideoFrames;
    const uint16_t fps = options->fps != 0 ? options->fps : cve::kDefaultVideoFps;
    std::vector<cve::VideoResult> rows;
    rows.reserve(sides.size());
    for (const uint32_t side : sides) {
      rows.push_back(cve::bench_video(key, side, workers, rounds, frames, fps,
                                      options->serial == 0));
    }
    *csv_out = dup_string(cve::video_csv(rows));
  });
}

cve_status cve_sweep_rounds(const cve_sweep_options* options, char** csv_out) {
  return guarded([&] {
    require(options != nullptr, "options is null");
    require(csv_out != nullptr, "csv_out is null");
    const cve::Key key = key_from(options->key_hex, options->map_kind);
    const uint32_t workers = options->workers != 0 ? options->workers : 1;
    const uint32_t max_rounds =
        options->max_rounds != 0 ? options->max_rounds : 10;
    cve::Frame plain;
    if (options->input != nullptr) {
      plain = cve::load_ppm(options->input, workers);
    } else {
      const uint32_t side =
          options->synth_side != 0 ? options->synth_side : 512;
      if (side % workers != 0) {
        cve::fail(cve::Errc::mismatch,
                  "synthetic side is not divisible by the worker count");
      }
      plain = cve::make_natural_frame(side, options->seed);
    }
    const auto rows =
        cve::sweep_rounds(key, plain, workers, max_rounds, options->seed);
    *csv_out = dup_string(cve::sweep_csv(rows));
  });
}

}  // extern "C"
