// Command-line front end over the C API in cve.h.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cve.h"

namespace {

int report(cve_status status) {
  if (status == CVE_OK) return 0;
  std::fprintf(stderr, "error: %s", cve_status_message(status));
  const char* detail = cve_last_error();
  if (detail != nullptr && detail[0] != '\0') {
    std::fprintf(stderr, " (%s)", detail);
  }
  std::fputc('\n', stderr);
  return 1;
}

int emit_text(char* text, const std::string& out_path) {
  int rc = 0;
  if (out_path.empty()) {
    std::fputs(text, stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
      rc = 1;
    }
  }
  cve_string_free(text);
  return rc;
}

cve_map_kind parse_map(const std::string& s) {
  return s == "lasm" ? CVE_MAP_LASM : CVE_MAP_PLCM;
}

struct KeyArg {
  std::string hex;
  std::string file;

  void attach(CLI::App* cmd) {
    auto* k = cmd->add_option("--key", hex, "hex key string");
    cmd->add_option("--key-file", file, "file whose first line is the hex key")
        ->excludes(k);
  }

  bool resolve(std::string& out) const {
    if (!hex.empty()) {
      out = hex;
      return true;
    }
    if (file.empty()) {
      std::fprintf(stderr, "error: need --key or --key-file\n");
      return false;
    }
    std::ifstream in(file);
    if (!in || !std::getline(in, out)) {
      std::fprintf(stderr, "error: cannot read key from %s\n", file.c_str());
      return false;
    }
    while (!out.empty() &&
           (out.back() == '\r' || out.back() == ' ' || out.back() == '\t')) {
      out.pop_back();
    }
    if (out.empty()) {
      std::fprintf(stderr, "error: empty key file %s\n", file.c_str());
      return false;
    }
    return true;
  }

  // nullptr when absent; used where the API generates a fresh key itself.
  bool resolve_optional(std::string& out, bool& present) const {
    present = !hex.empty() || !file.empty();
    return !present || resolve(out);
  }
};

bool parse_dims(const std::string& s, uint32_t& w, uint32_t& h) {
  if (std::sscanf(s.c_str(), "%ux%u", &w, &h) != 2 || w == 0 || h == 0) {
    std::fprintf(stderr, "error: expected WIDTHxHEIGHT, got %s\n", s.c_str());
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chaotic video encryption tool"};
  app.require_subcommand(1);
  int rc = 0;

  // keygen
  std::string kg_map = "plcm";
  std::string kg_out;
  {
    auto* cmd = app.add_subcommand("keygen", "generate a fresh key");
    cmd->add_option("--map", kg_map, "chaotic map: plcm or lasm")
        ->check(CLI::IsMember({"plcm", "lasm"}));
    cmd->add_option("--out", kg_out, "write the key line here instead of stdout");
    cmd->callback([&] {
      char buf[80];
      const cve_status s = cve_key_generate(parse_map(kg_map), buf, sizeof buf);
      if (s != CVE_OK) {
        rc = report(s);
        return;
      }
      const std::string text = std::string(buf) + "\n";
      if (kg_out.empty()) {
        std::fputs(text.c_str(), stdout);
      } else {
        std::ofstream out(kg_out, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) {
          std::fprintf(stderr, "error: cannot write %s\n", kg_out.c_str());
          rc = 1;
        }
      }
    });
  }

  // encrypt
  KeyArg enc_key;
  std::string enc_in, enc_out, enc_raw;
  uint32_t enc_workers = 0, enc_rounds = 0, enc_fps = 0;
  bool enc_serial = false;
  {
    auto* cmd = app.add_subcommand(
        "encrypt", "P6 image, directory of P6 frames, or raw RGB24 -> CVE1");
    enc_key.attach(cmd);
    cmd->add_option("--in", enc_in, "input path")->required();
    cmd->add_option("--out", enc_out, "output container")->required();
    cmd->add_option("--workers,--threads", enc_workers, "worker count (default 8)");
    cmd->add_option("--rounds", enc_rounds, "round count (default 5)");
    cmd->add_option("--fps", enc_fps, "frame rate recorded in the container")
        ->check(CLI::Range(uint32_t(0), uint32_t(0xFFFF)));
    cmd->add_flag("--serial", enc_serial, "single-lane schedule");
    cmd->add_option("--raw-size", enc_raw,
                    "treat input as raw RGB24 of WIDTHxHEIGHT");
    cmd->callback([&] {
      std::string key;
      if (!enc_key.resolve(key)) {
        rc = 1;
        return;
      }
      cve_io_options io{};
      io.workers = enc_workers;
      io.rounds = enc_rounds;
      io.serial = enc_serial ? 1 : 0;
      io.fps = uint16_t(enc_fps);
      if (!enc_raw.empty() &&
          !parse_dims(enc_raw, io.raw_width, io.raw_height)) {
        rc = 1;
        return;
      }
      rc = report(
          cve_encrypt_file(key.c_str(), &io, enc_in.c_str(), enc_out.c_str()));
    });
  }

  // decrypt
  KeyArg dec_key;
  std::string dec_in, dec_out, dec_format = "auto";
  uint32_t dec_workers = 0, dec_rounds = 0;
  bool dec_serial = false;
  {
    auto* cmd = app.add_subcommand("decrypt", "CVE1 -> P6 or raw RGB24");
    dec_key.attach(cmd);
    cmd->add_option("--in", dec_in, "input container")->required();
    cmd->add_option("--out", dec_out, "output path")->required();
    cmd->add_option("--workers,--threads", dec_workers,
                    "must match the container when given");
    cmd->add_option("--rounds", dec_rounds,
                    "must match the container when given");
    cmd->add_option("--format", dec_format, "auto, ppm, or raw")
        ->check(CLI::IsMember({"auto", "ppm", "raw"}));
    cmd->add_flag("--serial", dec_serial, "single-lane schedule");
    cmd->callback([&] {
      std::string key;
      if (!dec_key.resolve(key)) {
        rc = 1;
        return;
      }
      cve_io_options io{};
      io.workers = dec_workers;
      io.rounds = dec_rounds;
      io.serial = dec_serial ? 1 : 0;
      const cve_out_format fmt = dec_format == "ppm"   ? CVE_OUT_PPM
                                 : dec_format == "raw" ? CVE_OUT_RAW
                                                       : CVE_OUT_AUTO;
      rc = report(cve_decrypt_file(key.c_str(), &io, fmt, dec_in.c_str(),
                                   dec_out.c_str()));
    });
  }

  // analyze
  std::string an_in, an_second, an_out;
  uint32_t an_frame = 0, an_second_frame = 0, an_samples = 0;
  uint64_t an_seed = 0;
  bool an_csv = false;
  {
    auto* cmd = app.add_subcommand(
        "analyze", "histogram, entropy, and correlation statistics");
    cmd->add_option("--in", an_in, "P6 image or CVE1 container")->required();
    cmd->add_option("--second", an_second,
                    "same-size image; adds NPCR/UACI against --in");
    cmd->add_option("--frame", an_frame, "frame index into a container");
    cmd->add_option("--second-frame", an_second_frame,
                    "frame index into --second");
    cmd->add_option("--samples", an_samples,
                    "adjacent pairs per direction (default 20000)");
    cmd->add_option("--seed", an_seed, "sampling seed");
    cmd->add_flag("--csv", an_csv, "CSV instead of key=value lines");
    cmd->add_option("--out", an_out, "write the report here");
    cmd->callback([&] {
      cve_analyze_options opt{};
      opt.input = an_in.c_str();
      opt.second = an_second.empty() ? nullptr : an_second.c_str();
      opt.frame_index = an_frame;
      opt.second_frame_index = an_second_frame;
      opt.samples = an_samples;
      opt.seed = an_seed;
      opt.csv = an_csv ? 1 : 0;
      char* text = nullptr;
      const cve_status s = cve_analyze(&opt, &text);
      rc = s == CVE_OK ? emit_text(text, an_out) : report(s);
    });
  }

  // noise
  std::string no_in, no_out;
  double no_rate = 0.01;
  uint64_t no_seed = 0;
  {
    auto* cmd = app.add_subcommand(
        "noise", "salt-and-pepper noise over a P6 image or every CVE1 frame");
    cmd->add_option("--in", no_in, "input path")->required();
    cmd->add_option("--out", no_out, "output path")->required();
    cmd->add_option("--rate", no_rate, "fraction of pixels hit (default 0.01)");
    cmd->add_option("--seed", no_seed, "noise placement seed");
    cmd->callback([&] {
      rc = report(
          cve_add_noise_file(no_in.c_str(), no_out.c_str(), no_rate, no_seed));
    });
  }

  // crop
  std::string cr_in, cr_out;
  std::vector<std::string> cr_blocks;
  {
    auto* cmd = app.add_subcommand(
        "crop", "blank square blocks in a P6 image or every CVE1 frame");
    cmd->add_option("--in", cr_in, "input path")->required();
    cmd->add_option("--out", cr_out, "output path")->required();
    cmd->add_option("--block", cr_blocks, "X,Y,SIDE[,FILL] with FILL 0 or 255")
        ->required()
        ->take_all();
    cmd->callback([&] {
      std::vector<cve_crop_block> blocks;
      for (const std::string& s : cr_blocks) {
        uint32_t x = 0, y = 0, side = 0, fill = 0;
        const int got = std::sscanf(s.c_str(), "%u,%u,%u,%u", &x, &y, &side, &fill);
        if (got < 3 || fill > 255) {
          std::fprintf(stderr, "error: bad block spec %s\n", s.c_str());
          rc = 1;
          return;
        }
        blocks.push_back({x, y, side, uint8_t(fill)});
      }
      rc = report(cve_crop_file(cr_in.c_str(), cr_out.c_str(), blocks.data(),
                                blocks.size()));
    });
  }

  // nist-export
  KeyArg ni_key;
  std::string ni_out;
  uint32_t ni_workers = 0;
  uint64_t ni_bytes = 0;
  {
    auto* cmd = app.add_subcommand(
        "nist-export", "raw generator bytes for external statistical suites");
    ni_key.attach(cmd);
    cmd->add_option("--workers,--threads", ni_workers, "worker count (default 8)");
    cmd->add_option("--bytes", ni_bytes, "byte count")->required();
    cmd->add_option("--out", ni_out, "output file")->required();
    cmd->callback([&] {
      std::string key;
      if (!ni_key.resolve(key)) {
        rc = 1;
        return;
      }
      rc = report(
          cve_nist_export(key.c_str(), ni_workers, ni_bytes, ni_out.c_str()));
    });
  }

  // bench
  auto* bench = app.add_subcommand("bench", "throughput measurements");
  bench->require_subcommand(1);

  KeyArg bg_key;
  std::string bg_map = "plcm", bg_out;
  std::vector<uint32_t> bg_workers;
  uint64_t bg_iterations = 0;
  {
    auto* cmd = bench->add_subcommand("bytegen", "raw byte generation rate");
    bg_key.attach(cmd);
    cmd->add_option("--map", bg_map, "map for a fresh key (default plcm)")
        ->check(CLI::IsMember({"plcm", "lasm"}));
    cmd->add_option("--workers-list", bg_workers,
                    "worker counts (default 1,2,4,8)")
        ->delimiter(',');
    cmd->add_option("--iterations", bg_iterations,
                    "total map iterations (default 50000000)");
    cmd->add_option("--out", bg_out, "write the CSV here");
    cmd->callback([&] {
      std::string key;
      bool have_key = false;
      if (!bg_key.resolve_optional(key, have_key)) {
        rc = 1;
        return;
      }
      cve_bench_bytegen_options opt{};
      opt.key_hex = have_key ? key.c_str() : nullptr;
      opt.map_kind = parse_map(bg_map);
      opt.worker_counts = bg_workers.empty() ? nullptr : bg_workers.data();
      opt.worker_count_len = bg_workers.size();
      opt.iterations = bg_iterations;
      char* text = nullptr;
      const cve_status s = cve_bench_bytegen(&opt, &text);
      rc = s == CVE_OK ? emit_text(text, bg_out) : report(s);
    });
  }

  KeyArg ph_key;
  std::string ph_map = "plcm", ph_out;
  uint32_t ph_side = 0, ph_workers = 0, ph_rounds = 0, ph_images = 0;
  bool ph_serial = false;
  {
    auto* cmd =
        bench->add_subcommand("phases", "per-phase cost over still images");
    ph_key.attach(cmd);
    cmd->add_option("--map", ph_map, "map for a fresh key (default plcm)")
        ->check(CLI::IsMember({"plcm", "lasm"}));
    cmd->add_option("--side", ph_side, "square side (default 960)");
    cmd->add_option("--workers,--threads", ph_workers, "worker count (default 8)");
    cmd->add_option("--rounds", ph_rounds, "round count (default 5)");
    cmd->add_option("--images", ph_images, "image count (default 100)");
    cmd->add_flag("--serial", ph_serial, "single-lane schedule");
    cmd->add_option("--out", ph_out, "write the CSV here");
    cmd->callback([&] {
      std::string key;
      bool have_key = false;
      if (!ph_key.resolve_optional(key, have_key)) {
        rc = 1;
        return;
      }
      cve_bench_phases_options opt{};
      opt.key_hex = have_key ? key.c_str() : nullptr;
      opt.map_kind = parse_map(ph_map);
      opt.side = ph_side;
      opt.workers = ph_workers;
      opt.rounds = ph_rounds;
      opt.images = ph_images;
      opt.serial = ph_serial ? 1 : 0;
      char* text = nullptr;
      const cve_status s = cve_bench_phases(&opt, &text);
      rc = s == CVE_OK ? emit_text(text, ph_out) : report(s);
    });
  }

  KeyArg vi_key;
  std::string vi_map = "plcm", vi_preset = "std", vi_out;
  std::vector<uint32_t> vi_sides;
  uint32_t vi_workers = 0, vi_rounds = 0, vi_frames = 0, vi_fps = 0;
  bool vi_serial = false;
  {
    auto* cmd = bench->add_subcommand(
        "video", "frame pipeline rate against a real-time budget");
    vi_key.attach(cmd);
    cmd->add_option("--map", vi_map, "map for a fresh key (default plcm)")
        ->check(CLI::IsMember({"plcm", "lasm"}));
    cmd->add_option("--sides", vi_sides,
                    "square sides (default 96,192,...,768)")
        ->delimiter(',');
    cmd->add_option("--workers,--threads", vi_workers, "worker count (default 8)");
    cmd->add_option("--rounds", vi_rounds, "round count (default 5)");
    cmd->add_option("--frames", vi_frames, "frames per side");
    cmd->add_option("--fps", vi_fps, "real-time budget in frames per second")
        ->check(CLI::Range(uint32_t(0), uint32_t(0xFFFF)));
    cmd->add_option("--preset", vi_preset,
                    "std = 600 frames at 20 fps, table2 = 300 at 24")
        ->check(CLI::IsMember({"std", "table2"}));
    cmd->add_flag("--serial", vi_serial, "single-lane schedule");
    cmd->add_option("--out", vi_out, "write the CSV here");
    cmd->callback([&] {
      std::string key;
      bool have_key = false;
      if (!vi_key.resolve_optional(key, have_key)) {
        rc = 1;
        return;
      }
      uint32_t frames = vi_frames;
      uint32_t fps = vi_fps;
      if (vi_preset == "table2") {
        if (frames == 0) frames = 300;
        if (fps == 0) fps = 24;
      }
      cve_bench_video_options opt{};
      opt.key_hex = have_key ? key.c_str() : nullptr;
      opt.map_kind = parse_map(vi_map);
      opt.sides = vi_sides.empty() ? nullptr : vi_sides.data();
      opt.side_len = vi_sides.size();
      opt.workers = vi_workers;
      opt.rounds = vi_rounds;
      opt.frames = frames;
      opt.fps = uint16_t(fps);
      opt.serial = vi_serial ? 1 : 0;
      char* text = nullptr;
      const cve_status s = cve_bench_video(&opt, &text);
      rc = s == CVE_OK ? emit_text(text, vi_out) : report(s);
    });
  }

  // sweep
  KeyArg sw_key;
  std::string sw_map = "plcm", sw_in, sw_out;
  uint32_t sw_side = 0, sw_workers = 0, sw_rounds = 0;
  uint64_t sw_seed = 0;
  {
    auto* cmd = app.add_subcommand(
        "sweep", "per-round diffusion and confusion statistics");
    sw_key.attach(cmd);
    cmd->add_option("--map", sw_map, "map for a fresh key (default plcm)")
        ->check(CLI::IsMember({"plcm", "lasm"}));
    cmd->add_option("--in", sw_in, "P6 plain image (default synthetic)");
    cmd->add_option("--side", sw_side, "synthetic image side (default 512)");
    cmd->add_option("--workers,--threads", sw_workers, "worker count (default 1)");
    cmd->add_option("--max-rounds", sw_rounds, "round ceiling (default 10)");
    cmd->add_option("--seed", sw_seed, "synthesis and pixel-change seed");
    cmd->add_option("--out", sw_out, "write the CSV here");
    cmd->callback([&] {
      std::string key;
      bool have_key = false;
      if (!sw_key.resolve_optional(key, have_key)) {
        rc = 1;
        return;
      }
      cve_sweep_options opt{};
      opt.key_hex = have_key ? key.c_str() : nullptr;
      opt.map_kind = parse_map(sw_map);
      opt.input = sw_in.empty() ? nullptr : sw_in.c_str();
      opt.synth_side = sw_side;
      opt.workers = sw_workers;
      opt.max_rounds = sw_rounds;
      opt.seed = sw_seed;
      char* text = nullptr;
      const cve_status s = cve_sweep_rounds(&opt, &text);
      rc = s == CVE_OK ? emit_text(text, sw_out) : report(s);
    });
  }

  CLI11_PARSE(app, argc, argv);
  return rc;
}
