#include "image_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "errors.hpp"

namespace fs = std::filesystem;

namespace cve {

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open for reading: " + path);
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  if (in.bad()) fail(Errc::io, "read failed: " + path);
  return data;
}

void write_file(const std::string& path, std::span<const uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io, "cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            std::streamsize(data.size()));
  if (!out) fail(Errc::io, "write failed: " + path);
}

namespace {

struct HeaderScanner {
  std::span<const uint8_t> data;
  size_t pos = 0;

  // Whitespace, with '#' comments running to end of line.
  void skip_space() {
    while (pos < data.size()) {
      const uint8_t c = data[pos];
      if (c == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos;
      } else {
        break;
      }
    }
  }

  uint32_t read_number() {
    skip_space();
    if (pos >= data.size() || data[pos] < '0' || data[pos] > '9') {
      fail(Errc::bad_format, "ppm: expected a decimal header field");
    }
    uint64_t v = 0;
    while (pos < data.size() && data[pos] >= '0' && data[pos] <= '9') {
      v = v * 10 + (data[pos] - '0');
      if (v > 0xFFFFFFFFull) fail(Errc::bad_format, "ppm: header field overflow");
      ++pos;
    }
    return uint32_t(v);
  }
};

}  // namespace

PpmImage parse_p6(std::span<const uint8_t> data) {
  if (data.size() < 2 || data[0] != 'P' || data[1] != '6') {
    fail(Errc::bad_format, "ppm: not a P6 file");
  }
  HeaderScanner scan{data, 2};
  PpmImage img;
  img.width = scan.read_number();
  img.height = scan.read_number();
  const uint32_t maxval = scan.read_number();
  if (img.width == 0 || img.height == 0) {
    fail(Errc::bad_format, "ppm: zero dimension");
  }
  if (maxval != 255) fail(Errc::bad_format, "ppm: only maxval 255 is supported");
  if (scan.pos >= data.size()) fail(Errc::bad_format, "ppm: truncated header");
  const uint8_t sep = data[scan.pos];
  if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n') {
    fail(Errc::bad_format, "ppm: missing separator after maxval");
  }
  ++scan.pos;
  const size_t need = size_t(img.width) * img.height * 3;
  if (data.size() - scan.pos < need) fail(Errc::bad_format, "ppm: truncated pixels");
  img.rgb.assign(data.begin() + std::ptrdiff_t(scan.pos),
                 data.begin() + std::ptrdiff_t(scan.pos + need));
  return img;
}

std::vector<uint8_t> serialize_p6(uint32_t width, uint32_t height,
                                  std::span<const uint8_t> rgb) {
  if (rgb.size() != size_t(width) * height * 3) {
    fail(Errc::invalid_argument, "ppm: pixel buffer does not match dimensions");
  }
  char header[64];
  const int len = std::snprintf(header, sizeof header, "P6\n%u %u\n255\n",
                                width, height);
  std::vector<uint8_t> out;
  out.reserve(size_t(len) + rgb.size());
  out.insert(out.end(), header, header + len);
  out.insert(out.end(), rgb.begin(), rgb.end());
  return out;
}

Frame load_ppm(const std::string& path, uint32_t workers) {
  const auto img = parse_p6(read_file(path));
  return pad_to_square(img.rgb.data(), img.width, img.height, workers);
}

void store_ppm(const std::string& path, const Frame& frame) {
  const auto rgb = crop_to_original(frame);
  write_file(path, serialize_p6(frame.orig_width, frame.orig_height, rgb));
}

// --- FrameSource -----------------------------------------------------------

struct FrameSource::Impl {
  enum class Kind { PpmFile, PpmDir, Raw } kind = Kind::PpmFile;
  uint32_t workers = 1;
  uint32_t width = 0;
  uint32_t height = 0;
  uint32_t count = 0;
  uint32_t cursor = 0;
  std::vector<std::string> paths;  // PpmDir
  std::ifstream raw;               // Raw
};

FrameSource::FrameSource() : impl_(std::make_unique<Impl>()) {}
FrameSource::~FrameSource() = default;
FrameSource::FrameSource(FrameSource&&) noexcept = default;
FrameSource& FrameSource::operator=(FrameSource&&) noexcept = default;

FrameSource FrameSource::open(const std::string& path,
                              const std::optional<RawDesc>& raw,
                              uint32_t workers) {
  FrameSource src;
  auto& d = *src.impl_;
  d.workers = workers;

  if (raw) {
    if (raw->width == 0 || raw->height == 0) {
      fail(Errc::invalid_argument, "raw input needs explicit dimensions");
    }
    d.kind = Impl::Kind::Raw;
    d.width = raw->width;
    d.height = raw->height;
    const auto bytes = fs::exists(path) ? fs::file_size(path) : 0;
    const size_t frame_bytes = size_t(d.width) * d.height * 3;
    if (bytes == 0 || bytes % frame_bytes != 0) {
      fail(Errc::bad_format, "raw input is not a whole number of frames");
    }
    d.count = uint32_t(bytes / frame_bytes);
    d.raw.open(path, std::ios::binary);
    if (!d.raw) fail(Errc::io, "cannot open for reading: " + path);
    return src;
  }

  if (fs::is_directory(path)) {
    d.kind = Impl::Kind::PpmDir;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
        d.paths.push_back(entry.path().string());
      }
    }
    if (d.paths.empty()) fail(Errc::io, "no .ppm frames in: " + path);
    std::sort(d.paths.begin(), d.paths.end());
    const auto first = parse_p6(read_file(d.paths[0]));
    d.width = first.width;
    d.height = first.height;
    d.count = uint32_t(d.paths.size());
    return src;
  }

  d.kind = Impl::Kind::PpmFile;
  const auto img = parse_p6(read_file(path));
  d.width = img.width;
  d.height = img.height;
  d.count = 1;
  d.paths.push_back(path);
  return src;
}

uint32_t FrameSource::frame_count() const { return impl_->count; }
uint32_t FrameSource::width() const { return impl_->width; }
uint32_t FrameSource::height() const { return impl_->height; }

Frame FrameSource::next() {
  auto& d = *impl_;
  if (d.cursor >= d.count) fail(Errc::invalid_argument, "frame source drained");
  if (d.kind == Impl::Kind::Raw) {
    std::vector<uint8_t> rgb(size_t(d.width) * d.height * 3);
    d.raw.read(reinterpret_cast<char*>(rgb.data()),
               std::streamsize(rgb.size()));
    if (d.raw.gcount() != std::streamsize(rgb.size())) {
      fail(Errc::io, "raw input truncated");
    }
    ++d.cursor;
    return pad_to_square(rgb.data(), d.width, d.height, d.workers);
  }
  const auto img = parse_p6(read_file(d.paths[d.cursor]));
  if (img.width != d.width || img.height != d.height) {
    fail(Errc::bad_format, "frame dimensions differ across the sequence: " +
                               d.paths[d.cursor]);
  }
  ++d.cursor;
  return pad_to_square(img.rgb.data(), img.width, img.height, d.workers);
}

// --- FrameSink ---------------------------------------------------------------

struct FrameSink::Impl {
  Format format = Format::Ppm;
  std::string path;
  uint32_t expected = 0;
  uint32_t written = 0;
  std::ofstream raw;
  bool finished = false;
};

FrameSink::FrameSink() : impl_(std::make_unique<Impl>()) {}
FrameSink::~FrameSink() = default;
FrameSink::FrameSink(FrameSink&&) noexcept = default;
FrameSink& FrameSink::operator=(FrameSink&&) noexcept = default;

FrameSink FrameSink::open(const std::string& path, Format format,
                          uint32_t frame_count) {
  FrameSink sink;
  auto& d = *sink.impl_;
  d.format = format;
  d.path = path;
  d.expected = frame_count;
  if (format == Format::Raw) {
    d.raw.open(path, std::ios::binary | std::ios::trunc);
    if (!d.raw) fail(Errc::io, "cannot open for writing: " + path);
  } else if (frame_count > 1) {
    std::error_code ec;
    fs::create_directories(path, ec);
    if (!fs::is_directory(path)) {
      fail(Errc::io, "cannot create frame directory: " + path);
    }
  }
  return sink;
}

void FrameSink::put(const Frame& frame) {
  auto& d = *impl_;
  if (d.written >= d.expected) {
    fail(Errc::invalid_argument, "frame sink received too many frames");
  }
  if (d.format == Format::Raw) {
    const auto rgb = crop_to_original(frame);
    d.raw.write(reinterpret_cast<const char*>(rgb.data()),
                std::streamsize(rgb.size()));
    if (!d.raw) fail(Errc::io, "write failed: " + d.path);
  } else if (d.expected > 1) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06u.ppm", d.written);
    store_ppm((fs::path(d.path) / name).string(), frame);
  } else {
    store_ppm(d.path, frame);
  }
  ++d.written;
}

void FrameSink::finish() {
  auto& d = *impl_;
  if (d.written != d.expected) {
    fail(Errc::io, "frame sink closed before all frames were written");
  }
  if (d.raw.is_open()) d.raw.close();
  d.finished = true;
}

}  // namespace cve
