#include "container.hpp"

#include <cstring>
#include <filesystem>

#include "errors.hpp"

namespace cve {

namespace {

void put_u16(uint8_t* p, uint16_t v) {
  p[0] = uint8_t(v);
  p[1] = uint8_t(v >> 8);
}

void put_u32(uint8_t* p, uint32_t v) {
  p[0] = uint8_t(v);
  p[1] = uint8_t(v >> 8);
  p[2] = uint8_t(v >> 16);
  p[3] = uint8_t(v >> 24);
}

uint16_t get_u16(const uint8_t* p) { return uint16_t(p[0] | p[1] << 8); }

uint32_t get_u32(const uint8_t* p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
         uint32_t(p[3]) << 24;
}

void validate_header(const ContainerHeader& h) {
  if (h.version != kContainerVersion) {
    fail(Errc::bad_format, "container: unsupported version");
  }
  if (h.map_kind != MapKind::Plcm && h.map_kind != MapKind::Lasm) {
    fail(Errc::bad_format, "container: unknown map kind");
  }
  if (h.side == 0) fail(Errc::bad_format, "container: zero frame side");
  if (h.workers == 0) fail(Errc::bad_format, "container: zero worker count");
  if (h.side % h.workers != 0) {
    fail(Errc::bad_format, "container: side not divisible by worker count");
  }
  if (h.rounds == 0) fail(Errc::bad_format, "container: zero rounds");
  if (h.orig_width == 0 || h.orig_width > h.side || h.orig_height == 0 ||
      h.orig_height > h.side) {
    fail(Errc::bad_format, "container: original dimensions outside the frame");
  }
  if (h.fps == 0) fail(Errc::bad_format, "container: zero fps");
}

}  // namespace

std::array<uint8_t, kContainerHeaderSize> encode_header(
    const ContainerHeader& h) {
  validate_header(h);
  std::array<uint8_t, kContainerHeaderSize> out{};
  std::memcpy(out.data(), kContainerMagic.data(), 4);
  out[4] = h.version;
  out[5] = uint8_t(h.map_kind);
  put_u32(&out[6], h.side);
  put_u32(&out[10], h.orig_width);
  put_u32(&out[14], h.orig_height);
  put_u16(&out[18], h.workers);
  out[20] = h.rounds;
  put_u16(&out[21], h.fps);
  put_u32(&out[23], h.frame_count);
  return out;
}

ContainerHeader decode_header(std::span<const uint8_t> data) {
  if (data.size() < kContainerHeaderSize) {
    fail(Errc::bad_format, "container: truncated header");
  }
  if (std::memcmp(data.data(), kContainerMagic.data(), 4) != 0) {
    fail(Errc::bad_format, "container: bad magic");
  }
  ContainerHeader h;
  h.version = data[4];
  if (data[5] > 1) fail(Errc::bad_format, "container: unknown map kind");
  h.map_kind = MapKind(data[5]);
  h.side = get_u32(&data[6]);
  h.orig_width = get_u32(&data[10]);
  h.orig_height = get_u32(&data[14]);
  h.workers = get_u16(&data[18]);
  h.rounds = data[20];
  h.fps = get_u16(&data[21]);
  h.frame_count = get_u32(&data[23]);
  validate_header(h);
  return h;
}

ContainerWriter::ContainerWriter(const std::string& path,
                                 const ContainerHeader& header)
    : out_(path, std::ios::binary | std::ios::trunc),
      path_(path),
      header_(header) {
  if (!out_) fail(Errc::io, "cannot open for writing: " + path);
  const auto bytes = encode_header(header_);
  out_.write(reinterpret_cast<const char*>(bytes.data()),
             std::streamsize(bytes.size()));
  if (!out_) fail(Errc::io, "write failed: " + path);
}

void ContainerWriter::put(const Frame& frame) {
  if (written_ >= header_.frame_count) {
    fail(Errc::invalid_argument, "container: too many frames");
  }
  if (frame.side != header_.side) {
    fail(Errc::mismatch, "container: frame side differs from the header");
  }
  out_.write(reinterpret_cast<const char*>(frame.pixels.data()),
             std::streamsize(frame.pixels.size()));
  if (!out_) fail(Errc::io, "write failed: " + path_);
  ++written_;
}

void ContainerWriter::finish() {
  if (written_ != header_.frame_count) {
    fail(Errc::io, "container: fewer frames written than declared");
  }
  out_.close();
  if (!out_) fail(Errc::io, "close failed: " + path_);
}

ContainerReader::ContainerReader(const std::string& path)
    : in_(path, std::ios::binary), path_(path) {
  if (!in_) fail(Errc::io, "cannot open for reading: " + path);
  std::array<uint8_t, kContainerHeaderSize> raw;
  in_.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
  if (in_.gcount() != std::streamsize(raw.size())) {
    fail(Errc::bad_format, "container: truncated header");
  }
  header_ = decode_header(raw);
  std::error_code ec;
  const auto total = std::filesystem::file_size(path, ec);
  const auto want = kContainerHeaderSize +
                    uint64_t(header_.frame_count) * header_.side *
                        header_.side * 3;
  if (ec || total != want) {
    fail(Errc::bad_format, "container: payload size does not match header");
  }
}

Frame ContainerReader::next() {
  if (done()) fail(Errc::invalid_argument, "container: no frames left");
  Frame f;
  f.side = header_.side;
  f.orig_width = header_.orig_width;
  f.orig_height = header_.orig_height;
  f.pixels.resize(f.byte_count());
  in_.read(reinterpret_cast<char*>(f.pixels.data()),
           std::streamsize(f.pixels.size()));
  if (in_.gcount() != std::streamsize(f.pixels.size())) {
    fail(Errc::bad_format, "container: truncated frame payload");
  }
  ++cursor_;
  return f;
}

}  // namespace cve
