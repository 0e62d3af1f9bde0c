#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>

#include "chaos.hpp"
#include "frame.hpp"

namespace cve {

// CVE1 container: a fixed little-endian header followed by frame_count
// payloads of side*side*3 cipher bytes each.
struct ContainerHeader {
  uint8_t version = 1;
  MapKind map_kind = MapKind::Plcm;
  uint32_t side = 0;
  uint32_t orig_width = 0;
  uint32_t orig_height = 0;
  uint16_t workers = 0;
  uint8_t rounds = 0;
  uint16_t fps = 0;
  uint32_t frame_count = 0;
};

inline constexpr std::array<uint8_t, 4> kContainerMagic = {'C', 'V', 'E', '1'};
inline constexpr size_t kContainerHeaderSize = 27;
inline constexpr uint8_t kContainerVersion = 1;

std::array<uint8_t, kContainerHeaderSize> encode_header(
    const ContainerHeader& h);

// Validates magic, version, map kind, dimension and worker consistency.
ContainerHeader decode_header(std::span<const uint8_t> data);

class ContainerWriter {
 public:
  ContainerWriter(const std::string& path, const ContainerHeader& header);
  void put(const Frame& frame);
  void finish();

 private:
  std::ofstream out_;
  std::string path_;
  ContainerHeader header_;
  uint32_t written_ = 0;
};

class ContainerReader {
 public:
  explicit ContainerReader(const std::string& path);
  const ContainerHeader& header() const { return header_; }
  bool done() const { return cursor_ >= header_.frame_count; }
  Frame next();

 private:
  std::ifstream in_;
  std::string path_;
  ContainerHeader header_;
  uint32_t cursor_ = 0;
};

}  // namespace cve
