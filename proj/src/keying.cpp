#include "keying.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "errors.hpp"

namespace cve {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::vector<uint8_t> decode_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) fail(Errc::bad_key, "key hex has odd length");
  std::vector<uint8_t> out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_nibble(hex[2 * i]);
    const int lo = hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) fail(Errc::bad_key, "key hex has a non-hex digit");
    out[i] = uint8_t(hi << 4 | lo);
  }
  return out;
}

void append_hex(std::string& out, uint8_t byte) {
  out.push_back(kHexDigits[byte >> 4]);
  out.push_back(kHexDigits[byte & 0xF]);
}

double read_f64le(const uint8_t* bytes) {
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= uint64_t(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

void append_f64le(std::string& out, double v) {
  const uint64_t bits = std::bit_cast<uint64_t>(v);
  for (int i = 0; i < 8; ++i) append_hex(out, uint8_t(bits >> (8 * i)));
}

double entropy_unit(std::random_device& rd) {
  // 53 fresh bits -> (0,1), endpoints rejected.
  for (;;) {
    const uint64_t v = (uint64_t(rd()) << 32) | rd();
    const double u = double(v >> 11) * 0x1p-53;
    if (u > 0.0 && u < 1.0) return u;
  }
}

double clamp_inside(double v, double lo, double hi) {
  if (v <= lo) return std::nextafter(lo, hi);
  if (v >= hi) return std::nextafter(hi, lo);
  return v;
}

// Second coordinator lane for LASM keys: the key names one orbit, the other
// lane starts half the unit interval away so the lanes can never coincide.
double rotate_half(double v) {
  v += 0.5;
  if (v >= 1.0) v -= 1.0;
  return v;
}

}  // namespace

Key parse_key_hex(std::string_view hex) {
  while (!hex.empty() && (hex.back() == '\n' || hex.back() == '\r' ||
                          hex.back() == ' ' || hex.back() == '\t')) {
    hex.remove_suffix(1);
  }
  if (hex.size() != kPlcmKeyHexLen && hex.size() != kLasmKeyHexLen) {
    fail(Errc::bad_key, "key hex has wrong length");
  }
  const auto bytes = decode_hex(hex);
  Key key;
  switch (bytes[0]) {
    case 0x00:
      if (bytes.size() != 1 + 4 * 8) fail(Errc::bad_key, "plcm key truncated");
      key.kind = MapKind::Plcm;
      key.plcm_a = {read_f64le(&bytes[1]), read_f64le(&bytes[9])};
      key.plcm_b = {read_f64le(&bytes[17]), read_f64le(&bytes[25])};
      validate(key.plcm_a);
      validate(key.plcm_b);
      break;
    case 0x01:
      if (bytes.size() != 1 + 3 * 8) fail(Errc::bad_key, "lasm key truncated");
      key.kind = MapKind::Lasm;
      key.lasm = {read_f64le(&bytes[1]), read_f64le(&bytes[9]),
                  read_f64le(&bytes[17])};
      validate(key.lasm);
      break;
    default:
      fail(Errc::bad_key, "unknown key map tag");
  }
  return key;
}

std::string key_to_hex(const Key& key) {
  std::string out;
  if (key.kind == MapKind::Plcm) {
    validate(key.plcm_a);
    validate(key.plcm_b);
    out.reserve(kPlcmKeyHexLen);
    append_hex(out, 0x00);
    append_f64le(out, key.plcm_a.x0);
    append_f64le(out, key.plcm_a.p);
    append_f64le(out, key.plcm_b.x0);
    append_f64le(out, key.plcm_b.p);
  } else {
    validate(key.lasm);
    out.reserve(kLasmKeyHexLen);
    append_hex(out, 0x01);
    append_f64le(out, key.lasm.x0);
    append_f64le(out, key.lasm.y0);
    append_f64le(out, key.lasm.mu);
  }
  return out;
}

Key generate_key(MapKind kind) {
  std::random_device rd;
  Key key;
  key.kind = kind;
  if (kind == MapKind::Plcm) {
    key.plcm_a = {entropy_unit(rd), 0.5 * entropy_unit(rd)};
    key.plcm_b = {entropy_unit(rd), 0.5 * entropy_unit(rd)};
  } else {
    key.lasm = {entropy_unit(rd), entropy_unit(rd),
                0.44 + entropy_unit(rd) * (0.93 - 0.44)};
  }
  return key;
}

Key load_key_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open key file: " + path);
  std::string line;
  std::getline(in, line);
  if (line.empty()) fail(Errc::bad_key, "key file is empty: " + path);
  return parse_key_hex(line);
}

Prbg WorkerParams::make_prbg(uint32_t worker) const {
  if (worker >= workers()) {
    fail(Errc::invalid_argument, "worker index out of range");
  }
  if (kind == MapKind::Plcm) {
    return Prbg(plcm[worker].first, plcm[worker].second);
  }
  return Prbg(lasm[worker].first, lasm[worker].second);
}

Coordinator::Coordinator(const Key& key)
    : kind_(key.kind),
      prbg_(key.kind == MapKind::Plcm
                ? Prbg(key.plcm_a, key.plcm_b)
                : Prbg(key.lasm,
                       LasmParams{rotate_half(key.lasm.x0),
                                  rotate_half(key.lasm.y0), key.lasm.mu})) {}

double Coordinator::next_unit() {
  uint8_t b[6];
  prbg_.fill(b);
  uint64_t v = 0;
  for (int i = 0; i < 6; ++i) v |= uint64_t(b[i]) << (8 * i);
  return double(v) / double((uint64_t(1) << 48) - 1);
}

WorkerParams Coordinator::derive_worker_params(uint32_t workers) {
  if (workers == 0) fail(Errc::invalid_argument, "worker count must be >= 1");
  WorkerParams out;
  out.kind = kind_;
  if (kind_ == MapKind::Plcm) {
    out.plcm.reserve(workers);
    for (uint32_t i = 0; i < workers; ++i) {
      PlcmParams lanes[2];
      for (auto& lane : lanes) {
        lane.x0 = clamp_inside(next_unit(), 0.0, 1.0);
        lane.p = clamp_inside(next_unit() * 0.5, 0.0, 0.5);
      }
      out.plcm.emplace_back(lanes[0], lanes[1]);
    }
  } else {
    out.lasm.reserve(workers);
    for (uint32_t i = 0; i < workers; ++i) {
      LasmParams lanes[2];
      for (auto& lane : lanes) {
        lane.x0 = clamp_inside(next_unit(), 0.0, 1.0);
        lane.y0 = clamp_inside(next_unit(), 0.0, 1.0);
        lane.mu = clamp_inside(0.44 + next_unit() * (0.93 - 0.44), 0.44, 0.93);
      }
      out.lasm.emplace_back(lanes[0], lanes[1]);
    }
  }
  return out;
}

uint32_t Coordinator::next_confusion_seed() {
  uint8_t b[4];
  prbg_.fill(b);
  const uint64_t u = uint64_t(b[0]) | uint64_t(b[1]) << 8 |
                     uint64_t(b[2]) << 16 | uint64_t(b[3]) << 24;
  ++seeds_drawn_;
  // Folded onto [1, 2^32 - 1]; a zero shift would make confusion the
  // identity in every row.
  return uint32_t(u % 0xFFFFFFFFull) + 1;
}

}  // namespace cve
