#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chaos.hpp"

namespace cve {

// Canonical key: one map-kind tag byte followed by the binary64 parameters,
// little endian, serialized as lowercase hex. PLCM carries the two lane
// parameter pairs (x0_a, p_a, x0_b, p_b); LASM carries (x0, y0, mu).
struct Key {
  MapKind kind = MapKind::Plcm;
  PlcmParams plcm_a{};
  PlcmParams plcm_b{};
  LasmParams lasm{};
};

inline constexpr size_t kPlcmKeyHexLen = 2 + 4 * 16;
inline constexpr size_t kLasmKeyHexLen = 2 + 3 * 16;

Key parse_key_hex(std::string_view hex);
std::string key_to_hex(const Key& key);

// Fresh key from OS entropy. LASM mu is drawn from [0.44, 0.93].
Key generate_key(MapKind kind);

// Reads the single hex line of a key file.
Key load_key_file(const std::string& path);

// Lane seeding for every worker, in worker order, lane a before lane b.
struct WorkerParams {
  MapKind kind = MapKind::Plcm;
  std::vector<std::pair<PlcmParams, PlcmParams>> plcm;
  std::vector<std::pair<LasmParams, LasmParams>> lasm;

  uint32_t workers() const {
    return uint32_t(kind == MapKind::Plcm ? plcm.size() : lasm.size());
  }
  Prbg make_prbg(uint32_t worker) const;
};

// The coordinator generator: seeded straight from the key, it first derives
// the worker lane parameters and then yields one confusion seed per frame.
class Coordinator {
 public:
  explicit Coordinator(const Key& key);

  // One 6-byte draw per parameter, mapped affinely into the target interval
  // and clamped one representable step inside it.
  WorkerParams derive_worker_params(uint32_t workers);

  // Four stream bytes, little endian, folded onto [1, 2^32 - 1].
  uint32_t next_confusion_seed();

  uint64_t seeds_drawn() const { return seeds_drawn_; }

 private:
  double next_unit();

  MapKind kind_;
  Prbg prbg_;
  uint64_t seeds_drawn_ = 0;
};

}  // namespace cve
