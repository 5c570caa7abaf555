#pragma once

#include <cstdint>

namespace qcsi {

// SplitMix64 stream. Streams for distinct (seed, stream) pairs are derived
// by hashing, so per-shot streams are independent of evaluation order and
// can run in parallel.
class RngStream {
 public:
  explicit RngStream(uint64_t seed, uint64_t stream = 0) {
    state_ = mix(seed + 0x9E3779B97F4A7C15ull * (stream + 1));
    state_ = mix(state_ ^ 0xD1B54A32D192ED03ull);
  }

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bool() { return (next_u64() >> 63) != 0; }

  // +1 with probability p, else -1.
  int next_sign(double p) { return next_double() < p ? +1 : -1; }

 private:
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  uint64_t state_;
};

}  // namespace qcsi
