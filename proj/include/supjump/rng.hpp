#pragma once

#include <cmath>
#include <cstdint>

namespace supjump {

// Counter-based per-replicate random stream.  The output is the SplitMix64
// finalizer applied to key + counter * golden gamma, so a stream is a pure
// function of (master seed, stream id, draw index) and results never depend
// on thread count or scheduling.
class StreamRng {
 public:
  StreamRng(std::uint64_t master_seed, std::uint64_t stream_id)
      : key_(finalize(finalize(master_seed + kGamma) ^
                      finalize(stream_id * 0xBF58476D1CE4E5B9ULL + kGamma))) {}

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() { return finalize(key_ + (++counter_) * kGamma); }

  // Uniform on (0, 1]; never returns 0 so -log stays finite.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Exponential with the given rate (mean 1/rate).
  double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace supjump
