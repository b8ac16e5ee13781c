#pragma once

#include <cstdint>
#include <random>

namespace chartdesign {

/// Seeded generator shared by every randomized operation.
///
/// The engine is MT19937-64 (std::mt19937_64), whose output sequence is fixed
/// by the C++ standard. The standard distributions are implementation-defined,
/// so bounded integers and unit doubles are derived here from raw engine
/// output to keep results identical across compilers and releases:
///   below(n): rejection sampling, unbiased;
///   unit():   top 53 bits scaled to [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    while (true) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % n;
    }
  }

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chartdesign
