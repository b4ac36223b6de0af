#pragma once

#include <cstdint>
#include <random>

namespace trmc {

// Seedable random stream. Every spatial cell, replica and boundary owns one;
// streams are derived from a master seed and a stream id so that results do
// not depend on scheduling order.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed = 0x5eed);

  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id);

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, n). Requires n > 0.
  std::uint64_t index(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  double normal() { return normal_(engine_); }

  engine_type& engine() { return engine_; }

 private:
  engine_type engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace trmc
