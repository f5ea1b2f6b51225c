#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "milo/error.hpp"

namespace milo {

// Deterministic RNG for the randomized fits. The engine (mt19937_64) is fully
// specified by the standard, and every mapping from raw 64-bit draws to a
// usable value is written out here rather than delegated to std distributions,
// whose algorithms are implementation-defined. Same seed ⇒ same stream on
// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1): top 53 bits scaled down.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t n) {
    if (n == 0) raise(Errc::invalid_args, "index draw from empty range");
    return static_cast<std::size_t>(next_u64() % n);
  }

  // Standard normal via Box-Muller; pairs are generated together.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Index drawn proportionally to non-negative weights.
  std::size_t weighted_index(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) return index(weights.size());
    double r = uniform01() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      r -= weights[i];
      if (r <= 0.0) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace milo
