#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace clusim {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; all value transforms are done here by
// hand because the std:: distributions are implementation-defined and would
// break same-seed reproducibility across library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    // multiply-shift; bias is negligible for the n used here (< 2^32)
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Uniform real in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Exponential with the given mean (inverse transform).
  double exponential(double mean) {
    return -mean * std::log(1.0 - uniform());
  }

  // Standard normal (Box-Muller, one value per call for reproducibility).
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace clusim
