#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gensplat {

// Seeded RNG with hand-rolled uniform/normal mappings. std::mt19937_64 is
// bit-stable everywhere; the distribution mapping is ours so sampled streams
// are identical across standard libraries as well.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform in [0, 1) with 53 bits of entropy.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(static_cast<std::uint64_t>(hi - lo + 1) * uniform());
  }

  bool coin() { return (gen_() & 1u) != 0; }

  // Box-Muller; one value per call, no cached state so streams stay simple.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Derive an independent child stream (for per-episode / per-scene seeding).
  Rng fork(std::uint64_t salt) {
    std::uint64_t s = gen_() ^ (salt * 0x9e3779b97f4a7c15ull);
    return Rng(s);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace gensplat
