#ifndef ASYMPTOPT_RNG_HPP
#define ASYMPTOPT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace asymptopt {

// Seeded generator with hand-rolled transforms. std::*_distribution is
// implementation-defined, so uniform and gaussian draws are built from
// raw 64-bit words to keep streams reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Marsaglia polar method; one value per call, the pair partner is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  // Dirichlet(1,...,1): uniform on the probability simplex.
  std::vector<double> simplex_weights(int k) {
    std::vector<double> w(k);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
      w[i] = -std::log(1.0 - uniform01());
      sum += w[i];
    }
    for (double& wi : w) wi /= sum;
    return w;
  }

  // Deterministic stream splitting for independent sub-tasks.
  Rng fork(std::uint64_t stream) {
    std::uint64_t z = base_seed_mix_ + 0x9e3779b97f4a7c15ull * (stream + 1) + next_u64();
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t base_seed_mix_ = 0x243f6a8885a308d3ull;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace asymptopt

#endif
