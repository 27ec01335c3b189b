#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "lattice/core.hpp"

namespace lattice {

// Seeded generator with portable draws: the distributions are built here rather than taken
// from <random>, whose floating-point distributions differ across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  long long integer(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long long>(eng_() % span);
  }
  double normal() {
    const double u1 = 1.0 - uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  cplx complex_normal() { return {normal(), normal()}; }

  // Derives an independent stream for the k-th case of a sweep.
  Rng fork(std::uint64_t k) { return Rng(eng_() ^ (0x9E3779B97F4A7C15ULL * (k + 1))); }

 private:
  std::mt19937_64 eng_;
};

// Random sequence on `count` distinct sites of [-radius, radius]^dim with complex normal values.
inline Sequence random_sequence(Rng& rng, int dim, int radius, int count, bool real = false) {
  Sequence f(dim);
  int guard = 0;
  while (static_cast<int>(f.size()) < count && guard++ < 100 * count + 100) {
    LatticeVector n(dim);
    for (int j = 0; j < dim; ++j) n[j] = static_cast<std::int32_t>(rng.integer(-radius, radius));
    if (f(n) != cplx(0.0)) continue;
    f.set(n, real ? cplx(rng.normal()) : rng.complex_normal());
  }
  return f;
}

}  // namespace lattice
