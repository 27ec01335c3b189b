#pragma once

#include <cstdint>

#include "lattice/core.hpp"
#include "lattice/verdict.hpp"

namespace lattice {

// |sum_{n,m} f_n g_{n-m} h_m| <= |f|_p |g|_s |h|_r with 1/p + 1/s + 1/r = 2.
VerdictRecord verify_young(const Sequence& f, const Sequence& g, const Sequence& h, double p, double s, double r);

struct ExponentPair {
  double p;
  double q;
};

// Interpolation probe for f -> g * f between (p0,q0) and (p1,q1) at parameter t.
VerdictRecord verify_riesz_thorin(const Sequence& g, ExponentPair e0, ExponentPair e1, double t, int samples,
                                  std::uint64_t seed);

struct SummationReport {
  double partial_sum;       // over |n|,|m| <= M
  double tail_bound;        // rigorous bound on the rest
  long truncation;          // M
  double statement_bound;   // constant with (16/(1-beta))^{1/r}, times t^{-beta}
  double proof_bound;       // same with 24/(1-beta)
  double empirical_constant;  // partial_sum * t^beta
};

SummationReport summation_estimate(double alpha, double beta, double t, long truncation = 0);
VerdictRecord verify_summation_estimate(double alpha, double beta, double t, long truncation = 0);

}  // namespace lattice
