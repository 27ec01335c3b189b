#pragma once

#include <array>
#include <functional>
#include <optional>

#include "lattice/core.hpp"

namespace lattice {

struct QuadratureResult {
  cplx value{0.0};
  double error_bound = 0.0;
  long evaluations = 0;
  // False when the error bound rests on the Gauss-Kronrod difference rather than a majorant.
  bool rigorous = false;
  bool converged = true;
};

// A closed-form bound on the integral of |f| over [T, inf).
struct TailMajorant {
  std::function<double(double)> integral_from;
  double earliest_start = 0.0;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  // Oscillatory integrands should cap panels at pi.
  double max_panel = kInf;
  long max_evaluations = 4'000'000;
  // Largest cutoff tried when searching for a tail start on [a, inf).
  double max_cutoff = 1e12;
};

QuadratureResult integrate(const std::function<cplx(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {},
                           const std::optional<TailMajorant>& tail = std::nullopt);

// 21-point Kronrod rule on [-1,1] with its embedded 10-point Gauss rule (Gauss weights are
// zero at Kronrod-only nodes).
struct KronrodRule {
  std::array<double, 21> x;
  std::array<double, 21> wk;
  std::array<double, 21> wg;
};
const KronrodRule& kronrod21();

}  // namespace lattice
