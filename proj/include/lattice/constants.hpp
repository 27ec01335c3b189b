#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lattice/core.hpp"

namespace lattice {

// Exponents shared by the estimates; each evaluator reads only what it needs.
struct ExponentConfig {
  int d = 3;
  double q = 2.0;
  double p = 1.0;
  double gamma = 0.0;
  double a = 1.0;
  double kappa = 0.0;
};

// Gamma(q,d,gamma): the constant attached to the l^r norm of the product weight.
double gamma_big(double q, int d, double gamma);
// C_d^gamma: time-integral constant of the propagator kernel.
double c_d_gamma(int d, double gamma);
// gamma_{d,q}: supremum of admissible Holder exponents (not clamped).
double gamma_dq(int d, double q);
double c_a(double a);
double c_p_gamma(double p, double gamma);
double kappa_p_gamma(long n, double p, double gamma);
double kappa_tilde(const LatticeVector& n, int d, double gamma);
double r_p_gamma(double p, double gamma);
// Bound on the l^r norm of kappa_p^gamma over Z; r = kInf allowed.
double kappa_norm_bound(double p, double gamma, double r);
double d_qd(double q, int d);

// Half-open interval [lo, hi).
struct Range {
  double lo;
  double hi;
  bool contains(double x) const { return x >= lo && x < hi; }
};

struct AdmissibilityRanges {
  Range weight_q;
  Range potential_p;
  std::optional<Range> lipschitz_q;    // d >= 5 only
  std::optional<Range> finiteness_p;   // d >= 5 only
};
AdmissibilityRanges admissibility(int d);

// (1 + C_d^0 Gamma(2p,d,0))^{-1}
double small_coupling_threshold(double p, int d);

// Looks up a constant by name for the command line; params in the order of the C++ signature.
double constant_by_name(const std::string& name, const std::vector<double>& params);

}  // namespace lattice
