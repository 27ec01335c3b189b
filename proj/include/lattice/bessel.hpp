#pragma once

#include <span>
#include <vector>

#include "lattice/core.hpp"
#include "lattice/verdict.hpp"

namespace lattice {

struct CertifiedValue {
  double value = 0.0;
  double abs_error = 0.0;
};

inline constexpr double kBesselTolerance = 1e-12;

// J_n(t) for integer n, |n|, |t| <= 1e6. Throws NumericalError if the error estimate exceeds tol.
CertifiedValue eval_j(long n, double t, double tol = kBesselTolerance);

// J_0(t), ..., J_nmax(t) in one backward sweep. abs_error bounds every entry.
struct BesselTable {
  std::vector<double> values;
  double abs_error = 0.0;
  double operator[](long k) const { return values[static_cast<std::size_t>(k)]; }
  // J_k for any integer k, using J_{-k} = (-1)^k J_k; zero beyond the table.
  double at(long k) const;
};
BesselTable eval_j_table(long nmax, double t);

// i^m with m reduced mod 4.
cplx i_power(long long m);

enum class BesselBound { szego, landau_order, landau_argument, krasikov, fused, small_t };
inline constexpr BesselBound kAllBesselBounds[] = {BesselBound::szego,     BesselBound::landau_order,
                                                   BesselBound::landau_argument, BesselBound::krasikov,
                                                   BesselBound::fused,     BesselBound::small_t};
const char* bound_name(BesselBound kind);

// Constants of the order and argument bounds |J_n(t)| <= b|n|^{-1/3}, c|t|^{-1/3}.
struct LandauConstants {
  double b = 0.7;
  double c = 0.8;
};

bool bound_applies(BesselBound kind, double n, double t);
// Throws DomainError outside bound_applies.
double bound_value(BesselBound kind, double n, double t, const LandauConstants& lan = {});

// One record per bound kind that has grid points in its domain.
std::vector<VerdictRecord> verify_pointwise_bounds(std::span<const long> ns, std::span<const double> ts,
                                                   const LandauConstants& lan = {});

struct WeightedLpReport {
  double integral;      // estimate of int_1^inf t^gamma |J_n|^p
  double upper;         // integral + quadrature error + tail majorant
  double tail_bound;
  double cutoff;
  double bound;         // C_p^gamma kappa_p^gamma(n)^p
};
WeightedLpReport weighted_lp_integral(double p, double gamma, long n);
VerdictRecord verify_weighted_lp(double p, double gamma, long n);

}  // namespace lattice
