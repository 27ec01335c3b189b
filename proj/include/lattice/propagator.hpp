#pragma once

#include <vector>

#include "lattice/bessel.hpp"
#include "lattice/core.hpp"
#include "lattice/linalg.hpp"
#include "lattice/verdict.hpp"

namespace lattice {

struct KernelValue {
  cplx value{0.0};
  double abs_error = 0.0;
};

// e^{it Delta}(n) = i^{|n|} prod_j J_{n_j}(t), |n| = sum_j n_j.
KernelValue kernel_value(const LatticeVector& n, double t);

// The kernel at a fixed time with one shared Bessel table; cheap repeated lookups.
class PropagatorKernel {
 public:
  PropagatorKernel(int dim, double t, long max_offset);
  int dim() const { return dim_; }
  double time() const { return t_; }
  cplx operator()(const LatticeVector& n) const;
  // i^{|k|} J_{|k|}(t): the one-dimensional factor.
  cplx factor(long k) const;
  double entry_error() const { return dim_ * table_.abs_error; }

 private:
  int dim_;
  double t_;
  BesselTable table_;
};

// The evolved sequence on a box, with a bound on the l^2 mass outside it.
struct EvolvedField {
  Box box;
  std::vector<cplx> values;
  double discarded_l2 = 0.0;
  double entry_error = 0.0;
};

inline constexpr std::size_t kDefaultBoxCap = 6'000'000;

EvolvedField evolve(const Sequence& f, double t, double tol, std::size_t box_cap = kDefaultBoxCap);
Sequence apply_propagator(const Sequence& f, double t, double tol, std::size_t box_cap = kDefaultBoxCap);

// Smallest R with 2 sum_{k>R} J_k(t)^2 <= mass.
long propagator_radius(double t, double mass);

VerdictRecord verify_smoothing(const Sequence& f, double s, double t, double tol = 1e-13,
                               const LandauConstants& lan = {});
VerdictRecord verify_weighted_decay(double a, double c, int d, double t, int box_radius = 0);
VerdictRecord verify_dispersive(const Sequence& u, const Sequence& v, double q, double kappa, double a, double t,
                                const LandauConstants& lan = {});
VerdictRecord verify_time_integral(const LatticeVector& n, int d, double gamma);

}  // namespace lattice
