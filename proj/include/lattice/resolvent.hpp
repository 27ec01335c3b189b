#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lattice/core.hpp"
#include "lattice/linalg.hpp"
#include "lattice/quadrature.hpp"
#include "lattice/verdict.hpp"

namespace lattice {

enum class Boundary { interior, plus_i0, minus_i0 };

// z = lambda + i mu off the spectrum, or a boundary value lambda +- i0.
struct SpectralPoint {
  double lambda = 0.0;
  double mu = 0.0;
  Boundary boundary = Boundary::interior;

  static SpectralPoint interior(double lambda, double mu);
  static SpectralPoint plus_i0(double lambda);
  static SpectralPoint minus_i0(double lambda);

  cplx z() const { return {lambda, mu}; }
  // Closed upper half-plane: mu > 0 or the +i0 side.
  bool upper() const { return boundary == Boundary::plus_i0 || (boundary == Boundary::interior && mu > 0.0); }
  SpectralPoint conj() const;
  std::string str() const;
  auto operator<=>(const SpectralPoint&) const = default;
};

bool same_closed_half_plane(const SpectralPoint& a, const SpectralPoint& b);

// R_0(n,z) = r01 + r02: the time integral over [0,1] and over [1,inf).
struct ResolventSplit {
  cplx r01{0.0};
  cplx r02{0.0};
  double err01 = 0.0;
  double err02 = 0.0;
  cplx total() const { return r01 + r02; }
  double error() const { return err01 + err02; }
};

enum class ResolventPart { both, short_time };

// Free resolvent kernels R_0(n,z) for a set of offsets and spectral points, computed with one
// shared time quadrature. Lower half-plane values come from
//   R_0(n,z) = -i int_0^inf e^{-izt} i^{|n|} prod_j J_{n_j}(t) dt,
// with the integral beyond a cutoff T evaluated from the Hankel expansions of the Bessel
// factors and closed-form exponential integrals. Upper half-plane values are conjugates.
class ResolventTable {
 public:
  ResolventTable(int dim, std::span<const LatticeVector> offsets, std::span<const SpectralPoint> points,
                 double tol = 1e-10, ResolventPart part = ResolventPart::both, unsigned jobs = 1);

  int dim() const { return dim_; }
  std::size_t point_count() const { return point_lower_.size(); }
  // Any offset whose sorted absolute values were among the requested ones.
  ResolventSplit split(const LatticeVector& n, std::size_t point) const;
  cplx operator()(const LatticeVector& n, std::size_t point) const { return split(n, point).total(); }
  // Largest certified error over all stored entries of the requested part.
  double max_error() const { return max_error_; }
  double cutoff() const { return cutoff_; }

 private:
  int dim_;
  ResolventPart part_;
  std::map<LatticeVector, std::size_t> kernel_index_;
  std::vector<std::size_t> point_lower_;
  std::vector<bool> point_conj_;
  std::size_t lower_count_ = 0;
  std::vector<ResolventSplit> values_;
  double max_error_ = 0.0;
  double cutoff_ = 0.0;
};

QuadratureResult r0_kernel(const LatticeVector& n, const SpectralPoint& z, double tol = 1e-10);
ResolventSplit r0_split(const LatticeVector& n, const SpectralPoint& z, double tol = 1e-10);

// All differences n - m for n in rows, m in cols.
std::vector<LatticeVector> difference_set(std::span<const LatticeVector> rows, std::span<const LatticeVector> cols);

// Y_0(z) = u R_0(z) v on supp u x supp v. The entry_error field bounds |error of R_0(n-m,z)|;
// multiply by |u|_2 |v|_2 for an operator-norm error.
KernelMatrix weighted_resolvent(const Sequence& u, const Sequence& v, const SpectralPoint& z, double tol = 1e-10);
KernelMatrix weighted_resolvent(const Sequence& u, const Sequence& v, const ResolventTable& table, std::size_t point,
                                ResolventPart part = ResolventPart::both);

// Norm and Lipschitz checks of R_01 on a box; two records.
std::vector<VerdictRecord> verify_r01_contraction(const SpectralPoint& z, const SpectralPoint& zp, const Box& box);
// Many points at once: one norm record per point, one Lipschitz record per adjacent pair.
std::vector<VerdictRecord> verify_r01_sweep(std::span<const SpectralPoint> points, const Box& box, unsigned jobs = 1);

VerdictRecord verify_r02_holder(const LatticeVector& m, const SpectralPoint& z, const SpectralPoint& zp, double gamma);
VerdictRecord verify_r02_bound(const LatticeVector& m, const SpectralPoint& z);

// Operator norm, Hilbert-Schmidt norm, and both Holder differences of Y_0.
std::vector<VerdictRecord> verify_resolvent_bounds(const Sequence& u, const Sequence& v, double q,
                                                   const SpectralPoint& z, const SpectralPoint& zp, double gamma);

struct ResolventSweep {
  int dim = 3;
  double q = 2.0;
  double gamma = 0.0;
  std::vector<SpectralPoint> points;
  // Holder pairs as indices into points.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};
// Norm records for every point and Holder records for every pair, sharing one kernel table.
std::vector<VerdictRecord> verify_resolvent_sweep(const Sequence& u, const Sequence& v, const ResolventSweep& sweep,
                                                  unsigned jobs = 1);

// The threshold energies -d, -d+2, ..., d.
std::vector<double> thresholds(int d);

}  // namespace lattice
