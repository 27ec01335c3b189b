#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "lattice/core.hpp"
#include "lattice/linalg.hpp"
#include "lattice/resolvent.hpp"
#include "lattice/verdict.hpp"

namespace lattice {

// A real, finitely supported potential and the exponent p it is declared to lie in.
struct Potential {
  Sequence values;
  double p = 1.0;

  Potential() = default;
  explicit Potential(Sequence v, double p = 1.0);
  int dim() const { return values.dim(); }
  double sup() const;
  double value(const LatticeVector& n) const { return values(n).real(); }
};

// V = q1 q2 with q1 = |V|^{1/2} and q2 = sign(V) q1.
struct Factorization {
  Sequence q1;
  Sequence q2;
};
Factorization factorize(const Potential& v);

// H = Delta + V on a box with Dirichlet truncation: hops leaving the box are dropped.
class Hamiltonian {
 public:
  // buffer < 0 selects radius / 2.
  Hamiltonian(const Potential& v, const Box& box, int buffer = -1);

  const Box& box() const { return box_; }
  const Potential& potential() const { return v_; }
  std::size_t size() const { return box_.size(); }
  // The support reaches into the boundary buffer, so eigenvectors may feel the walls.
  bool boundary_warning() const { return warning_; }
  // Bound on the operator norm: d + sup |V|.
  double norm_bound() const;

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  void apply(const Vector& x, Vector& y) const;
  Eigen::MatrixXd dense() const;
  double diagonal(std::size_t i) const { return diag_[i]; }

 private:
  template <class V>
  void apply_impl(const V& x, V& y) const;

  Box box_;
  Potential v_;
  std::vector<double> diag_;
  std::vector<std::size_t> stride_;
  bool warning_ = false;
};

inline constexpr std::size_t kDenseLimit = 2500;

struct EigenPairs {
  std::vector<double> values;   // ascending
  Eigen::MatrixXd vectors;      // columns, orthonormal
  bool dense = true;
};

// Full spectral decomposition; dense, so limited to kDenseLimit sites.
EigenPairs spectrum(const Hamiltonian& h);
// Eigenpairs with eigenvalue outside [lo, hi]. Dense for small boxes, block Lanczos with full
// reorthogonalization otherwise.
EigenPairs discrete_spectrum(const Hamiltonian& h, double lo, double hi, std::uint64_t seed = 1);

// Solves (H - z) x = b for Im z != 0 by conjugate orthogonal conjugate gradients.
Vector solve_shifted(const Hamiltonian& h, cplx z, const Vector& b, double rel_tol = 1e-12);
// e^{itH} x by Chebyshev expansion.
Vector evolve(const Hamiltonian& h, double t, const Vector& x, double tol = 1e-13);

// -q1 R_0(z) q2 on supp V: lambda is an eigenvalue of H exactly when this has eigenvalue 1.
struct BSOperator {
  SpectralPoint z;
  std::vector<LatticeVector> support;
  Matrix matrix;
  double entry_error = 0.0;
};
BSOperator bs_operator(const Potential& v, const SpectralPoint& z, double tol = 1e-10);
std::vector<BSOperator> bs_operators(const Potential& v, std::span<const SpectralPoint> zs, double tol = 1e-10,
                                     unsigned jobs = 1);

struct BSDetection {
  double lambda = 0.0;
  double bracket = 0.0;     // width of the final bisection interval
  int multiplicity = 0;     // eigenvalues of the BS operator crossing 1 at lambda
  cplx nu{0.0};             // eigenvalue of the BS operator nearest to 1 at lambda
  double defect = 0.0;      // |nu - 1|
  Vector f;                 // eigenvector of the BS operator for nu
};

struct BSScan {
  std::vector<BSDetection> detections;
  // Inside the band: smallest |nu - 1| over the grid (descriptive only).
  double inband_min_defect = kInf;
  double inband_argmin = 0.0;
  std::size_t inband_points = 0;
  std::vector<VerdictRecord> records;
};

// Outside [-d, d] the eigenvalues of the BS operator are real; eigenvalues of H sit where the
// number of them above 1 changes, located by bisection. Inside the band the +i0 operator is
// only scanned.
BSScan bs_scan(const Potential& v, std::span<const double> grid, double detection_tol = 1e-8, unsigned jobs = 1);
// Grid on [-d - |V|_inf - 1, -d] and [d, d + |V|_inf + 1], plus interior points if requested.
std::vector<double> default_bs_grid(const Potential& v, int points_per_side = 100, int inband_points = 0);

// Eigenvalues of the box Hamiltonian outside [-d, d] against BS detections, both directions.
std::vector<VerdictRecord> verify_bs_correspondence(const Potential& v, const Box& box, double tol = 1e-6,
                                                    unsigned jobs = 1);
// |V|_p below the small-coupling threshold forces an empty detection list.
VerdictRecord verify_small_coupling(const Potential& v, unsigned jobs = 1);
// Y(z)(I + Y_0(z)) = q2 R_0(z) q2 with Y from the box Hamiltonian, Y_0 = q1 R_0(z) q2.
VerdictRecord verify_resolvent_identity(const Potential& v, const SpectralPoint& z, const Box& box,
                                        double tol = 1e-6);

struct WaveProbe {
  std::vector<double> times;
  std::vector<double> increments;      // |W(T_{k+1}) f - W(T_k) f|, one fewer than times
  std::vector<double> isometry_defect; // ||W(T) f| - |f||
  std::vector<double> intertwining;    // |(H W(T) - W(T) Delta) f|
  std::vector<VerdictRecord> records;
};
// W(T) f = e^{iTH} e^{-iT Delta} f on a box large enough that the wave does not reach the walls.
WaveProbe wave_operator_probe(const Potential& v, const Sequence& f, std::span<const double> times, const Box& box);
// Largest T the box supports for data of the given support radius.
double causality_budget(const Box& box, int support_radius);

struct FinitenessReport {
  std::size_t count = 0;  // detections outside the band, with multiplicity
  BSScan scan;
  std::vector<VerdictRecord> records;
};
FinitenessReport verify_finiteness_conditions(const Potential& v, int grid_points = 200, unsigned jobs = 1);

}  // namespace lattice
