#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <vector>

#include "lattice/core.hpp"

namespace lattice {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// A dense operator between two finite sets of lattice points.
struct KernelMatrix {
  std::vector<LatticeVector> rows;
  std::vector<LatticeVector> cols;
  Matrix entries;
  // Operator-norm effect of entries left out of a truncated infinite operator.
  double truncation_error = 0.0;
  // Largest certified error of a single entry.
  double entry_error = 0.0;
};

// Largest singular value. Dense SVD for small matrices, Lanczos on K*K otherwise.
double operator_norm(const Matrix& k, double tol = 1e-10);
double operator_norm(const KernelMatrix& k, double tol = 1e-10);
double hs_norm(const Matrix& k);
double hs_norm(const KernelMatrix& k);
// Ascending eigenvalues; rejects matrices that are not Hermitian to 1e-12.
std::vector<double> hermitian_spectrum(const Matrix& k);
std::vector<double> hermitian_spectrum(const KernelMatrix& k);

// Runs body(i) for i in [0, n) on up to `jobs` threads. Results must be written to
// per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

}  // namespace lattice
