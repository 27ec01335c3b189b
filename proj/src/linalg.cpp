#include "lattice/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace lattice {

namespace {

constexpr Eigen::Index kDenseSvdLimit = 300;

// Lanczos with full reorthogonalisation on A = K*K; the top Ritz value converges from below.
double lanczos_top_singular(const Matrix& k, double tol) {
  const Eigen::Index n = k.cols();
  const Eigen::Index max_iter = std::min<Eigen::Index>(n, 400);
  std::vector<Vector> basis;
  std::vector<double> alpha, beta;
  Vector q = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  // A fixed, non-symmetric start avoids accidental orthogonality to the top vector.
  for (Eigen::Index i = 0; i < n; ++i) q[i] *= 1.0 + 0.37 * std::sin(1.0 + static_cast<double>(i));
  q.normalize();
  double prev = -1.0;
  for (Eigen::Index it = 0; it < max_iter; ++it) {
    basis.push_back(q);
    Vector w = k.adjoint() * (k * q);
    const double a = q.dot(w).real();
    alpha.push_back(a);
    for (const Vector& b : basis) w -= b * b.dot(w);
    for (const Vector& b : basis) w -= b * b.dot(w);
    const double bnorm = w.norm();
    const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues()(m - 1);
    if (bnorm <= 1e-14 * std::max(1.0, std::abs(top)) || (prev >= 0 && std::abs(top - prev) <= 0.1 * tol * top))
      return std::sqrt(std::max(0.0, top));
    prev = top;
    beta.push_back(bnorm);
    q = w / bnorm;
  }
  return std::sqrt(std::max(0.0, prev));
}

}  // namespace

double operator_norm(const Matrix& k, double tol) {
  if (k.size() == 0) return 0.0;
  if (std::min(k.rows(), k.cols()) <= kDenseSvdLimit) {
    Eigen::JacobiSVD<Matrix> svd(k);
    return svd.singularValues()(0);
  }
  return k.rows() < k.cols() ? lanczos_top_singular(k.adjoint(), tol) : lanczos_top_singular(k, tol);
}

double operator_norm(const KernelMatrix& k, double tol) { return operator_norm(k.entries, tol); }

double hs_norm(const Matrix& k) { return k.norm(); }
double hs_norm(const KernelMatrix& k) { return k.entries.norm(); }

std::vector<double> hermitian_spectrum(const Matrix& k) {
  if (k.rows() != k.cols()) throw DomainError("hermitian_spectrum needs a square matrix");
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  if ((k - k.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw DomainError("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(k, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> hermitian_spectrum(const KernelMatrix& k) { return hermitian_spectrum(k.entries); }

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::size_t>(n, 256))));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace lattice
