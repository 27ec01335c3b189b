#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "lattice/random.hpp"
#include "lattice/schrodinger.hpp"

namespace lattice {

Potential::Potential(Sequence v, double p_) : values(std::move(v)), p(p_) {
  for (const auto& [n, x] : values.entries())
    if (x.imag() != 0.0) throw DomainError("potential values must be real");
  if (!(p >= 1.0)) throw DomainError("potential exponent p must be at least 1");
}

double Potential::sup() const { return norm(values, kInf); }

Factorization factorize(const Potential& v) {
  Factorization f{Sequence(v.dim()), Sequence(v.dim())};
  for (const auto& [n, x] : v.values.entries()) {
    const double a = std::sqrt(std::abs(x.real()));
    f.q1.set(n, a);
    f.q2.set(n, x.real() < 0.0 ? -a : a);
  }
  return f;
}

Hamiltonian::Hamiltonian(const Potential& v, const Box& box, int buffer) : box_(box), v_(v) {
  if (v.dim() != box.dim()) throw DomainError("potential and box have different dimensions");
  if (buffer < 0) buffer = box.radius() / 2;
  diag_.assign(box.size(), 0.0);
  for (const auto& [n, x] : v.values.entries()) {
    if (!box.contains(n)) throw DomainError("potential support " + n.str() + " lies outside the box");
    if (n.max_abs() > box.radius() - buffer) warning_ = true;
    diag_[box.index(n)] = x.real();
  }
  const std::size_t w = 2 * static_cast<std::size_t>(box.radius()) + 1;
  stride_.assign(static_cast<std::size_t>(box.dim()), 1);
  for (int j = box.dim() - 2; j >= 0; --j) stride_[j] = stride_[j + 1] * w;
}

double Hamiltonian::norm_bound() const { return box_.dim() + v_.sup(); }

template <class V>
void Hamiltonian::apply_impl(const V& x, V& y) const {
  const int d = box_.dim();
  const int r = box_.radius();
  y.resize(x.size());
  std::array<int, kMaxDimension> c{};
  c.fill(-r);
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    auto acc = diag_[i] * x[static_cast<Eigen::Index>(i)];
    for (int j = 0; j < d; ++j) {
      const std::size_t s = stride_[static_cast<std::size_t>(j)];
      if (c[j] < r) acc += 0.5 * x[static_cast<Eigen::Index>(i + s)];
      if (c[j] > -r) acc += 0.5 * x[static_cast<Eigen::Index>(i - s)];
    }
    y[static_cast<Eigen::Index>(i)] = acc;
    for (int j = d - 1; j >= 0; --j) {
      if (++c[j] <= r) break;
      c[j] = -r;
    }
  }
}

void Hamiltonian::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const { apply_impl(x, y); }
void Hamiltonian::apply(const Vector& x, Vector& y) const { apply_impl(x, y); }

Eigen::MatrixXd Hamiltonian::dense() const {
  if (size() > 4 * kDenseLimit) throw DomainError("box too large for a dense Hamiltonian");
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n), col;
  for (Eigen::Index i = 0; i < n; ++i) {
    e[i] = 1.0;
    apply(e, col);
    m.col(i) = col;
    e[i] = 0.0;
  }
  return m;
}

EigenPairs spectrum(const Hamiltonian& h) {
  if (h.size() > kDenseLimit) throw DomainError("dense spectrum limited to " + std::to_string(kDenseLimit) + " sites");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  EigenPairs out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  out.vectors = es.eigenvectors();
  return out;
}

namespace {

EigenPairs select_outside(const std::vector<double>& values, const Eigen::MatrixXd& vectors, double lo, double hi,
                          bool dense) {
  EigenPairs out;
  out.dense = dense;
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] < lo || values[i] > hi) keep.push_back(static_cast<Eigen::Index>(i));
  out.vectors.resize(vectors.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.values.push_back(values[static_cast<std::size_t>(keep[k])]);
    out.vectors.col(static_cast<Eigen::Index>(k)) = vectors.col(keep[k]);
  }
  return out;
}

// Orthogonalizes the columns of w against q[:, 0:m] (twice) and returns the coefficients.
Eigen::MatrixXd reorthogonalize(const Eigen::MatrixXd& q, Eigen::Index m, Eigen::MatrixXd& w) {
  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(m, w.cols());
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::MatrixXd c = q.leftCols(m).transpose() * w;
    w.noalias() -= q.leftCols(m) * c;
    coef += c;
  }
  return coef;
}

}  // namespace

EigenPairs discrete_spectrum(const Hamiltonian& h, double lo, double hi, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(h.size());
  if (h.size() <= kDenseLimit) {
    const EigenPairs all = spectrum(h);
    return select_outside(all.values, all.vectors, lo, hi, true);
  }
  constexpr Eigen::Index block = 6;
  // Keep the Krylov basis within about 400 MB.
  const Eigen::Index cap = std::min<Eigen::Index>(360, std::max<Eigen::Index>(8 * block, 50'000'000 / n));
  const double res_tol = 1e-10 * h.norm_bound();
  Rng rng(seed);
  Eigen::MatrixXd q(n, cap);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(cap, cap);

  Eigen::MatrixXd w(n, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i) w(i, j) = rng.normal();
  Eigen::Index m = 0;
  auto append = [&](Eigen::MatrixXd& x, Eigen::MatrixXd& b) {
    // Orthonormalize x against q and itself; b receives the block coefficients.
    b = Eigen::MatrixXd::Zero(block, block);
    for (Eigen::Index j = 0; j < block; ++j) {
      Eigen::VectorXd v = x.col(j);
      for (int pass = 0; pass < 2; ++pass) {
        if (m > 0) v -= q.leftCols(m) * (q.leftCols(m).transpose() * v);
      }
      double nv = v.norm();
      if (nv > 1e-10 * h.norm_bound()) {
        b(j, j) = nv;  // diagonal part; the off-diagonal part lives in the reorthogonalization
      } else {
        // Invariant subspace reached in this direction; continue with a fresh random vector.
        for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
        for (int pass = 0; pass < 2; ++pass) v -= q.leftCols(m) * (q.leftCols(m).transpose() * v);
        nv = v.norm();
      }
      q.col(m) = v / nv;
      ++m;
    }
  };
  Eigen::MatrixXd bcoef;
  append(w, bcoef);

  std::vector<double> ritz;
  Eigen::MatrixXd ritz_vec;
  std::size_t stable = 0, last_count = 0;
  Eigen::VectorXd xcol, ycol;
  while (true) {
    const Eigen::Index start = m - block;
    for (Eigen::Index j = 0; j < block; ++j) {
      xcol = q.col(start + j);
      h.apply(xcol, ycol);
      w.col(j) = ycol;
    }
    const Eigen::MatrixXd coef = reorthogonalize(q, m, w);
    t.block(0, start, m, block) = coef;
    t.block(start, 0, block, m) = coef.transpose();
    // Residual norms of Ritz pairs come from the part of H Q outside span(Q).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.topLeftCorner(m, m));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(block).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd resid = r * es.eigenvectors().bottomRows(block);
    std::vector<Eigen::Index> outside;
    bool all_converged = true;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double th = es.eigenvalues()[i];
      if (th >= lo && th <= hi) continue;
      outside.push_back(i);
      if (resid.col(i).norm() > res_tol) all_converged = false;
    }
    stable = (all_converged && outside.size() == last_count) ? stable + 1 : 0;
    last_count = outside.size();
    const bool full = m + block > cap;
    if ((stable >= 3 && m >= 10 * block) || full || m + block > n) {
      ritz.clear();
      ritz_vec.resize(n, static_cast<Eigen::Index>(outside.size()));
      for (std::size_t k = 0; k < outside.size(); ++k) {
        ritz.push_back(es.eigenvalues()[outside[k]]);
        ritz_vec.col(static_cast<Eigen::Index>(k)) = q.leftCols(m) * es.eigenvectors().col(outside[k]);
      }
      EigenPairs out = select_outside(ritz, ritz_vec, lo, hi, false);
      if (full && !all_converged) throw NumericalError("Lanczos basis exhausted before the discrete spectrum converged");
      return out;
    }
    append(w, bcoef);
  }
}

Vector solve_shifted(const Hamiltonian& h, cplx z, const Vector& b, double rel_tol) {
  if (z.imag() == 0.0) throw DomainError("shifted solve needs Im z != 0");
  const double bn = b.norm();
  Vector x = Vector::Zero(b.size());
  if (bn == 0.0) return x;
  Vector r = b, p = r, q;
  cplx rho = r.transpose() * r;
  const long maxit = 20000;
  for (long it = 0; it < maxit; ++it) {
    h.apply(p, q);
    q -= z * p;
    const cplx pq = p.transpose() * q;
    if (pq == cplx(0.0)) break;
    const cplx alpha = rho / pq;
    x += alpha * p;
    r -= alpha * q;
    if (r.norm() <= rel_tol * bn) {
      // Confirm with the true residual.
      Vector hx;
      h.apply(x, hx);
      hx -= z * x;
      if ((b - hx).norm() <= 10.0 * rel_tol * bn) return x;
      r = b - hx;
    }
    const cplx rho_next = r.transpose() * r;
    p = r + (rho_next / rho) * p;
    rho = rho_next;
  }
  throw NumericalError("shifted linear solve did not converge");
}

}  // namespace lattice
