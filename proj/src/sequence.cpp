#include "lattice/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace lattice {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDimension)
    throw DomainError("lattice dimension must lie in [1, " + std::to_string(kMaxDimension) + "]");
}

std::int32_t narrow(long long x) {
  if (x > std::numeric_limits<std::int32_t>::max() || x < -std::numeric_limits<std::int32_t>::max())
    throw DomainError("lattice coordinate exceeds 2^31-1 in magnitude");
  return static_cast<std::int32_t>(x);
}

}  // namespace

LatticeVector::LatticeVector(int dim) : dim_(dim) { check_dim(dim); }

LatticeVector::LatticeVector(std::initializer_list<long long> coords)
    : LatticeVector(std::span<const long long>(coords.begin(), coords.size())) {}

LatticeVector::LatticeVector(std::span<const long long> coords) : dim_(static_cast<int>(coords.size())) {
  check_dim(dim_);
  for (int j = 0; j < dim_; ++j) c_[j] = narrow(coords[j]);
}

LatticeVector LatticeVector::operator-() const {
  LatticeVector r(*this);
  for (int j = 0; j < dim_; ++j) r.c_[j] = -c_[j];
  return r;
}

LatticeVector LatticeVector::operator+(const LatticeVector& o) const {
  if (o.dim_ != dim_) throw DomainError("dimension mismatch in lattice addition");
  LatticeVector r(*this);
  for (int j = 0; j < dim_; ++j) r.c_[j] = narrow(static_cast<long long>(c_[j]) + o.c_[j]);
  return r;
}

LatticeVector LatticeVector::operator-(const LatticeVector& o) const {
  if (o.dim_ != dim_) throw DomainError("dimension mismatch in lattice subtraction");
  LatticeVector r(*this);
  for (int j = 0; j < dim_; ++j) r.c_[j] = narrow(static_cast<long long>(c_[j]) - o.c_[j]);
  return r;
}

bool LatticeVector::is_zero() const {
  return std::all_of(c_.begin(), c_.begin() + dim_, [](std::int32_t x) { return x == 0; });
}

long long LatticeVector::coord_sum() const {
  long long s = 0;
  for (int j = 0; j < dim_; ++j) s += c_[j];
  return s;
}

int LatticeVector::max_abs() const {
  int m = 0;
  for (int j = 0; j < dim_; ++j) m = std::max(m, std::abs(c_[j]));
  return m;
}

LatticeVector LatticeVector::abs_sorted() const {
  LatticeVector r(*this);
  for (int j = 0; j < dim_; ++j) r.c_[j] = std::abs(c_[j]);
  std::sort(r.c_.begin(), r.c_.begin() + dim_);
  return r;
}

std::string LatticeVector::str() const {
  std::string s = "(";
  for (int j = 0; j < dim_; ++j) {
    if (j) s += ",";
    s += std::to_string(c_[j]);
  }
  return s + ")";
}

LatticeVector unit_vector(int dim, int axis, int sign) {
  LatticeVector e(dim);
  e[axis] = sign;
  return e;
}

Box::Box(int dim, int radius) : dim_(dim), radius_(radius), size_(1) {
  check_dim(dim);
  if (radius < 0) throw DomainError("box radius must be nonnegative");
  for (int j = 0; j < dim; ++j) size_ *= static_cast<std::size_t>(2 * radius + 1);
}

bool Box::contains(const LatticeVector& n) const {
  return n.dim() == dim_ && n.max_abs() <= radius_;
}

std::size_t Box::index(const LatticeVector& n) const {
  const std::size_t w = 2 * radius_ + 1;
  std::size_t i = 0;
  for (int j = 0; j < dim_; ++j) i = i * w + static_cast<std::size_t>(n[j] + radius_);
  return i;
}

LatticeVector Box::point(std::size_t i) const {
  const std::size_t w = 2 * radius_ + 1;
  LatticeVector n(dim_);
  for (int j = dim_ - 1; j >= 0; --j) {
    n[j] = static_cast<std::int32_t>(i % w) - radius_;
    i /= w;
  }
  return n;
}

std::vector<LatticeVector> Box::points() const {
  std::vector<LatticeVector> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(point(i));
  return out;
}

void Sequence::set(const LatticeVector& n, cplx value) {
  if (n.dim() != dim_) throw DomainError("sequence dimension mismatch");
  if (value == cplx(0.0))
    v_.erase(n);
  else
    v_[n] = value;
}

void Sequence::add(const LatticeVector& n, cplx value) { set(n, (*this)(n) + value); }

cplx Sequence::operator()(const LatticeVector& n) const {
  auto it = v_.find(n);
  return it == v_.end() ? cplx(0.0) : it->second;
}

std::vector<LatticeVector> Sequence::support() const {
  std::vector<LatticeVector> s;
  s.reserve(v_.size());
  for (const auto& [n, _] : v_) s.push_back(n);
  return s;
}

int Sequence::radius() const {
  int r = 0;
  for (const auto& [n, _] : v_) r = std::max(r, n.max_abs());
  return r;
}

Sequence Sequence::translated(const LatticeVector& shift) const {
  Sequence out(dim_);
  for (const auto& [n, x] : v_) out.set(n + shift, x);
  return out;
}

Sequence Sequence::delta(const LatticeVector& n, cplx value) {
  Sequence s(n.dim());
  s.set(n, value);
  return s;
}

double rho_weight(const LatticeVector& n) {
  double r = 1.0;
  for (int j = 0; j < n.dim(); ++j) r /= 1.0 + std::abs(n[j]);
  return r;
}

double norm(const Sequence& f, double p, double kappa) {
  if (!(p >= 1.0)) throw DomainError("norm exponent p must be >= 1");
  if (!(kappa >= 0.0)) throw DomainError("weight exponent kappa must be >= 0");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& [n, x] : f.entries()) m = std::max(m, std::pow(rho_weight(n), -kappa) * std::abs(x));
    return m;
  }
  // Scale by the largest term so large p neither overflows nor underflows.
  std::vector<double> a;
  a.reserve(f.size());
  double amax = 0.0;
  for (const auto& [n, x] : f.entries()) {
    a.push_back(std::pow(rho_weight(n), -kappa) * std::abs(x));
    amax = std::max(amax, a.back());
  }
  if (amax == 0.0) return 0.0;
  double s = 0.0;
  for (double v : a) s += std::pow(v / amax, p);
  return amax * std::pow(s, 1.0 / p);
}

Sequence convolve(const Sequence& f, const Sequence& g) {
  if (f.dim() != g.dim()) throw DomainError("convolution of sequences of different dimension");
  std::map<LatticeVector, cplx> acc;
  for (const auto& [m, x] : f.entries())
    for (const auto& [k, y] : g.entries()) acc[m + k] += x * y;
  Sequence out(f.dim());
  for (const auto& [n, v] : acc) out.set(n, v);
  return out;
}

double holder_conjugate(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

}  // namespace lattice
