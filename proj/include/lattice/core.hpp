#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lattice {

using cplx = std::complex<double>;

inline constexpr int kMaxDimension = 6;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Inputs outside an operation's domain. The message names the violated constraint.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computation that could not reach its requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(int dim);
  LatticeVector(std::initializer_list<long long> coords);
  explicit LatticeVector(std::span<const long long> coords);

  int dim() const { return dim_; }
  std::int32_t operator[](int j) const { return c_[j]; }
  std::int32_t& operator[](int j) { return c_[j]; }

  LatticeVector operator-() const;
  LatticeVector operator+(const LatticeVector& o) const;
  LatticeVector operator-(const LatticeVector& o) const;

  bool is_zero() const;
  long long coord_sum() const;
  int max_abs() const;
  // Sorted absolute values; the propagator kernel depends on nothing else.
  LatticeVector abs_sorted() const;
  std::string str() const;

  auto operator<=>(const LatticeVector&) const = default;

 private:
  int dim_ = 0;
  std::array<std::int32_t, kMaxDimension> c_{};
};

LatticeVector unit_vector(int dim, int axis, int sign = 1);

// The cube [-N,N]^d, enumerated lexicographically.
class Box {
 public:
  Box(int dim, int radius);
  int dim() const { return dim_; }
  int radius() const { return radius_; }
  std::size_t size() const { return size_; }
  bool contains(const LatticeVector& n) const;
  std::size_t index(const LatticeVector& n) const;
  LatticeVector point(std::size_t i) const;
  std::vector<LatticeVector> points() const;

 private:
  int dim_;
  int radius_;
  std::size_t size_;
};

class Sequence {
 public:
  Sequence() = default;
  explicit Sequence(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  void set(const LatticeVector& n, cplx value);
  void add(const LatticeVector& n, cplx value);
  cplx operator()(const LatticeVector& n) const;
  const std::map<LatticeVector, cplx>& entries() const { return v_; }
  std::vector<LatticeVector> support() const;
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  int radius() const;

  Sequence translated(const LatticeVector& shift) const;
  static Sequence delta(const LatticeVector& n, cplx value = 1.0);

 private:
  int dim_ = 0;
  std::map<LatticeVector, cplx> v_;
};

// rho_n = prod_j (1 + |n_j|)^{-1}
double rho_weight(const LatticeVector& n);

// Weighted norm (sum rho_n^{-p kappa} |f_n|^p)^{1/p}; p = kInf gives the weighted sup.
double norm(const Sequence& f, double p, double kappa = 0.0);

Sequence convolve(const Sequence& f, const Sequence& g);

double holder_conjugate(double p);

}  // namespace lattice
