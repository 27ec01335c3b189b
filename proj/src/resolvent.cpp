#include "lattice/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "lattice/bessel.hpp"
#include "lattice/special.hpp"

namespace lattice {

SpectralPoint SpectralPoint::interior(double lambda, double mu) {
  if (mu == 0.0) throw DomainError("an interior spectral point needs mu != 0");
  return {lambda, mu, Boundary::interior};
}
SpectralPoint SpectralPoint::plus_i0(double lambda) { return {lambda, 0.0, Boundary::plus_i0}; }
SpectralPoint SpectralPoint::minus_i0(double lambda) { return {lambda, 0.0, Boundary::minus_i0}; }

SpectralPoint SpectralPoint::conj() const {
  switch (boundary) {
    case Boundary::plus_i0: return minus_i0(lambda);
    case Boundary::minus_i0: return plus_i0(lambda);
    case Boundary::interior: break;
  }
  return interior(lambda, -mu);
}

std::string SpectralPoint::str() const {
  char buf[64];
  switch (boundary) {
    case Boundary::plus_i0: std::snprintf(buf, sizeof buf, "%.17g+i0", lambda); break;
    case Boundary::minus_i0: std::snprintf(buf, sizeof buf, "%.17g-i0", lambda); break;
    case Boundary::interior: std::snprintf(buf, sizeof buf, "%.17g%+.17gi", lambda, mu); break;
  }
  return buf;
}

bool same_closed_half_plane(const SpectralPoint& a, const SpectralPoint& b) { return a.upper() == b.upper(); }

std::vector<double> thresholds(int d) {
  std::vector<double> out;
  for (int k = -d; k <= d; k += 2) out.push_back(k);
  return out;
}

namespace {

constexpr int kMinCutoff = 40;

// Scaled Hankel coefficients c_k = a_k(m) T^{-k}, with
// a_k(m) = prod_{j<=k} (4m^2 - (2j-1)^2) / (k! 8^k), truncated after K terms.
struct HankelPlan {
  int terms = 0;               // K
  std::vector<double> c;       // c_0 .. c_{K+1}
  double remainder = 0.0;      // sqrt(2/pi) (|c_K| + |c_{K+1}|)
  double majorant = 0.0;       // sqrt(2/pi) sum_{k<=K+1} |c_k|
};

bool plan_hankel(long m, double cutoff, double target, HankelPlan& plan) {
  const double root = std::sqrt(2.0 / std::numbers::pi);
  const double m4 = 4.0 * static_cast<double>(m) * static_cast<double>(m);
  std::vector<double> c{1.0};
  auto grow = [&](std::size_t upto) {
    while (c.size() <= upto) {
      const double k = static_cast<double>(c.size());
      c.push_back(c.back() * (m4 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * cutoff));
    }
  };
  // Remainder bounds of the expansion need at least m/2 + 1 terms in each of P and Q.
  for (std::size_t k = static_cast<std::size_t>(m) + 4; k < 600; ++k) {
    grow(k + 1);
    const double rem = root * (std::abs(c[k]) + std::abs(c[k + 1]));
    if (rem <= target) {
      plan.terms = static_cast<int>(k);
      plan.c.assign(c.begin(), c.begin() + static_cast<long>(k) + 2);
      plan.remainder = rem;
      double s = 0.0;
      for (double x : plan.c) s += std::abs(x);
      plan.majorant = root * s;
      return true;
    }
    // Past the smallest term the expansion only gets worse.
    if (k > static_cast<std::size_t>(m) + 4 && std::abs(c[k + 1]) > std::abs(c[k]) && std::abs(c[k]) > std::abs(c[k - 1]))
      return false;
  }
  return false;
}

struct TailPlan {
  double cutoff = 0.0;
  std::vector<HankelPlan> orders;  // indexed by m = 0..nmax
};

TailPlan plan_tail(int d, long nmax, double tol) {
  double cutoff = std::max<double>(kMinCutoff, 0.5 * static_cast<double>(nmax * nmax) + 20.0);
  for (int attempt = 0; attempt < 12; ++attempt, cutoff *= 1.5) {
    TailPlan plan{cutoff, std::vector<HankelPlan>(static_cast<std::size_t>(nmax) + 1)};
    // Majorant of the other factors, then the remainder that keeps the total within tol/4.
    double b = 0.0;
    bool ok = true;
    for (long m = 0; m <= nmax && ok; ++m) {
      HankelPlan p;
      ok = plan_hankel(m, cutoff, 1e-3, p);
      b = std::max(b, p.majorant);
    }
    if (!ok) continue;
    const double scale = std::pow(std::max(b, 1.0), d - 1) * std::pow(cutoff, 1.0 - d / 2.0);
    const double target = tol / (4.0 * d * scale);
    for (long m = 0; m <= nmax && ok; ++m) ok = plan_hankel(m, cutoff, target, plan.orders[static_cast<std::size_t>(m)]);
    if (ok) return plan;
  }
  throw NumericalError("no cutoff found where the Hankel expansion reaches the requested tolerance");
}

struct PanelRange {
  double a;
  double b;
  std::size_t panels;
};

// Kronrod sums and |Kronrod - Gauss| totals over one range of equal panels. Panels are
// grouped into a fixed number of chunks so the summation order does not depend on `jobs`.
struct RangeResult {
  std::vector<cplx> value;    // [kernel * nz + z], of int e^{-izt} prod J
  std::vector<double> error;
  double bessel_error = 0.0;  // largest table error over the nodes
};

RangeResult integrate_range(const PanelRange& range, const std::vector<std::vector<long>>& orders, long nmax,
                            const std::vector<cplx>& zs, unsigned jobs) {
  const std::size_t nk = orders.size(), nz = zs.size(), cells = nk * nz;
  const KronrodRule& rule = kronrod21();
  constexpr std::size_t kChunks = 16;
  const std::size_t chunks = std::min(kChunks, range.panels);
  std::vector<RangeResult> parts(chunks);
  const double width = (range.b - range.a) / static_cast<double>(range.panels);
  parallel_for(chunks, jobs, [&](std::size_t c) {
    RangeResult& out = parts[c];
    out.value.assign(cells, 0.0);
    out.error.assign(cells, 0.0);
    std::vector<cplx> kron(cells), gauss(cells);
    std::vector<double> prod(nk);
    std::vector<cplx> phase(nz);
    const std::size_t lo = c * range.panels / chunks, hi = (c + 1) * range.panels / chunks;
    for (std::size_t p = lo; p < hi; ++p) {
      const double a = range.a + width * static_cast<double>(p);
      const double half = 0.5 * width, mid = a + half;
      std::fill(kron.begin(), kron.end(), cplx(0.0));
      std::fill(gauss.begin(), gauss.end(), cplx(0.0));
      for (std::size_t i = 0; i < 21; ++i) {
        const double t = mid + half * rule.x[i];
        const BesselTable tab = eval_j_table(nmax, t);
        out.bessel_error = std::max(out.bessel_error, tab.abs_error);
        for (std::size_t k = 0; k < nk; ++k) {
          double v = 1.0;
          for (long m : orders[k]) v *= tab[m];
          prod[k] = v;
        }
        for (std::size_t z = 0; z < nz; ++z) phase[z] = std::exp(cplx(0.0, -t) * zs[z]);
        const double wk = rule.wk[i] * half, wg = rule.wg[i] * half;
        for (std::size_t k = 0; k < nk; ++k) {
          cplx* kr = &kron[k * nz];
          cplx* ga = &gauss[k * nz];
          for (std::size_t z = 0; z < nz; ++z) {
            const cplx f = prod[k] * phase[z];
            kr[z] += wk * f;
            ga[z] += wg * f;
          }
        }
      }
      for (std::size_t j = 0; j < cells; ++j) {
        out.value[j] += kron[j];
        out.error[j] += std::abs(kron[j] - gauss[j]);
      }
    }
  });
  RangeResult total{std::vector<cplx>(cells, 0.0), std::vector<double>(cells, 0.0), 0.0};
  for (const RangeResult& part : parts) {
    for (std::size_t j = 0; j < cells; ++j) {
      total.value[j] += part.value[j];
      total.error[j] += part.error[j];
    }
    total.bessel_error = std::max(total.bessel_error, part.bessel_error);
  }
  return total;
}

// Integral over [T, inf) of e^{-izt} prod_j J_{m_j}(t) from the truncated Hankel expansions:
// prod_j J = (2/(pi t))^{d/2} 2^{-d} sum_sigma e^{i sum sigma_j chi_j} prod_j sum_k (sigma_j i)^k a_k t^{-k},
// chi_j = t - (2 m_j + 1) pi / 4. Each term integrates to T^{1-d/2} E_{d/2+k}(-i(S - z)T).
class TailEvaluator {
 public:
  TailEvaluator(int d, const TailPlan& plan, const std::vector<std::vector<long>>& orders)
      : d_(d), plan_(plan) {
    const std::size_t nsig = std::size_t{1} << d;
    for (const auto& ord : orders) {
      Kernel k;
      k.bound = 0.0;
      for (int j = 0; j < d; ++j) {
        double others = 1.0;
        for (int i = 0; i < d; ++i)
          if (i != j) others *= hp(ord[static_cast<std::size_t>(i)]).majorant;
        const HankelPlan& h = hp(ord[static_cast<std::size_t>(j)]);
        k.bound += h.remainder * others / (d / 2.0 + h.terms - 1.0);
      }
      k.bound *= std::pow(plan.cutoff, 1.0 - d / 2.0);
      for (std::size_t s = 0; s < nsig; ++s) {
        std::vector<cplx> poly{1.0};
        int big_s = 0;
        double shift = 0.0;
        for (int j = 0; j < d; ++j) {
          const int sg = (s >> j) & 1U ? -1 : 1;
          const long m = ord[static_cast<std::size_t>(j)];
          big_s += sg;
          shift += sg * (2.0 * m + 1.0) * std::numbers::pi / 4.0;
          const HankelPlan& h = hp(m);
          std::vector<cplx> next(poly.size() + static_cast<std::size_t>(h.terms) - 1, 0.0);
          for (std::size_t a = 0; a < poly.size(); ++a)
            for (int b = 0; b < h.terms; ++b)
              next[a + static_cast<std::size_t>(b)] += poly[a] * i_power(static_cast<long long>(sg) * b) * h.c[static_cast<std::size_t>(b)];
          poly = std::move(next);
        }
        max_len_ = std::max(max_len_, poly.size());
        k.terms.push_back({(big_s + d) / 2, std::polar(1.0, -shift), std::move(poly)});
      }
      kernels_.push_back(std::move(k));
    }
  }

  // Values F[(S + d)/2][k] = T^{1-d/2} E_{d/2+k}(-i(S - z)T) for one z.
  std::vector<std::vector<cplx>> table(cplx z) const {
    const double cut = plan_.cutoff;
    std::vector<std::vector<cplx>> f(static_cast<std::size_t>(d_) + 1);
    const double scale = std::pow(cut, 1.0 - d_ / 2.0);
    for (int s = -d_; s <= d_; s += 2) {
      const cplx w = cplx(0.0, -1.0) * (static_cast<double>(s) - z) * cut;
      auto& row = f[static_cast<std::size_t>((s + d_) / 2)];
      for (std::size_t k = 0; k < max_len_; ++k) row.push_back(scale * expint_e(d_ / 2.0 + static_cast<double>(k), w));
    }
    return f;
  }

  // Value and certified error for kernel k with the table of one z.
  std::pair<cplx, double> evaluate(std::size_t k, const std::vector<std::vector<cplx>>& f) const {
    const Kernel& ker = kernels_[k];
    cplx total = 0.0;
    double mag = 0.0;
    for (const Term& t : ker.terms) {
      cplx s = 0.0;
      const auto& row = f[static_cast<std::size_t>(t.s_index)];
      for (std::size_t j = 0; j < t.poly.size(); ++j) {
        const cplx x = t.poly[j] * row[j];
        s += x;
        mag += std::abs(x);
      }
      total += t.phase * s;
    }
    const double pre = std::pow(2.0 / std::numbers::pi, d_ / 2.0) * std::pow(2.0, -d_);
    return {pre * total, ker.bound + 1e-14 * pre * mag};
  }

 private:
  struct Term {
    int s_index;
    cplx phase;
    std::vector<cplx> poly;
  };
  struct Kernel {
    double bound = 0.0;
    std::vector<Term> terms;
  };
  const HankelPlan& hp(long m) const { return plan_.orders[static_cast<std::size_t>(m)]; }

  int d_;
  const TailPlan& plan_;
  std::vector<Kernel> kernels_;
  std::size_t max_len_ = 1;
};

// Kernels for lower half-plane points (mu <= 0), [kernel * nz + z].
std::vector<ResolventSplit> compute_lower(int d, const std::vector<std::vector<long>>& orders,
                                          const std::vector<cplx>& zs, double tol, ResolventPart part,
                                          unsigned jobs, double& cutoff_out) {
  const std::size_t nk = orders.size(), nz = zs.size();
  long nmax = 0;
  for (const auto& o : orders)
    for (long m : o) nmax = std::max(nmax, m);
  double omega = d;
  for (const cplx& z : zs) omega = std::max(omega, d + std::abs(z.real()) + std::abs(z.imag()));

  std::optional<TailPlan> plan;
  if (part == ResolventPart::both) plan = plan_tail(d, nmax, tol);
  const double cutoff = plan ? plan->cutoff : 1.0;
  cutoff_out = cutoff;

  double h = std::min(1.0, 4.0 / omega);
  RangeResult head, body;
  for (int refine = 0;; ++refine) {
    head = integrate_range({0.0, 1.0, static_cast<std::size_t>(std::ceil(1.0 / h))}, orders, nmax, zs, jobs);
    double worst = *std::max_element(head.error.begin(), head.error.end());
    if (plan) {
      body = integrate_range({1.0, cutoff, static_cast<std::size_t>(std::ceil((cutoff - 1.0) / h))}, orders, nmax,
                             zs, jobs);
      worst = std::max(worst, *std::max_element(body.error.begin(), body.error.end()));
    }
    if (worst <= 0.25 * tol) break;
    if (refine == 4) throw NumericalError("resolvent quadrature did not reach the requested tolerance");
    h *= 0.5;
  }

  std::vector<ResolventSplit> out(nk * nz);
  std::vector<cplx> prefactor(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    long total = 0;
    for (long m : orders[k]) total += m;
    prefactor[k] = cplx(0.0, -1.0) * i_power(total);
  }
  for (std::size_t k = 0; k < nk; ++k)
    for (std::size_t z = 0; z < nz; ++z) {
      ResolventSplit& s = out[k * nz + z];
      s.r01 = prefactor[k] * head.value[k * nz + z];
      s.err01 = head.error[k * nz + z] + d * head.bessel_error;
    }
  if (!plan) return out;

  const TailEvaluator tail(d, *plan, orders);
  parallel_for(nz, jobs, [&](std::size_t z) {
    const auto f = tail.table(zs[z]);
    for (std::size_t k = 0; k < nk; ++k) {
      const auto [value, err] = tail.evaluate(k, f);
      ResolventSplit& s = out[k * nz + z];
      s.r02 = prefactor[k] * (body.value[k * nz + z] + value);
      s.err02 = body.error[k * nz + z] + d * body.bessel_error * (cutoff - 1.0) + err;
    }
  });
  return out;
}

}  // namespace

ResolventTable::ResolventTable(int dim, std::span<const LatticeVector> offsets, std::span<const SpectralPoint> points,
                               double tol, ResolventPart part, unsigned jobs)
    : dim_(dim), part_(part) {
  if (dim < 1 || dim > kMaxDimension) throw DomainError("dimension out of range");
  if (!(tol > 0.0)) throw DomainError("resolvent tolerance must be positive");
  std::vector<std::vector<long>> orders;
  for (const LatticeVector& n : offsets) {
    if (n.dim() != dim) throw DomainError("offset has the wrong dimension");
    const LatticeVector key = n.abs_sorted();
    if (kernel_index_.contains(key)) continue;
    kernel_index_.emplace(key, orders.size());
    std::vector<long> o;
    for (int j = 0; j < dim; ++j) o.push_back(key[j]);
    orders.push_back(std::move(o));
  }
  std::map<SpectralPoint, std::size_t> lower_index;
  std::vector<cplx> zs;
  for (const SpectralPoint& p : points) {
    if (p.boundary == Boundary::interior && p.mu == 0.0)
      throw DomainError("an interior spectral point needs mu != 0");
    if (p.boundary != Boundary::interior && dim < 3)
      throw DomainError("boundary values of the free resolvent need d >= 3");
    const SpectralPoint lower = p.upper() ? p.conj() : p;
    auto [it, fresh] = lower_index.emplace(lower, zs.size());
    if (fresh) zs.push_back(lower.z());
    point_lower_.push_back(it->second);
    point_conj_.push_back(p.upper());
  }
  lower_count_ = zs.size();
  if (orders.empty() || zs.empty()) return;
  values_ = compute_lower(dim, orders, zs, tol, part, jobs, cutoff_);
  for (const ResolventSplit& s : values_)
    max_error_ = std::max(max_error_, part == ResolventPart::both ? s.error() : s.err01);
}

ResolventSplit ResolventTable::split(const LatticeVector& n, std::size_t point) const {
  const auto it = kernel_index_.find(n.abs_sorted());
  if (it == kernel_index_.end()) throw DomainError("offset " + n.str() + " is not in the resolvent table");
  if (point >= point_lower_.size()) throw DomainError("spectral point index out of range");
  ResolventSplit s = values_[it->second * lower_count_ + point_lower_[point]];
  if (point_conj_[point]) {
    s.r01 = std::conj(s.r01);
    s.r02 = std::conj(s.r02);
  }
  return s;
}

ResolventSplit r0_split(const LatticeVector& n, const SpectralPoint& z, double tol) {
  const ResolventTable table(n.dim(), std::span(&n, 1), std::span(&z, 1), tol);
  return table.split(n, 0);
}

QuadratureResult r0_kernel(const LatticeVector& n, const SpectralPoint& z, double tol) {
  const ResolventSplit s = r0_split(n, z, tol);
  QuadratureResult q;
  q.value = s.total();
  q.error_bound = s.error();
  q.rigorous = false;
  return q;
}

std::vector<LatticeVector> difference_set(std::span<const LatticeVector> rows, std::span<const LatticeVector> cols) {
  std::map<LatticeVector, bool> seen;
  for (const auto& n : rows)
    for (const auto& m : cols) seen.emplace((n - m).abs_sorted(), true);
  std::vector<LatticeVector> out;
  for (const auto& [k, unused] : seen) out.push_back(k);
  return out;
}

KernelMatrix weighted_resolvent(const Sequence& u, const Sequence& v, const ResolventTable& table, std::size_t point,
                                ResolventPart part) {
  KernelMatrix k;
  k.rows = u.support();
  k.cols = v.support();
  k.entries.resize(static_cast<Eigen::Index>(k.rows.size()), static_cast<Eigen::Index>(k.cols.size()));
  for (std::size_t i = 0; i < k.rows.size(); ++i)
    for (std::size_t j = 0; j < k.cols.size(); ++j) {
      const ResolventSplit s = table.split(k.rows[i] - k.cols[j], point);
      const cplx r = part == ResolventPart::both ? s.total() : s.r01;
      k.entry_error = std::max(k.entry_error, part == ResolventPart::both ? s.error() : s.err01);
      k.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = u(k.rows[i]) * r * v(k.cols[j]);
    }
  return k;
}

KernelMatrix weighted_resolvent(const Sequence& u, const Sequence& v, const SpectralPoint& z, double tol) {
  if (u.dim() != v.dim()) throw DomainError("weights of different dimension");
  const auto rows = u.support(), cols = v.support();
  const auto offsets = difference_set(rows, cols);
  const ResolventTable table(u.dim(), offsets, std::span(&z, 1), tol);
  return weighted_resolvent(u, v, table, 0);
}

}  // namespace lattice
