#include <cfloat>
#include <cmath>
#include <numbers>
#include <string>

#include "lattice/bessel.hpp"

namespace lattice {

namespace {

constexpr double kEps = DBL_EPSILON;
constexpr double kMaxArgument = 1e6;

// log of (t/2)^m / m!, which dominates |J_m(t)| for real t.
double log_majorant(double m, double t) { return m * std::log(0.5 * t) - std::lgamma(m + 1.0); }

CertifiedValue series(long m, double t) {
  double term = 1.0;
  for (long j = 1; j <= m; ++j) term *= 0.5 * t / static_cast<double>(j);
  const double x = -0.25 * t * t;
  double sum = term, abssum = std::abs(term);
  for (long k = 1;; ++k) {
    term *= x / (static_cast<double>(k) * static_cast<double>(k + m));
    sum += term;
    abssum += std::abs(term);
    const double next = std::abs(term * x / (static_cast<double>(k + 1) * static_cast<double>(k + 1 + m)));
    // Once the terms decrease they alternate in sign, so the first omitted one bounds the rest.
    if (next < std::abs(term) && (next <= 1e-18 * std::abs(sum) || next < 1e-300))
      return {sum, next + 4.0 * kEps * abssum};
  }
}

// Hankel expansion J_m(t) = sqrt(2/(pi t)) (P cos chi - Q sin chi), chi = t - (2m+1) pi/4.
// With at least m/2 + 1 terms in each of P and Q, each remainder is bounded by its first
// omitted term.
CertifiedValue hankel(long m, double t) {
  const double mu = 4.0 * static_cast<double>(m) * static_cast<double>(m);
  double p = 1.0, q = 0.0, a = 1.0, abssum = 1.0;
  const long kmin = m + 3;
  double rem = kInf;
  for (long k = 1; k < 4000; ++k) {
    const double odd = 2.0 * static_cast<double>(k) - 1.0;
    a *= (mu - odd * odd) / (8.0 * static_cast<double>(k) * t);
    const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0)
      p += sgn * a;
    else
      q += sgn * a;
    abssum += std::abs(a);
    if (k >= kmin) {
      const double odd2 = 2.0 * static_cast<double>(k) + 1.0, odd3 = odd2 + 2.0;
      const double a1 = a * (mu - odd2 * odd2) / (8.0 * static_cast<double>(k + 1) * t);
      const double a2 = a1 * (mu - odd3 * odd3) / (8.0 * static_cast<double>(k + 2) * t);
      if (std::abs(a1) > std::abs(a) && std::abs(a) > 1e-17) break;  // diverging before converging
      if (std::abs(a1) + std::abs(a2) <= 1e-18) {
        rem = std::abs(a1) + std::abs(a2);
        break;
      }
    }
  }
  const int r = static_cast<int>((2 * (m % 4) + 1) % 8);  // phase = r pi / 4
  const double phi = r * std::numbers::pi / 4.0;
  const double c = std::cos(t), s = std::sin(t), cp = std::cos(phi), sp = std::sin(phi);
  const double cchi = c * cp + s * sp, schi = s * cp - c * sp;
  const double amp = std::sqrt(2.0 / (std::numbers::pi * t));
  const double v = amp * (p * cchi - q * schi);
  return {v, amp * (rem + 6.0 * kEps * abssum)};
}

long miller_start(long nmax, double t) {
  const double x = std::max(static_cast<double>(nmax), t);
  long m = static_cast<long>(std::ceil(x)) + 12;
  while (log_majorant(static_cast<double>(m), t) > -48.0) m += std::max(2L, m / 64);
  return m + (m % 2);
}

// Backward recurrence normalised by J_0^2 + 2 sum J_k^2 = 1, sign fixed by J_0 + 2 sum J_2k = 1.
BesselTable miller(long nmax, double t) {
  const long start = miller_start(nmax, t);
  std::vector<double> out(static_cast<std::size_t>(nmax + 1), 0.0);
  double next = 0.0, cur = 1.0, nsq = 0.0, ssum = 0.0;
  for (long k = start;; --k) {
    if (k <= nmax) out[static_cast<std::size_t>(k)] = cur;
    if (k == 0) {
      nsq += cur * cur;
      ssum += cur;
      break;
    }
    nsq += 2.0 * cur * cur;
    if (k % 2 == 0) ssum += 2.0 * cur;
    const double prev = (2.0 * static_cast<double>(k) / t) * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e140) {
      constexpr double s = 1e-140;
      cur *= s;
      next *= s;
      nsq *= s * s;
      ssum *= s;
      for (long j = k; j <= nmax; ++j) out[static_cast<std::size_t>(j)] *= s;
    }
  }
  double f = 1.0 / std::sqrt(nsq);
  if (ssum < 0) f = -f;
  for (double& v : out) v *= f;
  BesselTable tab;
  tab.values = std::move(out);
  tab.abs_error = 4.0 * kEps * std::sqrt(static_cast<double>(start)) + 1e-20;
  return tab;
}

}  // namespace

double BesselTable::at(long k) const {
  const long m = k < 0 ? -k : k;
  if (m >= static_cast<long>(values.size())) return 0.0;
  const double v = values[static_cast<std::size_t>(m)];
  return (k < 0 && (m % 2)) ? -v : v;
}

cplx i_power(long long m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

CertifiedValue eval_j(long n, double t, double tol) {
  if (std::abs(n) > 1000000L || !(std::abs(t) <= kMaxArgument))
    throw DomainError("eval_j needs |n| <= 1e6 and |t| <= 1e6");
  const long m = n < 0 ? -n : n;
  double sign = (n < 0 && (m % 2)) ? -1.0 : 1.0;
  if (t < 0) {
    t = -t;
    if (m % 2) sign = -sign;
  }
  CertifiedValue r;
  if (t == 0.0) {
    r = {m == 0 ? 1.0 : 0.0, 0.0};
  } else if (m > 0 && log_majorant(static_cast<double>(m), t) < -690.0) {
    r = {0.0, std::exp(log_majorant(static_cast<double>(m), t))};
  } else if (t <= 4.0) {
    r = series(m, t);
  } else if (t >= 25.0 && t >= 0.5 * static_cast<double>(m) * static_cast<double>(m)) {
    r = hankel(m, t);
    if (!(r.abs_error <= tol)) {
      const BesselTable tab = miller(m, t);
      r = {tab.values.back(), tab.abs_error};
    }
  } else {
    const BesselTable tab = miller(m, t);
    r = {tab.values.back(), tab.abs_error};
  }
  if (!(r.abs_error <= tol))
    throw NumericalError("J_" + std::to_string(n) + "(" + std::to_string(t) +
                         "): tolerance unattainable in double precision");
  r.value *= sign;
  return r;
}

BesselTable eval_j_table(long nmax, double t) {
  if (nmax < 0) throw DomainError("eval_j_table needs nmax >= 0");
  if (!(std::abs(t) <= kMaxArgument)) throw DomainError("eval_j_table needs |t| <= 1e6");
  if (t == 0.0) {
    BesselTable tab;
    tab.values.assign(static_cast<std::size_t>(nmax + 1), 0.0);
    tab.values[0] = 1.0;
    return tab;
  }
  BesselTable tab = miller(nmax, std::abs(t));
  if (t < 0)
    for (long k = 1; k <= nmax; k += 2) tab.values[static_cast<std::size_t>(k)] = -tab.values[static_cast<std::size_t>(k)];
  return tab;
}

}  // namespace lattice
