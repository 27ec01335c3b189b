#include <cmath>
#include <numbers>

#include "lattice/special.hpp"

namespace lattice {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

cplx expint_series(double s, cplx w) {
  const bool integer = s == std::floor(s);
  const long n = static_cast<long>(s);
  cplx sum = 0.0, term = 1.0;  // term = (-w)^k / k!
  for (long k = 0; k < 400; ++k) {
    if (!(integer && k == n - 1)) sum += term / (static_cast<double>(k) + 1.0 - s);
    term *= -w / static_cast<double>(k + 1);
    if (k + 1.0 > s && std::abs(term) < 1e-18 * std::max(std::abs(sum), 1e-300)) break;
  }
  cplx lead;
  if (integer) {
    double psi = -kEulerGamma;
    for (long j = 1; j < n; ++j) psi += 1.0 / static_cast<double>(j);
    lead = std::pow(-w, static_cast<double>(n - 1)) / std::tgamma(static_cast<double>(n)) * (psi - std::log(w));
  } else {
    lead = std::tgamma(1.0 - s) * std::exp((s - 1.0) * std::log(w));
  }
  return lead - sum;
}

// Modified Lentz evaluation of the continued fraction
// E_s(w) = e^{-w} / (w + s - 1 s / (w + s + 2 - 2 (s + 1) / (w + s + 4 - ...))).
cplx expint_fraction(double s, cplx w) {
  constexpr double tiny = 1e-300;
  cplx b = w + s;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (long i = 1; i < 200000; ++i) {
    const double an = -static_cast<double>(i) * (s - 1.0 + static_cast<double>(i));
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-w);
  }
  throw NumericalError("exponential integral continued fraction did not converge");
}

}  // namespace

cplx expint_e(double s, cplx w) {
  if (!(s > 0.0)) throw DomainError("E_s needs s > 0");
  const double aw = std::abs(w);
  if (w.real() < -1e-14 * aw) throw DomainError("E_s needs Re w >= 0");
  if (aw == 0.0) {
    if (!(s > 1.0)) throw DomainError("E_s(0) needs s > 1");
    return 1.0 / (s - 1.0);
  }
  if (w.real() < 0.0) w.real(0.0);
  return aw <= 2.0 ? expint_series(s, w) : expint_fraction(s, w);
}

}  // namespace lattice
