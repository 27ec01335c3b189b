#include "lattice/constants.hpp"

#include <cmath>
#include <map>
#include <string>

namespace lattice {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void check_gamma(double gamma) { require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0,1]"); }

void check_p_gamma(double p, double gamma) {
  check_gamma(gamma);
  require(p > 2.0 + 2.0 * gamma, "exponent p must exceed 2 + 2 gamma");
}

}  // namespace

double gamma_big(double q, int d, double gamma) {
  require(d >= 3, "Gamma(q,d,gamma) needs d >= 3");
  require(q >= 2.0, "Gamma(q,d,gamma) needs q >= 2");
  check_gamma(gamma);
  if (q == 2.0) {
    if (d != 4) return 1.0;
    require(gamma < 1.0, "Gamma(2,4,gamma) needs gamma < 1");
    return 1.0 / (1.0 - gamma);
  }
  if (d == 3) {
    const double den = 12.0 - (5.0 + 2.0 * gamma) * q;
    require(den > 0.0, "Gamma(q,3,gamma) needs 12 - (5 + 2 gamma) q > 0");
    return std::pow(3.0 + 12.0 * (q - 2.0) / den, 3.0 * (q - 2.0) / q);
  }
  if (d == 4) {
    const double den = 8.0 - (3.0 + gamma) * q;
    require(den > 0.0, "Gamma(q,4,gamma) needs 8 - (3 + gamma) q > 0");
    const double inner = std::pow((5.0 * q - 2.0) / den, 1.0 + q / (4.0 * (q - 2.0)));
    return std::pow(3.0 + 2.0 * inner, 4.0 * (q - 2.0) / q);
  }
  const double dd = d;
  const double den = 6.0 * dd - (2.0 * dd + 1.0 + 3.0 * gamma) * q;
  require(den > 0.0, "Gamma(q,d,gamma) needs 6d - (2d + 1 + 3 gamma) q > 0");
  return std::pow(3.0 + 6.0 * dd * (q - 2.0) / den, dd * (q - 2.0) / q);
}

double c_d_gamma(int d, double gamma) {
  require(d >= 3, "C_d^gamma needs d >= 3");
  check_gamma(gamma);
  require(d > 2.0 + 2.0 * gamma, "C_d^gamma needs d > 2 + 2 gamma");
  if (d == 3) {
    require(gamma < 0.5, "C_3^gamma needs gamma < 1/2");
    return 8.0 / (1.0 - 2.0 * gamma) + 8.0;
  }
  if (d == 4) {
    require(gamma < 1.0, "C_4^gamma needs gamma < 1");
    return 4.0 / (1.0 - gamma);
  }
  return 14.0 * std::pow(2.0, d / 4.0) / (d - 4.0);
}

double gamma_dq(int d, double q) {
  require(d >= 3, "gamma_{d,q} needs d >= 3");
  require(q >= 2.0, "gamma_{d,q} needs q >= 2");
  if (d == 3) return 6.0 / q - 2.5;
  return 2.0 * d / q - (2.0 * d + 1.0) / 3.0;
}

double c_a(double a) {
  require(a > 0.5, "C_a needs a > 1/2");
  return 3.0 * (1.0 + 2.0 * a / (2.0 * a - 1.0));
}

double c_p_gamma(double p, double gamma) {
  check_p_gamma(p, gamma);
  if (p < 4.0) return 8.0 * (1.0 / (p - 2.0 - 2.0 * gamma) + 1.0 / (4.0 - p));
  if (p == 4.0) {
    require(gamma < 1.0, "C_4^gamma needs gamma < 1");
    return 4.0 / (1.0 - gamma);
  }
  return 14.0 * std::pow(2.0, p / 4.0) / (p - 4.0);
}

double kappa_p_gamma(long n, double p, double gamma) {
  check_p_gamma(p, gamma);
  if (n == 0) return 1.0;
  const double m = std::abs(static_cast<double>(n));
  if (p < 4.0) return std::pow(m, -0.5 + (1.0 + gamma) / p);
  if (p == 4.0) return std::pow(m, -(1.0 - gamma) / 4.0) * std::pow(1.0 + std::log(m), 0.25);
  return std::pow(m, -1.0 / 3.0 + 1.0 / (3.0 * p) + gamma / p);
}

double kappa_tilde(const LatticeVector& n, int d, double gamma) {
  require(n.dim() == d, "kappa_tilde: lattice point has the wrong dimension");
  double k = 1.0;
  for (int j = 0; j < d; ++j) k *= kappa_p_gamma(n[j], d, gamma);
  return k;
}

double r_p_gamma(double p, double gamma) {
  check_p_gamma(p, gamma);
  if (p <= 4.0) return 2.0 * p / (p - 2.0 - 2.0 * gamma);
  return 3.0 * p / (p - 1.0 - 3.0 * gamma);
}

double kappa_norm_bound(double p, double gamma, double r) {
  const double rp = r_p_gamma(p, gamma);
  require(r > rp, "kappa norm bound needs r > r_p^gamma");
  if (std::isinf(r)) {
    if (p != 4.0) return 1.0;
    require(gamma < 1.0, "sup of kappa_4^gamma needs gamma < 1");
    return 1.0 / (1.0 - gamma);
  }
  if (p != 4.0) return std::pow(3.0 + 2.0 / (r / rp - 1.0), 1.0 / r);
  return std::pow(3.0 + 2.0 * std::pow((1.0 + r / 4.0) / (r / rp - 1.0), 1.0 + r / 4.0), 1.0 / r);
}

double d_qd(double q, int d) {
  require(q >= 2.0, "D_{q,d} needs q >= 2");
  require(d >= 3, "D_{q,d} needs d >= 3");
  if (q == 2.0) return 1.0;
  return std::pow(q / 2.0, d * (q - 2.0) / q);
}

AdmissibilityRanges admissibility(int d) {
  require(d >= 3, "admissibility ranges need d >= 3");
  const double dd = d;
  AdmissibilityRanges r{};
  r.weight_q = {2.0, d == 3 ? 12.0 / 5.0 : 6.0 * dd / (2.0 * dd + 1.0)};
  r.potential_p = {1.0, d == 3 ? 6.0 / 5.0 : 3.0 * dd / (2.0 * dd + 1.0)};
  if (d >= 5) {
    r.lipschitz_q = Range{2.0, 6.0 * dd / (2.0 * dd + 4.0)};
    r.finiteness_p = Range{1.0, 3.0 * dd / (2.0 * dd + 4.0)};
  }
  return r;
}

double small_coupling_threshold(double p, int d) {
  require(admissibility(d).potential_p.contains(p), "potential exponent p outside its admissible range");
  return 1.0 / (1.0 + c_d_gamma(d, 0.0) * gamma_big(2.0 * p, d, 0.0));
}

double constant_by_name(const std::string& name, const std::vector<double>& v) {
  auto need = [&](std::size_t k) {
    if (v.size() != k) throw DomainError(name + " takes " + std::to_string(k) + " parameter(s)");
  };
  auto as_int = [](double x) {
    if (x != std::floor(x)) throw DomainError("expected an integer parameter");
    return static_cast<int>(x);
  };
  if (name == "gamma_big") { need(3); return gamma_big(v[0], as_int(v[1]), v[2]); }
  if (name == "c_d_gamma") { need(2); return c_d_gamma(as_int(v[0]), v[1]); }
  if (name == "gamma_dq") { need(2); return gamma_dq(as_int(v[0]), v[1]); }
  if (name == "c_a") { need(1); return c_a(v[0]); }
  if (name == "c_p_gamma") { need(2); return c_p_gamma(v[0], v[1]); }
  if (name == "kappa_p_gamma") { need(3); return kappa_p_gamma(as_int(v[0]), v[1], v[2]); }
  if (name == "r_p_gamma") { need(2); return r_p_gamma(v[0], v[1]); }
  if (name == "kappa_norm_bound") { need(3); return kappa_norm_bound(v[0], v[1], v[2]); }
  if (name == "d_qd") { need(2); return d_qd(v[0], as_int(v[1])); }
  if (name == "small_coupling_threshold") { need(2); return small_coupling_threshold(v[0], as_int(v[1])); }
  throw DomainError("unknown constant '" + name + "'");
}

}  // namespace lattice
