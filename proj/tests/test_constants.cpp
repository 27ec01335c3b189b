#include <cmath>

#include "doctest.h"
#include "lattice/constants.hpp"

using namespace lattice;
using doctest::Approx;

TEST_CASE("gamma_big: printed instances and an independent evaluation") {
  CHECK(gamma_big(2.0, 3, 0.7) == 1.0);
  CHECK(gamma_big(2.0, 5, 0.0) == 1.0);
  CHECK(gamma_big(2.0, 4, 0.5) == Approx(2.0));
  CHECK(gamma_big(2.1, 5, 0.0) == Approx(std::pow(3.0 + 3.0 / 6.9, 0.5 / 2.1)));
  CHECK(gamma_big(2.1, 5, 0.0) == Approx(1.3416).epsilon(1e-4));
}

TEST_CASE("gamma_big rejects triples with a nonpositive denominator") {
  CHECK_THROWS_AS(gamma_big(2.4, 3, 0.0), DomainError);   // 12 - 5 q = 0
  CHECK_THROWS_AS(gamma_big(8.0 / 3.0, 4, 0.0), DomainError);
  CHECK_THROWS_AS(gamma_big(2.0, 4, 1.0), DomainError);
  CHECK_THROWS_AS(gamma_big(1.5, 3, 0.0), DomainError);
  CHECK_THROWS_AS(gamma_big(2.0, 2, 0.0), DomainError);
}

TEST_CASE("gamma_big is nondecreasing in gamma for q > 2") {
  for (int d : {3, 4, 5, 7})
    for (double q : {2.05, 2.1, 2.2}) {
      double last = 0.0;
      for (double g = 0.0; g <= 1.0; g += 0.05) {
        double v;
        try {
          v = gamma_big(q, d, g);
        } catch (const DomainError&) {
          break;
        }
        CHECK(v >= last);
        last = v;
      }
    }
}

TEST_CASE("c_d_gamma closed forms") {
  CHECK(c_d_gamma(3, 0.0) == Approx(16.0));
  CHECK(c_d_gamma(4, 0.5) == Approx(8.0));
  CHECK(c_d_gamma(8, 0.3) == Approx(14.0));
  CHECK_THROWS_AS(c_d_gamma(3, 0.5), DomainError);
  CHECK_THROWS_AS(c_d_gamma(4, 1.0), DomainError);
  for (int k = 0; k < 10; ++k) CHECK(c_d_gamma(3, 0.049 * k) >= c_d_gamma(3, 0.0));
  for (int k = 0; k < 20; ++k) CHECK(c_d_gamma(4, 0.049 * k) >= c_d_gamma(4, 0.0));
}

TEST_CASE("gamma_dq values") {
  CHECK(gamma_dq(3, 2.0) == Approx(0.5));
  CHECK(gamma_dq(4, 2.0) == Approx(1.0));
  CHECK(gamma_dq(5, 2.0) == Approx(4.0 / 3.0));
}

TEST_CASE("c_a values and limit") {
  CHECK(c_a(1.0) == Approx(9.0));
  CHECK(c_a(0.75) == Approx(12.0));
  double last = c_a(0.6);
  for (double a = 1.0; a < 1e6; a *= 3.0) {
    const double v = c_a(a);
    CHECK(v < last);
    CHECK(v > 6.0);
    last = v;
  }
  CHECK(c_a(1e9) == Approx(6.0).epsilon(1e-8));
  CHECK_THROWS_AS(c_a(0.5), DomainError);
}

TEST_CASE("c_p_gamma and kappa_p_gamma") {
  CHECK(c_p_gamma(4.0, 0.0) == Approx(4.0));
  CHECK(kappa_p_gamma(0, 3.0, 0.0) == 1.0);
  CHECK(kappa_p_gamma(0, 6.0, 0.5) == 1.0);
  CHECK(kappa_p_gamma(8, 6.0, 0.0) == Approx(std::pow(8.0, -5.0 / 18.0)));
  CHECK(kappa_p_gamma(8, 6.0, 0.0) == Approx(0.5613).epsilon(1e-4));
  CHECK(kappa_p_gamma(-8, 6.0, 0.0) == kappa_p_gamma(8, 6.0, 0.0));
  CHECK_THROWS_AS(c_p_gamma(3.0, 0.5), DomainError);
  for (double p : {3.0, 5.0, 6.0})
    for (long n = 1; n < 2000; n += 37) {
      const double k = kappa_p_gamma(n, p, 0.0);
      CHECK(k > 0.0);
      CHECK(k <= 1.0);
    }
}

TEST_CASE("kappa_tilde is the product of per-coordinate values") {
  CHECK(kappa_tilde(LatticeVector(3), 3, 0.0) == 1.0);
  CHECK(kappa_tilde(LatticeVector{5, 0, 0}, 3, 0.0) == Approx(std::pow(5.0, -1.0 / 6.0)));
  const LatticeVector n{1, 2, 3, 4, 5};
  double prod = 1.0;
  for (int j = 0; j < 5; ++j) prod *= kappa_p_gamma(n[j], 5.0, 0.0);
  CHECK(kappa_tilde(n, 5, 0.0) == Approx(prod));
}

TEST_CASE("r_p_gamma values") {
  CHECK(r_p_gamma(3.0, 0.0) == Approx(6.0));
  CHECK(r_p_gamma(6.0, 0.0) == Approx(18.0 / 5.0));
  CHECK(kappa_norm_bound(3.0, 0.0, kInf) == 1.0);
  CHECK(kappa_norm_bound(4.0, 0.5, kInf) == Approx(2.0));
  CHECK_THROWS_AS(kappa_norm_bound(3.0, 0.0, 6.0), DomainError);
}

TEST_CASE("kappa norm bound dominates direct partial sums") {
  const double cases[][3] = {{3.0, 0.0, 7.0}, {3.0, 0.25, 20.0}, {5.0, 0.0, 4.0}, {6.0, 0.5, 8.0},
                             {4.0, 0.0, 9.0}, {4.0, 0.5, 30.0}, {3.5, 0.1, 12.0}};
  for (const auto& c : cases) {
    const double p = c[0], g = c[1], r = c[2];
    CAPTURE(p);
    CAPTURE(g);
    CAPTURE(r);
    double s = 1.0;
    for (long n = 1; n <= 2'000'000; ++n) s += 2.0 * std::pow(kappa_p_gamma(n, p, g), r);
    CHECK(std::pow(s, 1.0 / r) <= kappa_norm_bound(p, g, r));
  }
}

TEST_CASE("d_qd values and continuity at q = 2") {
  CHECK(d_qd(2.0, 5) == 1.0);
  CHECK(d_qd(4.0, 3) == Approx(std::pow(2.0, 1.5)));
  CHECK(d_qd(2.0 + 1e-9, 4) == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("admissibility ranges") {
  const auto a3 = admissibility(3);
  CHECK(a3.weight_q.lo == 2.0);
  CHECK(a3.weight_q.hi == Approx(12.0 / 5.0));
  CHECK(a3.potential_p.hi == Approx(6.0 / 5.0));
  CHECK_FALSE(a3.lipschitz_q.has_value());
  CHECK(admissibility(4).weight_q.hi == Approx(8.0 / 3.0));
  const auto a5 = admissibility(5);
  CHECK(a5.lipschitz_q->hi == Approx(30.0 / 14.0));
  CHECK(a5.finiteness_p->hi == Approx(15.0 / 14.0));
  CHECK(a5.finiteness_p->contains(1.0));
  CHECK_FALSE(a5.finiteness_p->contains(15.0 / 14.0));
}

TEST_CASE("weight-q bound follows from r_d^0 for d = 3..10") {
  for (int d = 3; d <= 10; ++d) {
    const double r = r_p_gamma(d, 0.0);
    CHECK(admissibility(d).weight_q.hi == Approx(2.0 * r / (r - 1.0)));
  }
}

TEST_CASE("small-coupling thresholds") {
  CHECK(small_coupling_threshold(1.0, 3) == Approx(1.0 / 17.0));
  CHECK(small_coupling_threshold(1.0, 4) == Approx(1.0 / 5.0));
  CHECK(small_coupling_threshold(1.05, 5) ==
        Approx(1.0 / (1.0 + c_d_gamma(5, 0.0) * gamma_big(2.1, 5, 0.0))));
  CHECK_THROWS_AS(small_coupling_threshold(1.2, 3), DomainError);
}

TEST_CASE("constant lookup by name") {
  CHECK(constant_by_name("gamma_big", {2, 3, 0}) == 1.0);
  CHECK(constant_by_name("c_d_gamma", {3, 0}) == Approx(16.0));
  CHECK_THROWS_AS(constant_by_name("gamma_big", {2, 3}), DomainError);
  CHECK_THROWS_AS(constant_by_name("no_such_constant", {}), DomainError);
}
