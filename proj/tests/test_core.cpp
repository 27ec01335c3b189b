#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lattice/core.hpp"
#include "lattice/inequalities.hpp"
#include "lattice/linalg.hpp"
#include "lattice/quadrature.hpp"
#include "lattice/random.hpp"
#include "lattice/verdict.hpp"

using namespace lattice;

TEST_CASE("lattice vectors add, negate and sort absolute values") {
  const LatticeVector a{3, -1, 2}, b{-1, 4, 0};
  CHECK((a + b) == LatticeVector{2, 3, 2});
  CHECK((a - b) == LatticeVector{4, -5, 2});
  CHECK(-a == LatticeVector{-3, 1, -2});
  CHECK(a.abs_sorted() == LatticeVector{1, 2, 3});
  CHECK(a.coord_sum() == 4);
  CHECK(a.max_abs() == 3);
  CHECK(LatticeVector(2).is_zero());
  CHECK_THROWS_AS((a + LatticeVector{1, 2}), DomainError);
  CHECK_THROWS_AS(LatticeVector(0), DomainError);
  CHECK_THROWS_AS(LatticeVector{1LL << 40}, DomainError);
}

TEST_CASE("box enumeration and indexing are inverse") {
  const Box box(3, 2);
  CHECK(box.size() == 125);
  for (std::size_t i = 0; i < box.size(); ++i) CHECK(box.index(box.point(i)) == i);
  CHECK(box.contains(LatticeVector{2, -2, 0}));
  CHECK_FALSE(box.contains(LatticeVector{3, 0, 0}));
}

TEST_CASE("weighted norms match hand computations") {
  Sequence f(1);
  f.set(LatticeVector{0}, 3.0);
  f.set(LatticeVector{2}, cplx(0.0, -4.0));
  CHECK(norm(f, 1.0) == doctest::Approx(7.0));
  CHECK(norm(f, 2.0) == doctest::Approx(5.0));
  CHECK(norm(f, kInf) == doctest::Approx(4.0));
  // rho_2 = 1/3, so the weight rho^{-kappa} multiplies the second entry by 3^{kappa}.
  CHECK(norm(f, 1.0, 1.0) == doctest::Approx(3.0 + 12.0));
  CHECK(norm(f, kInf, 0.5) == doctest::Approx(4.0 * std::sqrt(3.0)));
  CHECK(rho_weight(LatticeVector{1, -2}) == doctest::Approx(1.0 / 6.0));
  CHECK(holder_conjugate(1.0) == kInf);
  CHECK(holder_conjugate(4.0) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("convolution of two deltas is a shifted delta") {
  const Sequence a = Sequence::delta(LatticeVector{1, 0}, 2.0);
  const Sequence b = Sequence::delta(LatticeVector{0, -3}, cplx(0.0, 1.0));
  const Sequence c = convolve(a, b);
  CHECK(c.size() == 1);
  CHECK(c(LatticeVector{1, -3}) == cplx(0.0, 2.0));
}

TEST_CASE("convolution is commutative on random sequences") {
  Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    const Sequence f = random_sequence(rng, 2, 3, 5), g = random_sequence(rng, 2, 3, 4);
    const Sequence fg = convolve(f, g), gf = convolve(g, f);
    for (const auto& [n, x] : fg.entries()) CHECK(std::abs(x - gf(n)) < 1e-14);
  }
}

TEST_CASE("seeded generator is reproducible and forks are independent") {
  Rng a(5), b(5);
  for (int k = 0; k < 10; ++k) CHECK(a.uniform() == b.uniform());
  Rng c = a.fork(0), d = a.fork(1);
  CHECK(c.uniform() != d.uniform());
}

TEST_CASE("verdict status follows lhs <= rhs (1 + slack)") {
  CHECK(inequality("x", anchor::young, 1.0, 1.0).status == Status::pass);
  CHECK(inequality("x", anchor::young, 1.0 + 1e-11, 1.0).status == Status::pass);
  CHECK(inequality("x", anchor::young, 1.0 + 1e-9, 1.0).status == Status::fail);
  CHECK(inequality("x", anchor::young, std::nan(""), 1.0).status == Status::fail);
  CHECK(inequality("x", anchor::young, 0.5, 1.0).margin == doctest::Approx(0.5));
  CHECK(descriptive("x", anchor::young, 5.0, 1.0).status == Status::descriptive);
  CHECK(is_known_anchor(anchor::lim_abs));
  CHECK_FALSE(is_known_anchor("an unknown statement"));
}

TEST_CASE("Young inequality holds on random sequences") {
  Rng rng(3);
  const double exps[][3] = {{1.0, 1.0, kInf}, {2.0, 1.0, 2.0}, {1.5, 1.5, 1.5}};
  for (const auto& e : exps)
    for (int k = 0; k < 30; ++k) {
      Rng r = rng.fork(k);
      const auto rec = verify_young(random_sequence(r, 2, 3, 6), random_sequence(r, 2, 3, 6),
                                    random_sequence(r, 2, 3, 6), e[0], e[1], e[2]);
      CHECK(rec.status == Status::pass);
    }
  CHECK_THROWS_AS(verify_young(Sequence(1), Sequence(1), Sequence(1), 2.0, 2.0, 2.0), DomainError);
}

TEST_CASE("Young inequality is sharp for nonnegative constant-phase deltas") {
  // f, g, h single deltas aligned so the sum equals the product of norms.
  const Sequence f = Sequence::delta(LatticeVector{0}, 2.0);
  const Sequence g = Sequence::delta(LatticeVector{0}, 3.0);
  const Sequence h = Sequence::delta(LatticeVector{0}, 5.0);
  const auto rec = verify_young(f, g, h, 1.0, 1.0, kInf);
  CHECK(rec.lhs == doctest::Approx(30.0));
  CHECK(rec.rhs == doctest::Approx(30.0));
}

TEST_CASE("Riesz-Thorin probe passes for an l1 kernel") {
  Rng rng(9);
  const Sequence g = random_sequence(rng, 1, 2, 4);
  CHECK(verify_riesz_thorin(g, {1.0, 1.0}, {2.0, 2.0}, 0.5, 20, 4).status == Status::pass);
  CHECK_THROWS_AS(verify_riesz_thorin(g, {1.0, 1.0}, {2.0, 2.0}, 1.5, 20, 4), DomainError);
}

TEST_CASE("summation estimate: partial sums grow to the truncation-independent value") {
  const auto small = summation_estimate(2.0, 0.5, 4.0, 200);
  const auto large = summation_estimate(2.0, 0.5, 4.0, 2000);
  CHECK(large.partial_sum >= small.partial_sum);
  // The rigorous tail at the small truncation covers the difference.
  CHECK(large.partial_sum <= small.partial_sum + small.tail_bound);
  CHECK(verify_summation_estimate(2.0, 0.5, 4.0, 2000).status == Status::pass);
  CHECK(large.proof_bound > large.statement_bound);
  CHECK_THROWS_AS(summation_estimate(1.0, 0.5, 4.0), DomainError);
}

TEST_CASE("quadrature integrates smooth and oscillatory functions within its error bound") {
  const auto r1 = integrate([](double x) { return cplx(std::sin(x)); }, 0.0, std::numbers::pi);
  CHECK(std::abs(r1.value - 2.0) <= std::max(r1.error_bound, 1e-14));
  QuadratureOptions opts;
  opts.max_panel = std::numbers::pi;
  const auto r2 = integrate([](double x) { return std::exp(cplx(0.0, 40.0 * x)) * std::exp(-x); }, 0.0, 10.0, opts);
  const cplx exact = (1.0 - std::exp(cplx(-10.0, 400.0))) / cplx(1.0, -40.0);
  CHECK(std::abs(r2.value - exact) <= std::max(r2.error_bound, 1e-14));
  CHECK(std::abs(r2.value - exact) < 1e-11);
}

TEST_CASE("quadrature on a half line uses the tail majorant") {
  TailMajorant tail{[](double t) { return std::exp(-t); }, 0.0};
  const auto r = integrate([](double x) { return cplx(std::exp(-x) * std::cos(x)); }, 0.0, kInf, {}, tail);
  CHECK(std::abs(r.value - 0.5) <= std::max(r.error_bound, 1e-13));
}

TEST_CASE("operator and Hilbert-Schmidt norms of a diagonal matrix") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = cplx(0.0, -4.0);
  m(2, 2) = 1.0;
  CHECK(operator_norm(m) == doctest::Approx(4.0));
  CHECK(hs_norm(m) == doctest::Approx(std::sqrt(26.0)));
}

TEST_CASE("parallel_for fills every slot once regardless of job count") {
  for (unsigned jobs : {1u, 3u}) {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
}
