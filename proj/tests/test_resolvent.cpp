#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "lattice/constants.hpp"
#include "lattice/random.hpp"
#include "lattice/resolvent.hpp"
#include "lattice/special.hpp"

using namespace lattice;

namespace {

// (2 pi)^{-d} int e^{i n.k} / (sum_j cos k_j - z) dk by the trapezoid rule; analytic for Im z != 0.
cplx torus_resolvent(const LatticeVector& n, cplx z, int nodes) {
  const int d = n.dim();
  std::vector<double> c(nodes);
  for (int j = 0; j < nodes; ++j) c[j] = std::cos(2.0 * std::numbers::pi * j / nodes);
  cplx acc = 0.0;
  std::vector<int> idx(d, 0);
  const long total = static_cast<long>(std::pow(nodes, d));
  for (long m = 0; m < total; ++m) {
    long r = m;
    double sum = 0.0, phase = 0.0;
    for (int j = 0; j < d; ++j) {
      idx[j] = static_cast<int>(r % nodes);
      r /= nodes;
      sum += c[idx[j]];
      phase += n[j] * 2.0 * std::numbers::pi * idx[j] / nodes;
    }
    acc += std::exp(cplx(0.0, phase)) / (sum - z);
  }
  return acc / static_cast<double>(total);
}

struct ExpintReference {
  double s;
  cplx w;
  cplx value;
};

// 20-digit values from an arbitrary-precision library.
const ExpintReference kExpint[] = {
    {1.5, {0.3, 0.0}, {0.63008198124703713653, 0.0}},
    {2.0, {0.0, 0.7}, {0.14214032590968874992, -0.57385739233146257525}},
    {1.0, {1.5, 0.2}, {0.095134040223670610531, -0.029119765127538774545}},
    {0.5, {0.0, 3.0}, {-0.088308773204278711846, 0.30635109441280545781}},
    {2.5, {0.0, 10.0}, {0.032034142318680846768, 0.089810845531444933666}},
    {3.0, {0.1, 5.0}, {0.14675515483761581036, 0.03014738849266311098}},
    {1.5, {0.0, 0.001}, {1.9207337873812012075, -0.077266546018786885865}},
    {4.0, {0.0, 50.0}, {0.0067320219980072647462, -0.018732577080265149061}},
    {1.0, {2.0, 0.0}, {0.048900510708061119567, 0.0}},
    {2.0, {0.0, 0.0}, {1.0, 0.0}},
};

// (Delta - z) R_0(., z) at n, which must be the delta at the origin.
cplx apply_shifted_laplacian(const ResolventTable& t, const LatticeVector& n, std::size_t p, cplx z) {
  cplx acc = -z * t(n, p);
  for (int j = 0; j < n.dim(); ++j) {
    acc += 0.5 * t(n + unit_vector(n.dim(), j), p);
    acc += 0.5 * t(n - unit_vector(n.dim(), j), p);
  }
  return acc;
}

std::vector<LatticeVector> ball(int d, int r) {
  std::vector<LatticeVector> out;
  const Box b(d, r);
  for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b.point(i));
  return out;
}

}  // namespace

TEST_CASE("generalized exponential integral against reference values") {
  for (const auto& r : kExpint) {
    CAPTURE(r.s);
    CAPTURE(r.w);
    CHECK(std::abs(expint_e(r.s, r.w) - r.value) < 1e-13 * std::max(1.0, std::abs(r.value)));
  }
  CHECK_THROWS_AS(expint_e(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(expint_e(1.5, cplx(-0.1, 1.0)), DomainError);
  CHECK_THROWS_AS(expint_e(0.0, 1.0), DomainError);
}

TEST_CASE("exponential integral recurrence s E_{s+1} = e^{-w} - w E_s") {
  Rng rng(41);
  for (int k = 0; k < 200; ++k) {
    const double s = rng.uniform(0.2, 6.0);
    const cplx w(rng.uniform(0.0, 3.0), rng.uniform(-40.0, 40.0));
    const cplx lhs = s * expint_e(s + 1.0, w);
    const cplx rhs = std::exp(-w) - w * expint_e(s, w);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(w * expint_e(s, w))));
  }
}

TEST_CASE("free resolvent off the axis matches torus quadrature") {
  const struct {
    LatticeVector n;
    cplx z;
  } cases[] = {{LatticeVector{0, 0, 0}, {0.5, 1.0}},  {LatticeVector{1, 0, -2}, {-2.0, -1.5}},
               {LatticeVector{3, 1, 0}, {4.0, 0.7}},  {LatticeVector{0, 0, 0, 0}, {1.0, 1.2}},
               {LatticeVector{2, 0, 1}, {-0.3, 2.0}}, {LatticeVector{1, 1, 0, 0, 0}, {0.0, 1.5}}};
  for (const auto& c : cases) {
    CAPTURE(c.n.str());
    CAPTURE(c.z);
    const SpectralPoint z = SpectralPoint::interior(c.z.real(), c.z.imag());
    const int nodes = c.n.dim() == 5 ? 20 : c.n.dim() == 4 ? 32 : 64;
    const cplx ref = torus_resolvent(c.n, c.z, nodes);
    CHECK(std::abs(r0_kernel(c.n, z).value - ref) < 1e-9);
  }
}

TEST_CASE("boundary values at the band edges match Watson-type integrals") {
  // R_0(0, 3 +- i0) in d = 3 is minus Watson's simple-cubic integral.
  const double watson = 0.50546201971732600605;
  CHECK(std::abs(r0_kernel(LatticeVector(3), SpectralPoint::plus_i0(3.0)).value + watson) < 1e-9);
  CHECK(std::abs(r0_kernel(LatticeVector(3), SpectralPoint::minus_i0(3.0)).value + watson) < 1e-9);
  // Outside the band: -sgn(lambda) int_0^inf e^{-|lambda| t} prod I_{n_j}(t) dt, times (-1)^{|n|} below the
  // band, evaluated in high precision and confirmed by torus quadrature.
  const struct {
    LatticeVector n;
    double lambda;
    double value;
  } cases[] = {{LatticeVector(3), 4.0, -0.28186297622543418},
               {LatticeVector(3), -5.0, 0.21429408276481925},
               {LatticeVector{1, 0, 0}, 3.5, -0.064555549546573062},
               {LatticeVector{2, 1, 0}, -4.0, -0.0031013998857674197},
               {LatticeVector(5), 5.5, -0.20231414566332487},
               {LatticeVector{1, 1, 0, 0}, 4.2, -0.016010334952413177}};
  for (const auto& c : cases) {
    CAPTURE(c.lambda);
    const cplx v = r0_kernel(c.n, SpectralPoint::minus_i0(c.lambda)).value;
    CHECK(std::abs(v - c.value) < 1e-10);
    CHECK(std::abs(v.imag()) < 1e-10);
  }
}

TEST_CASE("resolvent kernels solve (Delta - z) R = delta, also on the boundary") {
  const std::vector<SpectralPoint> zs{SpectralPoint::interior(0.3, 0.8), SpectralPoint::plus_i0(-1.0),
                                      SpectralPoint::minus_i0(2.2), SpectralPoint::plus_i0(3.0),
                                      SpectralPoint::minus_i0(0.0)};
  const auto offsets = ball(3, 3);
  const ResolventTable t(3, offsets, zs);
  for (std::size_t p = 0; p < zs.size(); ++p) {
    CAPTURE(zs[p].str());
    for (const auto& n : ball(3, 2)) {
      const cplx expected = n.is_zero() ? cplx(1.0) : cplx(0.0);
      CHECK(std::abs(apply_shifted_laplacian(t, n, p, zs[p].z()) - expected) < 1e-8);
    }
  }
}

TEST_CASE("upper and lower boundary values are complex conjugates") {
  for (double lam : {-2.5, -0.4, 1.0, 2.9}) {
    const cplx up = r0_kernel(LatticeVector{1, 0, 2}, SpectralPoint::plus_i0(lam)).value;
    const cplx down = r0_kernel(LatticeVector{1, 0, 2}, SpectralPoint::minus_i0(lam)).value;
    CHECK(std::abs(up - std::conj(down)) < 1e-12);
  }
}

TEST_CASE("boundary values are limits of interior values") {
  const LatticeVector n{1, 0, 0};
  const cplx edge = r0_kernel(n, SpectralPoint::plus_i0(1.3)).value;
  double last = kInf;
  for (double mu : {0.1, 0.01, 0.001}) {
    const double gap = std::abs(r0_kernel(n, SpectralPoint::interior(1.3, mu)).value - edge);
    CHECK(gap < last);
    last = gap;
  }
  CHECK(last < 1e-2);
}

TEST_CASE("kernel depends only on sorted absolute offsets") {
  const SpectralPoint z = SpectralPoint::plus_i0(0.7);
  const cplx a = r0_kernel(LatticeVector{2, -1, 0}, z).value;
  CHECK(std::abs(r0_kernel(LatticeVector{0, 1, -2}, z).value - a) < 1e-13);
  CHECK(std::abs(r0_kernel(LatticeVector{-1, 0, 2}, z).value - a) < 1e-13);
}

TEST_CASE("split parts add up and the table is job-count independent") {
  const std::vector<SpectralPoint> zs{SpectralPoint::plus_i0(-0.5), SpectralPoint::interior(1.0, 0.5)};
  const auto offsets = ball(3, 1);
  const ResolventTable one(3, offsets, zs, 1e-10, ResolventPart::both, 1);
  const ResolventTable three(3, offsets, zs, 1e-10, ResolventPart::both, 3);
  for (const auto& n : offsets)
    for (std::size_t p = 0; p < zs.size(); ++p) {
      const ResolventSplit s = one.split(n, p);
      CHECK(s.total() == s.r01 + s.r02);
      CHECK(s.total() == three(n, p));
      CHECK(std::abs(s.total() - r0_kernel(n, zs[p]).value) < 1e-9);
    }
}

TEST_CASE("boundary values are rejected below three dimensions") {
  CHECK_THROWS_AS(r0_kernel(LatticeVector{0, 0}, SpectralPoint::plus_i0(0.5)), DomainError);
  CHECK_NOTHROW(r0_kernel(LatticeVector{0, 0}, SpectralPoint::interior(0.5, 1.0)));
  CHECK_THROWS_AS(SpectralPoint::interior(0.5, 0.0), DomainError);
}

TEST_CASE("thresholds of the band") {
  CHECK(thresholds(3) == std::vector<double>{-3.0, -1.0, 1.0, 3.0});
  CHECK(thresholds(4) == std::vector<double>{-4.0, -2.0, 0.0, 2.0, 4.0});
}

TEST_CASE("short-time part is a contraction with Lipschitz dependence") {
  const auto recs = verify_r01_contraction(SpectralPoint::plus_i0(0.5), SpectralPoint::plus_i0(0.7), Box(3, 3));
  REQUIRE(recs.size() == 2);
  for (const auto& r : recs) CHECK(r.status == Status::pass);
}

TEST_CASE("long-time part satisfies its Holder and size bounds") {
  for (double tau : thresholds(3)) {
    CHECK(verify_r02_holder(LatticeVector{1, 0, 0}, SpectralPoint::plus_i0(tau - 0.01), SpectralPoint::plus_i0(tau + 0.01),
                            0.4)
              .status == Status::pass);
    CHECK(verify_r02_bound(LatticeVector{1, 1, 0}, SpectralPoint::plus_i0(tau)).status == Status::pass);
  }
  CHECK(verify_r02_holder(LatticeVector(3), SpectralPoint::plus_i0(1.0), SpectralPoint::plus_i0(1.0), 0.4).lhs == 0.0);
}

TEST_CASE("weighted resolvent bounds on random weights") {
  Rng rng(42);
  for (int k = 0; k < 3; ++k) {
    const Sequence u = random_sequence(rng, 3, 2, 3), v = random_sequence(rng, 3, 2, 3);
    const auto recs = verify_resolvent_bounds(u, v, 2.0, SpectralPoint::plus_i0(-1.0 + 0.01 * k),
                                              SpectralPoint::plus_i0(-0.98), 0.4);
    REQUIRE(recs.size() == 4);
    for (const auto& r : recs) CHECK(r.status == Status::pass);
  }
}

TEST_CASE("weighted resolvent entries are u R_0 v") {
  Sequence u(3), v(3);
  u.set(LatticeVector{0, 0, 0}, 2.0);
  u.set(LatticeVector{1, 0, 0}, cplx(0.0, 1.0));
  v.set(LatticeVector{0, 1, 0}, -1.0);
  const SpectralPoint z = SpectralPoint::interior(0.2, 0.9);
  const KernelMatrix y = weighted_resolvent(u, v, z);
  REQUIRE(y.entries.rows() == 2);
  REQUIRE(y.entries.cols() == 1);
  for (std::size_t i = 0; i < y.rows.size(); ++i) {
    const cplx expected = u(y.rows[i]) * r0_kernel(y.rows[i] - y.cols[0], z).value * v(y.cols[0]);
    CHECK(std::abs(y.entries(static_cast<Eigen::Index>(i), 0) - expected) < 1e-12);
  }
}

TEST_CASE("origin kernel at the top edge sits below the d = 3 bound constant") {
  const double c = 1.0 + c_d_gamma(3, 0.0) * gamma_big(2.0, 3, 0.0);
  CHECK(c == doctest::Approx(17.0));
  const double r0 = std::abs(r0_kernel(LatticeVector(3), SpectralPoint::plus_i0(3.0)).value);
  CHECK(r0 < c);
}
