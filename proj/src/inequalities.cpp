#include "lattice/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lattice/random.hpp"

namespace lattice {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

Params exponent_params(double p, double s, double r) {
  return {{"p", p}, {"s", s}, {"r", r}};
}

}  // namespace

VerdictRecord verify_young(const Sequence& f, const Sequence& g, const Sequence& h, double p, double s, double r) {
  if (p < 1 || s < 1 || r < 1) throw DomainError("Young exponents must be >= 1");
  if (std::abs(inv(p) + inv(s) + inv(r) - 2.0) > 1e-12) throw DomainError("Young exponents need 1/p + 1/s + 1/r = 2");
  cplx sum = 0.0;
  for (const auto& [n, fn] : f.entries())
    for (const auto& [m, hm] : h.entries()) sum += fn * g(n - m) * hm;
  const double rhs = norm(f, p) * norm(g, s) * norm(h, r);
  auto params = exponent_params(p, s, r);
  params["support_f"] = static_cast<std::int64_t>(f.size());
  return inequality("young", anchor::young, std::abs(sum), rhs, std::move(params));
}

VerdictRecord verify_riesz_thorin(const Sequence& g, ExponentPair e0, ExponentPair e1, double t, int samples,
                                  std::uint64_t seed) {
  if (!(t > 0 && t < 1)) throw DomainError("interpolation parameter must lie in (0,1)");
  for (double x : {e0.p, e0.q, e1.p, e1.q})
    if (x < 1) throw DomainError("interpolation endpoints must be >= 1");
  const int dim = g.dim();
  const int radius = std::max(3, g.radius() + 1);
  Rng rng(seed);

  std::vector<Sequence> pool;
  pool.push_back(Sequence::delta(LatticeVector(dim)));
  // Phase-aligned against g: attains |g|_1 in the sup norm at the origin.
  Sequence aligned(dim);
  for (const auto& [m, x] : g.entries()) aligned.set(-m, std::conj(x) / std::abs(x));
  if (!aligned.empty()) pool.push_back(aligned);
  for (int k = 0; k < samples; ++k) pool.push_back(random_sequence(rng, dim, radius, 1 + k % 12));

  auto ratio = [&](const Sequence& f, double p, double q) {
    const double d = norm(f, p);
    return d > 0 ? norm(convolve(g, f), q) / d : 0.0;
  };
  double m0 = 0.0, m1 = 0.0;
  for (const auto& f : pool) {
    m0 = std::max(m0, ratio(f, e0.p, e0.q));
    m1 = std::max(m1, ratio(f, e1.p, e1.q));
  }
  const double pt_inv = (1 - t) * inv(e0.p) + t * inv(e1.p);
  const double qt_inv = (1 - t) * inv(e0.q) + t * inv(e1.q);
  const double pt = pt_inv == 0 ? kInf : 1 / pt_inv, qt = qt_inv == 0 ? kInf : 1 / qt_inv;
  double worst = 0.0;
  Rng fresh = rng.fork(1);
  for (int k = 0; k < samples; ++k) worst = std::max(worst, ratio(random_sequence(fresh, dim, radius, 1 + k % 12), pt, qt));
  const double bound = std::pow(m0, 1 - t) * std::pow(m1, t);
  Params params{{"p0", e0.p}, {"q0", e0.q}, {"p1", e1.p}, {"q1", e1.q}, {"t", t},
                {"samples", static_cast<std::int64_t>(samples)}, {"sampled_M0", m0}, {"sampled_M1", m1}};
  auto rec = inequality("riesz_thorin", anchor::riesz_thorin, worst, bound, std::move(params));
  rec.note = "sampled endpoint norms are lower estimates; this is a necessary-condition probe";
  return rec;
}

SummationReport summation_estimate(double alpha, double beta, double t, long truncation) {
  if (!(alpha > 1)) throw DomainError("summation estimate needs alpha > 1");
  if (!(beta > 0 && beta < 1)) throw DomainError("summation estimate needs 0 < beta < 1");
  if (!(t >= 1)) throw DomainError("summation estimate needs t >= 1");
  long m = truncation > 0 ? truncation : (alpha >= 1.5 ? 10000 : 20000);
  m = std::max<long>(m, static_cast<long>(std::ceil(4 * t + 4)));

  std::vector<double> a(2 * m + 1), c(4 * m + 1);
  for (long n = -m; n <= m; ++n) a[n + m] = std::pow(1.0 + std::abs(n), -alpha);
  for (long w = -2 * m; w <= 2 * m; ++w) c[w + 2 * m] = std::pow(1.0 + std::abs(std::abs(static_cast<double>(w)) - t), -beta);
  double s = 0.0;
  for (long i = 0; i <= 2 * m; ++i) {
    double row = 0.0;
    // n - m' = i - j, offset by 2m in c.
    const double* cw = c.data() + i + 2 * m;
    for (long j = 0; j <= 2 * m; ++j) row += a[j] * cw[-j];
    s += a[i] * row;
  }

  // Pairs with |n| > M (or |m| > M). For |k| <= |n|/2 the third factor is at most
  // (|n|/4)^{-beta} once M >= 4t+4; for |k| > |n|/2 the first factor is summed.
  const double big_a = (alpha + 1) / (alpha - 1);  // sum over Z of (1+|k|)^{-alpha}
  const double dm = static_cast<double>(m);
  const double near = big_a * std::pow(4.0, beta) * std::pow(dm, 1 - alpha - beta) / (alpha + beta - 1);
  const double far = std::pow(2.0, alpha) * alpha / (alpha - 1) * std::pow(dm, 2 - 2 * alpha) / (2 * alpha - 2);
  const double tail = 4.0 * (near + far);

  const double p = (1 + beta) / (1 - beta), r = (1 + beta) / (2 * beta);
  auto constant = [&](double k) {
    return 2 * alpha * alpha / ((alpha - 1) * (alpha - 1)) +
           4 * alpha / ((alpha - 1) * std::pow(p * alpha - 1, 1 / p)) * std::pow(k / (1 - beta), 1 / r);
  };
  SummationReport rep;
  rep.partial_sum = s;
  rep.tail_bound = tail;
  rep.truncation = m;
  rep.statement_bound = constant(16) * std::pow(t, -beta);
  rep.proof_bound = constant(24) * std::pow(t, -beta);
  rep.empirical_constant = s * std::pow(t, beta);
  return rep;
}

VerdictRecord verify_summation_estimate(double alpha, double beta, double t, long truncation) {
  const SummationReport r = summation_estimate(alpha, beta, t, truncation);
  Params params{{"alpha", alpha},
                {"beta", beta},
                {"t", t},
                {"truncation", static_cast<std::int64_t>(r.truncation)},
                {"partial_sum", r.partial_sum},
                {"tail_bound", r.tail_bound},
                {"empirical_constant", r.empirical_constant},
                {"bound_with_24", r.proof_bound}};
  auto rec = inequality("summation_estimate", anchor::summation, r.partial_sum + r.tail_bound, r.statement_bound,
                        std::move(params));
  rec.note = "lhs is the partial sum plus a rigorous tail bound; rhs uses the constant 16/(1-beta)";
  return rec;
}

}  // namespace lattice
