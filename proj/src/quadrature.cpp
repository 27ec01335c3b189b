#include "lattice/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <vector>

namespace lattice {

const KronrodRule& kronrod21() {
  static const KronrodRule rule = [] {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto ka = gauss_kronrod<double, 21>::abscissa();
    const auto kw = gauss_kronrod<double, 21>::weights();
    const auto gw = gauss<double, 10>::weights();
    KronrodRule r{};
    // Index 10 is the centre; 10 +- i are the mirrored nodes.
    for (int i = 0; i <= 10; ++i) {
      r.x[10 + i] = ka[i];
      r.x[10 - i] = -ka[i];
      r.wk[10 + i] = r.wk[10 - i] = kw[i];
      const double g = (i % 2 == 1) ? gw[(i - 1) / 2] : 0.0;
      r.wg[10 + i] = r.wg[10 - i] = g;
    }
    return r;
  }();
  return rule;
}

namespace {

struct Panel {
  double a, b;
  cplx value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel eval_panel(const std::function<cplx(double)>& f, double a, double b) {
  const auto& r = kronrod21();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx k = 0.0, g = 0.0;
  for (int i = 0; i < 21; ++i) {
    const cplx y = f(c + h * r.x[i]);
    k += r.wk[i] * y;
    g += r.wg[i] * y;
  }
  k *= h;
  g *= h;
  return {a, b, k, std::abs(k - g)};
}

QuadratureResult integrate_finite(const std::function<cplx(double)>& f, double a, double b,
                                  const QuadratureOptions& opts, double abs_tol) {
  QuadratureResult res;
  if (a == b) return res;
  const double len = b - a;
  long panels = 1;
  if (std::isfinite(opts.max_panel)) panels = std::max(1L, static_cast<long>(std::ceil(len / opts.max_panel)));
  std::priority_queue<Panel> queue;
  cplx total = 0.0;
  double err = 0.0;
  for (long i = 0; i < panels; ++i) {
    const double lo = a + len * static_cast<double>(i) / panels;
    const double hi = (i + 1 == panels) ? b : a + len * static_cast<double>(i + 1) / panels;
    Panel p = eval_panel(f, lo, hi);
    res.evaluations += 21;
    total += p.value;
    err += p.error;
    queue.push(p);
  }
  auto target = [&] { return std::max(abs_tol, opts.rel_tol * std::abs(total)); };
  while (err > target() && !queue.empty()) {
    if (res.evaluations + 42 > opts.max_evaluations) {
      res.converged = false;
      break;
    }
    Panel p = queue.top();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) {
      // Panel cannot be split further in double precision.
      res.converged = false;
      break;
    }
    queue.pop();
    Panel l = eval_panel(f, p.a, mid), r = eval_panel(f, mid, p.b);
    res.evaluations += 42;
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    queue.push(l);
    queue.push(r);
  }
  // Re-sum to shed the drift of the incremental updates.
  total = 0.0;
  err = 0.0;
  while (!queue.empty()) {
    total += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  res.value = total;
  res.error_bound = err;
  return res;
}

}  // namespace

QuadratureResult integrate(const std::function<cplx(double)>& f, double a, double b, const QuadratureOptions& opts,
                           const std::optional<TailMajorant>& tail) {
  if (!(b >= a)) throw DomainError("integration bounds must satisfy a <= b");
  if (std::isfinite(b)) {
    QuadratureResult r = integrate_finite(f, a, b, opts, opts.abs_tol);
    if (r.error_bound > std::max(opts.abs_tol, opts.rel_tol * std::abs(r.value))) r.converged = false;
    return r;
  }
  if (!tail) throw DomainError("an infinite interval needs a tail majorant with a closed-form integral");
  // Half the budget goes to the tail: push the cutoff out until the majorant integral fits.
  double cut = std::max({a + 1.0, tail->earliest_start, 1.0});
  double tail_bound = tail->integral_from(cut);
  while (tail_bound > 0.5 * opts.abs_tol && cut < opts.max_cutoff) {
    cut *= 2.0;
    tail_bound = tail->integral_from(cut);
  }
  QuadratureResult r = integrate_finite(f, a, cut, opts, 0.5 * opts.abs_tol);
  r.error_bound += tail_bound;
  r.converged = r.converged && r.error_bound <= std::max(opts.abs_tol, opts.rel_tol * std::abs(r.value));
  return r;
}

}  // namespace lattice
