#include <algorithm>
#include <cmath>

#include "lattice/constants.hpp"
#include "lattice/resolvent.hpp"

namespace lattice {

namespace {

constexpr const char* kDenseNote = "finitely supported weights probe the l^q statement through a dense subclass";
constexpr const char* kBoxNote = "a box section has norm at most that of the full operator: necessary-condition check";

// Sorted absolute offsets occurring between two points of the box.
std::vector<LatticeVector> box_offsets(const Box& box) {
  std::vector<LatticeVector> out;
  const Box wide(box.dim(), 2 * box.radius());
  for (std::size_t i = 0; i < wide.size(); ++i) {
    const LatticeVector p = wide.point(i);
    if (p == p.abs_sorted()) out.push_back(p);
  }
  return out;
}

Matrix r01_matrix(const ResolventTable& table, std::size_t point, const std::vector<LatticeVector>& pts,
                  double& entry_error) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const ResolventSplit s = table.split(pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)], point);
      m(i, j) = s.r01;
      entry_error = std::max(entry_error, s.err01);
    }
  return m;
}

double distance(const SpectralPoint& a, const SpectralPoint& b) { return std::abs(a.z() - b.z()); }

void require_same_side(const SpectralPoint& a, const SpectralPoint& b) {
  if (!same_closed_half_plane(a, b)) throw DomainError("both spectral points must lie in the same closed half-plane");
}

std::string side(const SpectralPoint& a) { return a.upper() ? "upper" : "lower"; }

}  // namespace

std::vector<VerdictRecord> verify_r01_sweep(std::span<const SpectralPoint> points, const Box& box, unsigned jobs) {
  const auto pts = box.points();
  if (pts.size() > 3000) throw DomainError("R_01 box check is limited to 3000 points");
  const auto offsets = box_offsets(box);
  const ResolventTable table(box.dim(), offsets, points, 1e-12, ResolventPart::short_time, jobs);
  const std::size_t np = points.size();
  std::vector<Matrix> mats(np);
  std::vector<double> errs(np, 0.0), norms(np, 0.0);
  parallel_for(np, jobs, [&](std::size_t p) {
    mats[p] = r01_matrix(table, p, pts, errs[p]);
    norms[p] = operator_norm(mats[p]);
  });
  const double size = static_cast<double>(pts.size());
  std::vector<VerdictRecord> out;
  for (std::size_t p = 0; p < np; ++p) {
    Params params{{"z", points[p].str()}, {"d", static_cast<std::int64_t>(box.dim())},
                  {"box_radius", static_cast<std::int64_t>(box.radius())}, {"box_norm", norms[p]}};
    auto rec = inequality("r01_norm", anchor::r01, norms[p] + size * errs[p], 1.0, std::move(params));
    rec.note = kBoxNote;
    out.push_back(std::move(rec));
  }
  for (std::size_t p = 0; p + 1 < np; ++p) {
    if (!same_closed_half_plane(points[p], points[p + 1])) continue;
    const bool same = points[p] == points[p + 1];
    const double diff = same ? 0.0 : operator_norm(Matrix(mats[p] - mats[p + 1])) + size * (errs[p] + errs[p + 1]);
    const double dz = distance(points[p], points[p + 1]);
    Params params{{"z", points[p].str()}, {"z_prime", points[p + 1].str()}, {"d", static_cast<std::int64_t>(box.dim())},
                  {"box_radius", static_cast<std::int64_t>(box.radius())}};
    if (dz > 0.0) params["ratio"] = diff / dz;
    auto rec = inequality("r01_lipschitz", anchor::r01, diff, dz, std::move(params));
    rec.note = kBoxNote;
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<VerdictRecord> verify_r01_contraction(const SpectralPoint& z, const SpectralPoint& zp, const Box& box) {
  require_same_side(z, zp);
  const SpectralPoint pts[] = {z, zp};
  auto recs = verify_r01_sweep(pts, box);
  // Norm of the larger of the two, then the Lipschitz record.
  std::vector<VerdictRecord> out;
  out.push_back(recs[0].lhs >= recs[1].lhs ? recs[0] : recs[1]);
  out.push_back(recs[2]);
  return out;
}

VerdictRecord verify_r02_holder(const LatticeVector& m, const SpectralPoint& z, const SpectralPoint& zp, double gamma) {
  require_same_side(z, zp);
  const int d = m.dim();
  const double c = c_d_gamma(d, gamma);
  const double rhs = c * kappa_tilde(m, d, gamma) * std::pow(distance(z, zp), gamma);
  const SpectralPoint pts[] = {z, zp};
  const ResolventTable table(d, std::span(&m, 1), pts);
  const ResolventSplit a = table.split(m, 0), b = table.split(m, 1);
  const double lhs = z == zp ? 0.0 : std::abs(a.r02 - b.r02) + a.err02 + b.err02;
  Params params{{"m", m.str()}, {"d", static_cast<std::int64_t>(d)}, {"gamma", gamma},
                {"z", z.str()}, {"z_prime", zp.str()}, {"half_plane", side(z)}};
  return inequality("r02_holder", anchor::r02, lhs, rhs, std::move(params));
}

VerdictRecord verify_r02_bound(const LatticeVector& m, const SpectralPoint& z) {
  const int d = m.dim();
  const double rhs = c_d_gamma(d, 0.0) * kappa_tilde(m, d, 0.0);
  const ResolventSplit s = r0_split(m, z);
  Params params{{"m", m.str()}, {"d", static_cast<std::int64_t>(d)}, {"z", z.str()}};
  return inequality("r02_bound", anchor::r02, std::abs(s.r02) + s.err02, rhs, std::move(params));
}

std::vector<VerdictRecord> verify_resolvent_sweep(const Sequence& u, const Sequence& v, const ResolventSweep& sw,
                                                  unsigned jobs) {
  const int d = sw.dim;
  if (u.dim() != d || v.dim() != d) throw DomainError("weights have the wrong dimension");
  if (d < 3) throw DomainError("weighted resolvent bounds need d >= 3");
  if (!admissibility(d).weight_q.contains(sw.q)) throw DomainError("weight exponent q outside its admissible range");
  const double base = c_d_gamma(d, 0.0) * gamma_big(sw.q, d, 0.0);
  double holder = 0.0;
  if (!sw.pairs.empty()) {
    if (!(sw.gamma >= 0.0 && sw.gamma <= 1.0)) throw DomainError("Holder exponent must lie in [0,1]");
    if (!(sw.gamma < gamma_dq(d, sw.q))) throw DomainError("Holder exponent must be below gamma_{d,q}");
    holder = c_d_gamma(d, sw.gamma) * gamma_big(sw.q, d, sw.gamma);
  }
  for (const auto& [a, b] : sw.pairs) require_same_side(sw.points.at(a), sw.points.at(b));
  const double dq = d_qd(sw.q, d);
  const double uq = norm(u, sw.q), vq = norm(v, sw.q);
  const double u2v2 = norm(u, 2.0) * norm(v, 2.0);

  const auto rows = u.support(), cols = v.support();
  const ResolventTable table(d, difference_set(rows, cols), sw.points, 1e-10, ResolventPart::both, jobs);
  const std::size_t np = sw.points.size();
  std::vector<KernelMatrix> y(np);
  std::vector<double> op(np), hs(np);
  parallel_for(np, jobs, [&](std::size_t p) {
    y[p] = weighted_resolvent(u, v, table, p);
    op[p] = operator_norm(y[p]);
    hs[p] = hs_norm(y[p]);
  });

  auto common = [&](Params extra) {
    extra["d"] = static_cast<std::int64_t>(d);
    extra["q"] = sw.q;
    extra["support_u"] = static_cast<std::int64_t>(u.size());
    extra["support_v"] = static_cast<std::int64_t>(v.size());
    return extra;
  };
  std::vector<VerdictRecord> out;
  for (std::size_t p = 0; p < np; ++p) {
    const double err = y[p].entry_error * u2v2;
    auto a = inequality("resolvent_op", anchor::resolvent_bounds, op[p] + err, (1.0 + base) * uq * vq,
                        common({{"z", sw.points[p].str()}, {"norm", op[p]}}));
    auto b = inequality("resolvent_hs", anchor::resolvent_hs, hs[p] + err, (dq + base) * uq * vq,
                        common({{"z", sw.points[p].str()}, {"norm", hs[p]}}));
    a.note = b.note = kDenseNote;
    out.push_back(std::move(a));
    out.push_back(std::move(b));
  }
  for (const auto& [i, j] : sw.pairs) {
    const double dz = distance(sw.points[i], sw.points[j]);
    const bool same = sw.points[i] == sw.points[j];
    const Matrix diff = y[i].entries - y[j].entries;
    const double err = same ? 0.0 : (y[i].entry_error + y[j].entry_error) * u2v2;
    const double dop = same ? 0.0 : operator_norm(diff) + err;
    const double dhs = same ? 0.0 : hs_norm(diff) + err;
    const double scale = std::pow(dz, sw.gamma) * uq * vq;
    Params params{{"z", sw.points[i].str()}, {"z_prime", sw.points[j].str()}, {"gamma", sw.gamma},
                  {"half_plane", side(sw.points[i])}};
    auto a = inequality("resolvent_op_holder", anchor::resolvent_bounds, dop, (1.0 + holder) * scale, common(params));
    auto b = inequality("resolvent_hs_holder", anchor::resolvent_hs, dhs, (dq + holder) * scale, common(params));
    a.note = b.note = kDenseNote;
    out.push_back(std::move(a));
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<VerdictRecord> verify_resolvent_bounds(const Sequence& u, const Sequence& v, double q,
                                                   const SpectralPoint& z, const SpectralPoint& zp, double gamma) {
  ResolventSweep sw;
  sw.dim = u.dim();
  sw.q = q;
  sw.gamma = gamma;
  sw.points = {z, zp};
  sw.pairs = {{0, 1}};
  auto recs = verify_resolvent_sweep(u, v, sw);
  // Records for z, then the two Holder records.
  return {recs[0], recs[1], recs[4], recs[5]};
}

}  // namespace lattice
