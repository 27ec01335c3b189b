#include "lattice/verdict.hpp"

#include <algorithm>
#include <cmath>

namespace lattice {

std::string_view status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
    case Status::descriptive: return "descriptive";
  }
  return "unknown";
}

VerdictRecord inequality(std::string check_id, std::string provenance, double lhs, double rhs,
                         Params params, double slack) {
  VerdictRecord r;
  r.check_id = std::move(check_id);
  r.provenance = std::move(provenance);
  r.parameters = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  const bool ok = std::isfinite(lhs) && !std::isnan(rhs) && lhs <= rhs * (1.0 + slack);
  r.status = ok ? Status::pass : Status::fail;
  return r;
}

VerdictRecord descriptive(std::string check_id, std::string provenance, double lhs, double rhs,
                          Params params) {
  VerdictRecord r;
  r.check_id = std::move(check_id);
  r.provenance = std::move(provenance);
  r.parameters = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.status = Status::descriptive;
  return r;
}

const std::vector<std::string>& provenance_anchors() {
  static const std::vector<std::string> all = {
      anchor::young,          anchor::riesz_thorin,      anchor::summation,      anchor::bessel_bounds,
      anchor::bessel_lp,      anchor::bessel_accuracy,   anchor::unitarity,      anchor::smoothing,
      anchor::weighted_decay, anchor::dispersive,        anchor::time_integral,  anchor::r01,
      anchor::r02,            anchor::resolvent_bounds,  anchor::resolvent_hs,   anchor::bs_correspondence,
      anchor::bs_small_coupling, anchor::bs_detection,   anchor::lim_abs,        anchor::wave_operators,
      anchor::finiteness,     anchor::determinism,
  };
  return all;
}

bool is_known_anchor(std::string_view a) {
  const auto& all = provenance_anchors();
  return std::find(all.begin(), all.end(), a) != all.end();
}

}  // namespace lattice
