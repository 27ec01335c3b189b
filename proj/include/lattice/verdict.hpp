#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lattice {

inline constexpr double kSlack = 1e-10;

enum class Status { pass, fail, skipped, descriptive };

std::string_view status_name(Status s);

using ParamValue = std::variant<std::int64_t, double, std::string>;
using Params = std::map<std::string, ParamValue>;

struct VerdictRecord {
  std::string check_id;
  Params parameters;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  Status status = Status::skipped;
  std::string provenance;
  std::string note;
};

// Records lhs <= rhs(1 + slack) as pass, anything else (including NaN) as fail.
VerdictRecord inequality(std::string check_id, std::string provenance, double lhs, double rhs,
                         Params params = {}, double slack = kSlack);
VerdictRecord descriptive(std::string check_id, std::string provenance, double lhs, double rhs,
                          Params params = {});

// The fixed set of anchors a record may cite. Each names the statement being probed.
const std::vector<std::string>& provenance_anchors();
bool is_known_anchor(std::string_view anchor);

namespace anchor {
inline constexpr const char* young = "discrete Young inequality";
inline constexpr const char* riesz_thorin = "discrete Riesz-Thorin interpolation";
inline constexpr const char* summation = "two-weight lattice summation estimate";
inline constexpr const char* bessel_bounds = "pointwise Bessel bounds";
inline constexpr const char* bessel_lp = "weighted Bessel L^p time integral";
inline constexpr const char* bessel_accuracy = "Bessel evaluation accuracy";
inline constexpr const char* unitarity = "propagator unitarity";
inline constexpr const char* smoothing = "propagator l^s to l^r smoothing";
inline constexpr const char* weighted_decay = "rho-weighted propagator decay";
inline constexpr const char* dispersive = "weighted dispersive estimate";
inline constexpr const char* time_integral = "time-integrated propagator kernel bound";
inline constexpr const char* r01 = "short-time resolvent part contraction";
inline constexpr const char* r02 = "long-time resolvent kernel Holder bound";
inline constexpr const char* resolvent_bounds = "weighted resolvent operator bounds";
inline constexpr const char* resolvent_hs = "weighted resolvent Hilbert-Schmidt bounds";
inline constexpr const char* bs_correspondence = "Birman-Schwinger eigenfunction correspondence";
inline constexpr const char* bs_small_coupling = "small-coupling absence of eigenvalues";
inline constexpr const char* bs_detection = "Birman-Schwinger eigenvalue detection";
inline constexpr const char* lim_abs = "limiting absorption resolvent identity";
inline constexpr const char* wave_operators = "existence and completeness of wave operators";
inline constexpr const char* finiteness = "finiteness of the point spectrum";
inline constexpr const char* determinism = "report determinism";
}  // namespace anchor

}  // namespace lattice
