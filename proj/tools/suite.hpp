#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace lattice::cli {

// quick trims the grids so that `suite` runs every check family in a few minutes.
enum class Scale { full, quick };

Report run_bessel_verify(const RunConfig& c, Scale s = Scale::full);
Report run_dispersive_verify(const RunConfig& c, Scale s = Scale::full);
Report run_resolvent_verify(const RunConfig& c, Scale s = Scale::full);
Report run_bs_scan(const RunConfig& c, Scale s = Scale::full);
Report run_spectrum(const RunConfig& c, Scale s = Scale::full);
Report run_waveop(const RunConfig& c, Scale s = Scale::full);
// Everything above at the quick scale, with built-in potentials, in one report.
Report run_suite(const RunConfig& c);

// Collapses records sharing a check_id and the values of `keys` into one record whose lhs is
// the worst lhs/rhs ratio (rhs = 1). Records that are not pass/fail are kept as they are.
std::vector<VerdictRecord> collapse(const std::vector<VerdictRecord>& records, const std::vector<std::string>& keys);

// The built-in potentials used when no config supplies one.
Potential rank_one_potential(int d, double g);
std::vector<std::pair<std::string, Potential>> builtin_corpus();

}  // namespace lattice::cli
