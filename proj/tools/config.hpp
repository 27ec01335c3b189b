#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lattice/bessel.hpp"
#include "lattice/schrodinger.hpp"

namespace lattice::cli {

// Settings shared by all subcommands. Flags override the config file.
struct RunConfig {
  std::uint64_t seed = 7;
  std::vector<int> dims;          // empty: each subcommand's default set
  std::optional<double> tol;     // overrides a subcommand's acceptance tolerance
  std::string out = ".";
  unsigned jobs = 1;
  int samples = 0;                // random weights per case; 0 selects the default
  int box_radius = 0;             // 0 selects the default
  int grid_points = 0;
  std::vector<double> times;
  std::optional<Potential> potential;
  LandauConstants landau;         // "landau": {"b": ..., "c": ...}
  nlohmann::json raw;             // the config file as read
};

// Accepts a bare list of {coords, value} or {"p": ..., "sites": [...]}.
Potential parse_potential(const nlohmann::json& j);
Potential load_potential(const std::string& path);

// Reads a JSON config; a "potential" entry may be inline or a path relative to the file.
RunConfig load_config(const std::string& path);

// --jobs, then LATTICE_DISPERSE_JOBS, then 1.
unsigned resolve_jobs(std::optional<unsigned> flag);

}  // namespace lattice::cli
