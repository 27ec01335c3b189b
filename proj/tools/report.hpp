#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "lattice/verdict.hpp"

namespace lattice::cli {

inline constexpr int kSchemaVersion = 1;

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<VerdictRecord> records;
  nlohmann::json data = nlohmann::json::object();  // command-specific results
};

struct Tally {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t skipped = 0;
  std::size_t descriptive = 0;
};
Tally tally(const std::vector<VerdictRecord>& records);

// Sorted by check_id, then by the canonical rendering of the parameters.
void sort_records(std::vector<VerdictRecord>& records);
std::string canonical_parameters(const Params& p);

nlohmann::json to_json(const VerdictRecord& r);
// Throws std::logic_error for a record whose provenance is not a known anchor.
std::string render_json(Report report);
std::string render_csv(Report report);
// Writes <dir>/<command>.json and <dir>/<command>.csv.
void write_report(const Report& report, const std::string& dir);

// 0 when no record failed, 1 otherwise.
int exit_code(const std::vector<VerdictRecord>& records);

}  // namespace lattice::cli
