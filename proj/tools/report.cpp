#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace lattice::cli {

namespace {

nlohmann::json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string render_value(const ParamValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  return std::get<std::string>(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void prepare(Report& report) {
  for (const auto& r : report.records)
    if (!is_known_anchor(r.provenance))
      throw std::logic_error("record " + r.check_id + " cites an unknown anchor: " + r.provenance);
  sort_records(report.records);
}

}  // namespace

Tally tally(const std::vector<VerdictRecord>& records) {
  Tally t;
  for (const auto& r : records) {
    switch (r.status) {
      case Status::pass: ++t.pass; break;
      case Status::fail: ++t.fail; break;
      case Status::skipped: ++t.skipped; break;
      case Status::descriptive: ++t.descriptive; break;
    }
  }
  return t;
}

std::string canonical_parameters(const Params& p) {
  std::string s;
  for (const auto& [k, v] : p) {
    if (!s.empty()) s += ';';
    s += k + '=' + render_value(v);
  }
  return s;
}

void sort_records(std::vector<VerdictRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const VerdictRecord& a, const VerdictRecord& b) {
    if (a.check_id != b.check_id) return a.check_id < b.check_id;
    return canonical_parameters(a.parameters) < canonical_parameters(b.parameters);
  });
}

nlohmann::json to_json(const VerdictRecord& r) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.parameters) {
    if (const auto* i = std::get_if<std::int64_t>(&v))
      params[k] = *i;
    else if (const auto* d = std::get_if<double>(&v))
      params[k] = number(*d);
    else
      params[k] = std::get<std::string>(v);
  }
  nlohmann::json j = {{"check_id", r.check_id},
                      {"parameters", params},
                      {"lhs", number(r.lhs)},
                      {"rhs", number(r.rhs)},
                      {"margin", number(r.margin)},
                      {"status", std::string(status_name(r.status))},
                      {"provenance", r.provenance}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string render_json(Report report) {
  prepare(report);
  const Tally t = tally(report.records);
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = report.command;
  j["seed"] = report.seed;
  j["summary"] = {{"pass", t.pass}, {"fail", t.fail}, {"skipped", t.skipped}, {"descriptive", t.descriptive}};
  j["records"] = nlohmann::json::array();
  for (const auto& r : report.records) j["records"].push_back(to_json(r));
  if (!report.data.empty()) j["data"] = report.data;
  return j.dump(2) + "\n";
}

std::string render_csv(Report report) {
  prepare(report);
  std::string out = "check_id,status,lhs,rhs,margin,provenance,parameters\n";
  for (const auto& r : report.records) {
    out += csv_field(r.check_id) + ',' + std::string(status_name(r.status)) + ',' + format_double(r.lhs) + ',' +
           format_double(r.rhs) + ',' + format_double(r.margin) + ',' + csv_field(r.provenance) + ',' +
           csv_field(canonical_parameters(r.parameters)) + '\n';
  }
  return out;
}

void write_report(const Report& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir) / report.command;
  std::ofstream(base.string() + ".json") << render_json(report);
  std::ofstream(base.string() + ".csv") << render_csv(report);
}

int exit_code(const std::vector<VerdictRecord>& records) { return tally(records).fail == 0 ? 0 : 1; }

}  // namespace lattice::cli
