#include "config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace lattice::cli {

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("cannot parse " + path + ": " + e.what());
  }
}

}  // namespace

Potential parse_potential(const nlohmann::json& j) {
  const nlohmann::json& sites = j.is_array() ? j : j.at("sites");
  const double p = j.is_object() ? j.value("p", 1.0) : 1.0;
  int dim = 0;
  Sequence values;
  for (const auto& site : sites) {
    const auto coords = site.at("coords").get<std::vector<long long>>();
    if (dim == 0) {
      dim = static_cast<int>(coords.size());
      values = Sequence(dim);
    }
    if (static_cast<int>(coords.size()) != dim) throw DomainError("potential sites of mixed dimension");
    values.add(LatticeVector(std::span<const long long>(coords)), site.at("value").get<double>());
  }
  if (dim == 0) {
    if (!j.is_object() || !j.contains("dim")) throw DomainError("an empty potential needs a \"dim\" entry");
    values = Sequence(j.at("dim").get<int>());
  }
  return Potential(std::move(values), p);
}

Potential load_potential(const std::string& path) { return parse_potential(read_json(path)); }

RunConfig load_config(const std::string& path) {
  RunConfig c;
  c.raw = read_json(path);
  const auto& j = c.raw;
  try {
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("dims")) c.dims = j.at("dims").get<std::vector<int>>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<unsigned>();
    if (j.contains("samples")) c.samples = j.at("samples").get<int>();
    if (j.contains("box_radius")) c.box_radius = j.at("box_radius").get<int>();
    if (j.contains("grid_points")) c.grid_points = j.at("grid_points").get<int>();
    if (j.contains("times")) c.times = j.at("times").get<std::vector<double>>();
    if (j.contains("landau")) {
      c.landau.b = j.at("landau").value("b", c.landau.b);
      c.landau.c = j.at("landau").value("c", c.landau.c);
    }
    if (j.contains("potential")) {
      const auto& p = j.at("potential");
      if (p.is_string()) {
        const auto base = std::filesystem::path(path).parent_path();
        c.potential = load_potential((base / p.get<std::string>()).string());
      } else {
        c.potential = parse_potential(p);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("bad config " + path + ": " + e.what());
  }
  return c;
}

unsigned resolve_jobs(std::optional<unsigned> flag) {
  if (flag) return std::max(1u, *flag);
  if (const char* env = std::getenv("LATTICE_DISPERSE_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

}  // namespace lattice::cli
