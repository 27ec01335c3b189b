#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "config.hpp"
#include "doctest.h"
#include "lattice/constants.hpp"
#include "report.hpp"
#include "suite.hpp"

using namespace lattice;
using namespace lattice::cli;
using nlohmann::json;

namespace {

const std::string kConfigDir = LATTICE_CONFIG_DIR;

bool same_potential(const Potential& a, const Potential& b) {
  if (a.dim() != b.dim() || a.p != b.p || a.values.size() != b.values.size()) return false;
  for (const auto& [n, x] : a.values.entries())
    if (b.values(n) != x) return false;
  return true;
}

VerdictRecord rec(const std::string& id, double lhs, double rhs, Params p) {
  return inequality(id, anchor::young, lhs, rhs, std::move(p));
}

}  // namespace

TEST_CASE("collapse keeps one record per group with the worst ratio") {
  std::vector<VerdictRecord> in{rec("a", 1.0, 4.0, {{"p", 2.0}, {"seed", std::int64_t{1}}}),
                                rec("a", 3.0, 4.0, {{"p", 2.0}, {"seed", std::int64_t{2}}}),
                                rec("a", 1.0, 2.0, {{"p", 3.0}}),
                                descriptive("a", anchor::young, 9.0, 1.0, {{"p", 2.0}})};
  const auto out = collapse(in, {"p"});
  REQUIRE(out.size() == 3);
  const VerdictRecord* p2 = nullptr;
  for (const auto& r : out)
    if (r.status != Status::descriptive && std::get<double>(r.parameters.at("p")) == 2.0) p2 = &r;
  REQUIRE(p2 != nullptr);
  CHECK(p2->lhs == doctest::Approx(0.75));
  CHECK(p2->rhs == 1.0);
  CHECK(std::get<std::int64_t>(p2->parameters.at("cases")) == 2);
  CHECK(std::get<std::int64_t>(p2->parameters.at("worst_seed")) == 2);
  CHECK(std::get<std::int64_t>(p2->parameters.at("failures")) == 0);
  CHECK(p2->status == Status::pass);
}

TEST_CASE("collapse propagates a failing member") {
  std::vector<VerdictRecord> in{rec("b", 1.0, 2.0, {}), rec("b", 2.0, 1.0, {})};
  const auto out = collapse(in, {});
  REQUIRE(out.size() == 1);
  CHECK(out[0].status == Status::fail);
  CHECK(std::get<std::int64_t>(out[0].parameters.at("failures")) == 1);
}

TEST_CASE("JSON report carries the schema version, summary and sorted records") {
  Report r;
  r.command = "demo";
  r.seed = 3;
  r.records = {rec("z.check", 1.0, 2.0, {{"t", 1.0}}), rec("a.check", 3.0, 2.0, {{"t", 2.0}}),
               rec("a.check", 1.0, 2.0, {{"t", 1.0}})};
  const json j = json::parse(render_json(r));
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("command") == "demo");
  CHECK(j.at("summary").at("fail") == 1);
  CHECK(j.at("summary").at("pass") == 2);
  REQUIRE(j.at("records").size() == 3);
  CHECK(j.at("records")[0].at("check_id") == "a.check");
  CHECK(j.at("records")[2].at("check_id") == "z.check");
  CHECK(render_json(r) == render_json(r));
  CHECK(exit_code(r.records) == 1);
  r.records.erase(r.records.begin() + 1);
  CHECK(exit_code(r.records) == 0);
}

TEST_CASE("a record citing an unknown statement is rejected at render time") {
  Report r;
  r.command = "demo";
  r.records = {inequality("x", "made-up statement", 1.0, 2.0)};
  CHECK_THROWS_AS(render_json(r), std::logic_error);
}

TEST_CASE("CSV report has a header and one row per record") {
  Report r;
  r.command = "demo";
  r.records = {rec("a", 1.0, 2.0, {}), rec("b", 1.0, 2.0, {})};
  const std::string csv = render_csv(r);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 3);
}

TEST_CASE("potential parsing accepts both layouts") {
  const json bare = json::parse(R"([{"coords": [0, 1], "value": -2.0}, {"coords": [0, 1], "value": 0.5}])");
  const Potential a = parse_potential(bare);
  CHECK(a.dim() == 2);
  CHECK(a.value(LatticeVector{0, 1}) == -1.5);
  CHECK(a.p == 1.0);
  const Potential b = parse_potential(json::parse(R"({"p": 1.1, "sites": [{"coords": [2], "value": 1.0}]})"));
  CHECK(b.p == 1.1);
  CHECK(b.dim() == 1);
  CHECK_THROWS_AS(parse_potential(json::parse(R"({"sites": []})")), DomainError);
  CHECK(parse_potential(json::parse(R"({"sites": [], "dim": 4})")).dim() == 4);
  CHECK_THROWS_AS(
      parse_potential(json::parse(R"([{"coords": [0], "value": 1.0}, {"coords": [0, 0], "value": 1.0}])")),
      DomainError);
}

TEST_CASE("config loading resolves potential paths and sharper constants") {
  const RunConfig demo = load_config(kConfigDir + "/demo_rank_one_d3.json");
  REQUIRE(demo.potential.has_value());
  CHECK(same_potential(*demo.potential, rank_one_potential(3, -5.0)));
  const RunConfig sharp = load_config(kConfigDir + "/landau_sharp.json");
  CHECK(sharp.landau.b == 0.674885);
  CHECK(sharp.landau.c == 0.7857468704);
  CHECK_FALSE(sharp.tol.has_value());
}

TEST_CASE("built-in corpus matches the shipped potential files") {
  for (const auto& [name, v] : builtin_corpus()) {
    CAPTURE(name);
    CHECK(same_potential(v, load_potential(kConfigDir + "/potentials/" + name + ".json")));
  }
}

TEST_CASE("job count: flag, then environment, then one") {
  ::unsetenv("LATTICE_DISPERSE_JOBS");
  CHECK(resolve_jobs(std::nullopt) == 1);
  CHECK(resolve_jobs(4u) == 4);
  CHECK(resolve_jobs(0u) == 1);
  ::setenv("LATTICE_DISPERSE_JOBS", "3", 1);
  CHECK(resolve_jobs(std::nullopt) == 3);
  CHECK(resolve_jobs(2u) == 2);
  ::setenv("LATTICE_DISPERSE_JOBS", "abc", 1);
  CHECK(resolve_jobs(std::nullopt) == 1);
  ::unsetenv("LATTICE_DISPERSE_JOBS");
}

TEST_CASE("report files are written under the output directory") {
  const auto dir = std::filesystem::temp_directory_path() / "lattice_cli_test_reports";
  std::filesystem::remove_all(dir);
  Report r;
  r.command = "demo";
  r.records = {rec("a", 1.0, 2.0, {})};
  write_report(r, dir.string());
  CHECK(std::filesystem::exists(dir / "demo.json"));
  CHECK(std::filesystem::exists(dir / "demo.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("bessel-verify at quick scale passes and is seed-deterministic") {
  RunConfig c;
  const Report a = run_bessel_verify(c, Scale::quick);
  const Report b = run_bessel_verify(c, Scale::quick);
  CHECK(exit_code(a.records) == 0);
  CHECK(render_json(a) == render_json(b));
}

TEST_CASE("resolvent-verify rejects dimensions below three") {
  RunConfig c;
  c.dims = {2, 3};
  CHECK_THROWS_AS(run_resolvent_verify(c, Scale::quick), DomainError);
}
