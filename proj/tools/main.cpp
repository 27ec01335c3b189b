#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "lattice/constants.hpp"
#include "report.hpp"
#include "suite.hpp"

using namespace lattice;
using namespace lattice::cli;

namespace {

constexpr int kUsageError = 2;
constexpr int kNumericalFailure = 3;

int print_constant(const std::string& name, const std::vector<double>& params) {
  std::printf("%.17g\n", constant_by_name(name, params));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of dispersive, resolvent and spectral estimates for the lattice Laplacian"};
  app.require_subcommand(1);
  app.fallthrough();

  std::vector<int> dims;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::string out, config_path;
  unsigned jobs = 0;
  auto* o_dims = app.add_option("--dims", dims, "Dimensions to run, e.g. 1,2,3")->delimiter(',');
  auto* o_seed = app.add_option("--seed", seed, "Seed for all random draws");
  auto* o_tol = app.add_option("--tol", tol, "Acceptance tolerance override");
  auto* o_out = app.add_option("--out", out, "Directory for the JSON and CSV reports");
  app.add_option("--config", config_path, "JSON config; flags take precedence")->check(CLI::ExistingFile);
  auto* o_jobs = app.add_option("--jobs", jobs, "Worker threads (default: $LATTICE_DISPERSE_JOBS or 1)")
                     ->check(CLI::PositiveNumber);

  struct Command {
    const char* name;
    const char* help;
    Report (*run)(const RunConfig&, Scale);
  };
  const Command commands[] = {
      {"bessel-verify", "Bessel accuracy, pointwise bounds and weighted L^p integrals", run_bessel_verify},
      {"dispersive-verify", "Propagator unitarity, smoothing, decay and dispersive estimates", run_dispersive_verify},
      {"resolvent-verify", "Weighted resolvent norms, Hilbert-Schmidt and Holder bounds", run_resolvent_verify},
      {"bs-scan", "Birman-Schwinger eigenvalue scan of a potential", run_bs_scan},
      {"spectrum", "Box Hamiltonian spectrum against Birman-Schwinger detections", run_spectrum},
      {"waveop", "Wave-operator probe W(T) f on a causal box", run_waveop},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) subs.push_back(app.add_subcommand(c.name, c.help));
  auto* suite = app.add_subcommand("suite", "Every check family at reduced size, one report");

  auto* constants = app.add_subcommand("constants", "Print a named constant, e.g. constants gamma_big 2 3 0");
  std::string const_name;
  std::vector<double> const_params;
  constants->add_option("name", const_name, "Constant name")->required();
  constants->add_option("params", const_params, "Parameters in signature order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  }

  try {
    if (*constants) return print_constant(const_name, const_params);

    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (*o_dims) cfg.dims = dims;
    if (*o_seed) cfg.seed = seed;
    if (*o_tol) cfg.tol = tol;
    if (*o_out) cfg.out = out;
    cfg.jobs = resolve_jobs(*o_jobs ? std::optional<unsigned>(jobs)
                                    : (cfg.raw.contains("jobs") ? std::optional<unsigned>(cfg.jobs) : std::nullopt));

    Report report;
    if (*suite) {
      report = run_suite(cfg);
    } else {
      for (std::size_t k = 0; k < subs.size(); ++k)
        if (*subs[k]) report = commands[k].run(cfg, Scale::full);
    }
    write_report(report, cfg.out);
    const Tally t = tally(report.records);
    std::printf("%s: %zu pass, %zu fail, %zu skipped, %zu descriptive -> %s/%s.json\n", report.command.c_str(), t.pass,
                t.fail, t.skipped, t.descriptive, cfg.out.c_str(), report.command.c_str());
    return exit_code(report.records);
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumericalFailure;
  }
}
