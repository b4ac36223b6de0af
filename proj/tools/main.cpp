// trmc: run the homogeneous relaxation and shock experiments.
//
//   trmc run --config FILE [--seed S] [--scheme NAME] [--out PATH]
//   trmc reference --config FILE --replicas R [--out PATH]
//   trmc selftest
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "selftest.hpp"
#include "trmc/error.hpp"
#include "trmc/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

void summarize(const trmc::RunReport& rep) {
  std::cerr << "scheme " << trmc::scheme_name(rep.config.scheme.scheme)
            << "  collisions " << rep.totals.collisions
            << "  maxwellian samples " << rep.totals.maxwellian_samples
            << "  cost " << rep.totals.effective_cost();
  if (rep.config.scheme.scheme == trmc::Scheme::TrmcRad)
    std::cerr << "  retries " << rep.retries << "  cap hits " << rep.cap_hits;
  std::cerr << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-relaxed Monte Carlo experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::optional<std::string> out;
  int replicas = 0;

  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("--config", config_path, "configuration file")->required();
  run->add_option("--seed", seed, "override the seed");
  run->add_option("--scheme", scheme, "override the scheme (BIRD, TRMC_R, TRMC_RAD, TRMC_WB)");
  run->add_option("--out", out, "CSV output path (overrides `output`)");

  auto* ref = app.add_subcommand("reference", "average independent Bird runs");
  ref->add_option("--config", config_path, "configuration file")->required();
  ref->add_option("--replicas", replicas, "number of replicas")->required();
  ref->add_option("--out", out, "CSV output path (overrides `output`)");

  auto* self = app.add_subcommand("selftest", "run the invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (self->parsed()) return run_selftest(std::cout) == 0 ? 0 : kNumericalError;

    trmc::RunConfig cfg = trmc::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (scheme) cfg.scheme.scheme = trmc::parse_scheme(*scheme);
    if (out) cfg.output = *out;
    cfg.validate();
    if (cfg.output.empty()) throw trmc::ConfigError("no output path (set `output` or pass --out)");

    if (run->parsed()) {
      const trmc::RunReport rep = trmc::run_experiment(cfg);
      trmc::emit_report(rep, cfg.output);
      summarize(rep);
      return 0;
    }
    cfg.reference_replicas = replicas;
    cfg.validate();
    if (cfg.experiment == trmc::Experiment::Homogeneous) {
      trmc::write_text(cfg.output, trmc::format_reference(trmc::run_reference_homogeneous(cfg, replicas)));
    } else {
      trmc::write_text(cfg.output, trmc::format_profile(trmc::run_reference_shock(cfg, replicas)));
    }
    trmc::write_text(cfg.output + ".meta", trmc::echo_config(cfg));
    return 0;
  } catch (const trmc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const trmc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}
