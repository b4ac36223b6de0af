#pragma once

// Run configuration: flat `key = value` text with dotted sections.
//
//   experiment = HOMOGENEOUS
//   scheme = TRMC_RAD
//   N = 50000
//   kernel.alpha = 1
//   adaptive.delta1 = 0.005
//
// '#' starts a comment. Unknown keys and malformed values are errors that
// carry the line number.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "trmc/scheme.hpp"
#include "trmc/shock.hpp"

namespace trmc {

enum class Experiment { Homogeneous, Shock };

Experiment parse_experiment(std::string_view name);
std::string_view experiment_name(Experiment e);

// Two-Maxwellian initial data: half the particles around (u1x, 0, 0) at
// temperature T1, half around (u2x, 0, 0) at T2.
struct InitParams {
  double u1x = 2.0;
  double u2x = -2.0;
  double T1 = 0.5;
  double T2 = 0.5;

  bool operator==(const InitParams&) const = default;
};

struct RunConfig {
  Experiment experiment = Experiment::Homogeneous;
  SchemeParams scheme;
  std::int64_t N = 50000;
  double dt_over_eps = 1.0;
  double eps = 1.0;
  int steps = 20;
  std::uint64_t seed = 1;
  std::string output;
  InitParams init;
  ShockConfig shock;
  int reference_replicas = 100;
  int reference_particles_per_cell = 3000;

  void validate() const;  // throws ConfigError
  ShockConfig shock_config() const;  // shock section plus eps and steps
  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(std::string_view text);
RunConfig load_config(const std::string& path);

// Every key in a fixed order, doubles with 17 significant digits, so that
// parse_config_text(echo_config(c)) == c.
std::string echo_config(const RunConfig& cfg);

}  // namespace trmc
