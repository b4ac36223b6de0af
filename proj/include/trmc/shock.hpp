#pragma once

// One space dimension, three velocity dimensions: free streaming, Maxwellian
// flux boundaries and per-cell collisions for a stationary normal shock.
//
// The upstream gas moves toward -x, so it enters through x_max; the
// downstream state sits at x_min.

#include <cstdint>
#include <vector>

#include "trmc/kinetics.hpp"
#include "trmc/rng.hpp"
#include "trmc/scheme.hpp"

namespace trmc {

struct FlowState {
  double rho = 1.0;
  Velocity3 u;
  double T = 1.0;
};

struct ShockConfig {
  double mach = 3.0;
  double T_L = 1.0;
  double rho_L = 1.0;
  double gamma = 5.0 / 3.0;
  int n_cells = 50;
  int particles_per_cell = 1000;  // at the upstream density
  double domain_mfp = 30.0;       // upstream mean free paths at eps = 1
  double cfl = 0.5;
  double dt = 0.0;                // 0: cfl * dx / (|u_L| + 4 sqrt(T_R))
  double eps = 1.0;
  int steps = 1000;
  int average_from = -1;          // first averaged step; -1: second half
  int batches = 20;               // batch means for standard errors
  // Half-width of the cell window over which the autocorrelation factor of
  // the standard errors is pooled; 0 keeps plain per-cell batch means.
  int se_pool = 0;
  int threads = 1;

  void validate() const;  // throws ConfigError
  bool operator==(const ShockConfig&) const = default;
};

// u_x = -mach * sqrt(gamma T_L).
FlowState upstream_state(const ShockConfig& cfg);

// Normal-shock jump for a gamma-law gas with p = rho T. Throws
// NumericalError("no shock") for mach <= 1.
FlowState rankine_hugoniot_right_state(const ShockConfig& cfg);

// Mean relative speed to the power alpha for a Maxwellian at temperature T.
double mean_relative_speed_pow(double T, double alpha);

// Mean free path of the variable-hard-sphere gas in equilibrium.
double mean_free_path(double rho, double T, double eps, double K, double alpha);

// Number flux through a plane into the half-space along `inward` (+1 or -1).
double one_sided_flux(const FlowState& s, double inward);

struct Particles {
  std::vector<double> x;
  ParticleEnsemble v;
};

struct SpatialGrid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 1;
  double dx = 1.0;
  double particle_mass = 1.0;  // rho * dx carried by one particle
  std::vector<Particles> cells;

  static SpatialGrid uniform(double x_min, double x_max, int n_cells, double particle_mass);
  int cell_of(double x) const;
  double center(int c) const { return x_min + (c + 0.5) * dx; }
  std::size_t total() const;
};

// Moves every particle by v_x dt, drops those leaving [x_min, x_max) and
// re-bins the rest. Order within a cell is by source cell, then slot.
void stream_and_sort(SpatialGrid& grid, double dt);

struct Boundary {
  FlowState state;
  bool at_min = true;  // injects through x_min (inward = +x) or x_max
};

// Adds IR(flux dt / particle_mass) particles drawn from the one-sided flux
// of `b.state`, each placed along its in-flight distance for the step.
std::int64_t apply_boundary(SpatialGrid& grid, const Boundary& b, double dt, Rng& rng);

struct CellProfile {
  double x = 0.0;
  double rho = 0.0;
  double ux = 0.0;
  double T = 0.0;
  double rho_se = 0.0;
  double ux_se = 0.0;
  double T_se = 0.0;
  std::int64_t collisions = 0;
  double cost = 0.0;
  double m_max_mean = 0.0;
  double m_max_peak = 0.0;
};

struct SpatialProfile {
  std::vector<CellProfile> cells;
  StepReport totals;
  double dt = 0.0;
  double dx = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  int steps = 0;
  int average_from = 0;
  std::int64_t retries = 0;
  std::int64_t cap_hits = 0;

  double total_cost() const { return totals.effective_cost(); }
};

// Initial step between the downstream state (x below the midpoint) and the
// upstream state, then `steps` transport/collision cycles.
SpatialProfile run_shock(const ShockConfig& cfg, const SchemeParams& scheme, std::uint64_t seed);

}  // namespace trmc
