#pragma once

// Experiment drivers and report emission.

#include <cstdint>
#include <string>
#include <vector>

#include "trmc/config.hpp"
#include "trmc/kinetics.hpp"
#include "trmc/shock.hpp"

namespace trmc {

// N/2 particles from each Maxwellian, each half with exact moments; the
// ensemble carries unit density.
ParticleEnsemble init_two_maxwellians(std::int64_t N, const InitParams& init, Rng& rng);

struct HomogeneousRecord {
  int step = 0;
  double time = 0.0;
  double M4 = 0.0;
  double Pxx = 0.0;
  std::int64_t collisions = 0;    // cumulative
  std::int64_t maxw_samples = 0;  // cumulative
  double cost = 0.0;              // collisions + maxw_samples / 2
  double m_max = 0.0;
};

struct RunReport {
  RunConfig config;
  std::vector<HomogeneousRecord> records;  // homogeneous runs
  SpatialProfile profile;                  // shock runs
  StepReport totals;
  std::int64_t retries = 0;
  std::int64_t cap_hits = 0;
};

RunReport run_homogeneous(const RunConfig& cfg);
RunReport run_shock_experiment(const RunConfig& cfg);
RunReport run_experiment(const RunConfig& cfg);

// Mean and sample standard deviation of M4 and Pxx over independent Bird
// replicas, one row per output step.
struct ReferenceRow {
  int step = 0;
  double time = 0.0;
  double M4_mean = 0.0;
  double M4_sd = 0.0;
  double Pxx_mean = 0.0;
  double Pxx_sd = 0.0;
};

// Seed of replica r, derived from the master seed.
std::uint64_t replica_seed(std::uint64_t master, int replica);

std::vector<ReferenceRow> run_reference_homogeneous(const RunConfig& cfg, int replicas);

// Bird shock profile averaged over `replicas` runs with
// reference.particles_per_cell particles per upstream cell.
SpatialProfile run_reference_shock(const RunConfig& cfg, int replicas);

inline constexpr const char* kHomogeneousHeader = "step,time,M4,Pxx,collisions,maxw_samples,cost,m_max";
inline constexpr const char* kShockHeader = "cell_center_x,rho,ux,T,collisions,m_max_mean";
inline constexpr const char* kReferenceHeader = "step,time,M4_mean,M4_sd,Pxx_mean,Pxx_sd";

std::string format_report(const RunReport& rep);
std::string format_reference(const std::vector<ReferenceRow>& rows);
std::string format_profile(const SpatialProfile& prof);

// Writes the CSV to `path` and the config echo to `path + ".meta"`.
void emit_report(const RunReport& rep, const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace trmc
