#include "trmc/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "trmc/error.hpp"

namespace trmc {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

HomogeneousRecord record_of(int step, double time, const ParticleEnsemble& ens,
                            const StepReport& cum, double m_max) {
  const Moments m = compute_moments(ens);
  HomogeneousRecord r;
  r.step = step;
  r.time = time;
  r.M4 = m.M4;
  r.Pxx = m.Pxx;
  r.collisions = cum.collisions;
  r.maxw_samples = cum.maxwellian_samples;
  r.cost = cum.effective_cost();
  r.m_max = m_max;
  return r;
}

}  // namespace

ParticleEnsemble init_two_maxwellians(std::int64_t N, const InitParams& init, Rng& rng) {
  if (N < 2 || N % 2 != 0) throw NumericalError("two-Maxwellian data needs an even N >= 2");
  const auto half = static_cast<std::size_t>(N / 2);
  Moments a;
  a.rho = 0.5;
  a.u = {init.u1x, 0.0, 0.0};
  a.T = half == 1 ? 0.0 : init.T1;
  Moments b = a;
  b.u = {init.u2x, 0.0, 0.0};
  b.T = half == 1 ? 0.0 : init.T2;
  const ParticleEnsemble pa = sample_maxwellian(a, half, rng);
  const ParticleEnsemble pb = sample_maxwellian(b, half, rng);
  ParticleEnsemble ens;
  ens.reserve(2 * half);
  for (std::size_t i = 0; i < half; ++i) ens.push_back(pa.velocity(i));
  for (std::size_t i = 0; i < half; ++i) ens.push_back(pb.velocity(i));
  ens.set_weight(1.0 / static_cast<double>(N));
  return ens;
}

RunReport run_homogeneous(const RunConfig& cfg) {
  cfg.validate();
  RunReport rep;
  rep.config = cfg;
  Rng rng = Rng::stream(cfg.seed, 0);
  ParticleEnsemble ens = init_two_maxwellians(cfg.N, cfg.init, rng);
  const double dt = cfg.dt_over_eps * cfg.eps;
  AdaptiveState adaptive = AdaptiveState::start(cfg.scheme.adaptive);

  const double m0 = cfg.scheme.scheme == Scheme::TrmcRad ? adaptive.m_max
                                                        : reported_m_max(cfg.scheme, adaptive);
  rep.records.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  rep.records.push_back(record_of(0, 0.0, ens, rep.totals, m0));
  for (int s = 1; s <= cfg.steps; ++s) {
    rep.totals += collision_step(ens, cfg.scheme, dt, cfg.eps, adaptive, rng);
    rep.records.push_back(record_of(s, s * dt, ens, rep.totals, reported_m_max(cfg.scheme, adaptive)));
  }
  rep.retries = adaptive.retries;
  rep.cap_hits = adaptive.cap_hits;
  return rep;
}

RunReport run_shock_experiment(const RunConfig& cfg) {
  cfg.validate();
  RunReport rep;
  rep.config = cfg;
  rep.profile = run_shock(cfg.shock_config(), cfg.scheme, cfg.seed);
  rep.totals = rep.profile.totals;
  rep.retries = rep.profile.retries;
  rep.cap_hits = rep.profile.cap_hits;
  return rep;
}

RunReport run_experiment(const RunConfig& cfg) {
  return cfg.experiment == Experiment::Homogeneous ? run_homogeneous(cfg) : run_shock_experiment(cfg);
}

std::uint64_t replica_seed(std::uint64_t master, int replica) {
  // splitmix64 finalizer over (master, replica)
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(replica) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<ReferenceRow> run_reference_homogeneous(const RunConfig& cfg, int replicas) {
  if (replicas < 2) throw ConfigError("reference needs at least two replicas");
  RunConfig rc = cfg;
  rc.scheme.scheme = Scheme::Bird;
  const auto rows = static_cast<std::size_t>(cfg.steps) + 1;
  std::vector<double> m4(rows, 0.0), m4sq(rows, 0.0), pxx(rows, 0.0), pxxsq(rows, 0.0);
  std::vector<ReferenceRow> out(rows);
  for (int r = 0; r < replicas; ++r) {
    rc.seed = replica_seed(cfg.seed, r);
    const RunReport rep = run_homogeneous(rc);
    for (std::size_t i = 0; i < rows; ++i) {
      const auto& rec = rep.records[i];
      m4[i] += rec.M4;
      m4sq[i] += rec.M4 * rec.M4;
      pxx[i] += rec.Pxx;
      pxxsq[i] += rec.Pxx * rec.Pxx;
      out[i].step = rec.step;
      out[i].time = rec.time;
    }
  }
  const double R = replicas;
  const auto sd = [R](double s, double sq) {
    const double mean = s / R;
    return std::sqrt(std::max(0.0, (sq - R * mean * mean) / (R - 1.0)));
  };
  for (std::size_t i = 0; i < rows; ++i) {
    out[i].M4_mean = m4[i] / R;
    out[i].M4_sd = sd(m4[i], m4sq[i]);
    out[i].Pxx_mean = pxx[i] / R;
    out[i].Pxx_sd = sd(pxx[i], pxxsq[i]);
  }
  return out;
}

SpatialProfile run_reference_shock(const RunConfig& cfg, int replicas) {
  if (replicas < 1) throw ConfigError("reference needs at least one replica");
  SchemeParams bird = cfg.scheme;
  bird.scheme = Scheme::Bird;
  ShockConfig sc = cfg.shock_config();
  sc.particles_per_cell = cfg.reference_particles_per_cell;
  SpatialProfile avg;
  std::vector<double> t_sq;
  for (int r = 0; r < replicas; ++r) {
    const SpatialProfile p = run_shock(sc, bird, replica_seed(cfg.seed, r));
    if (r == 0) {
      avg = p;
      for (auto& c : avg.cells) c = CellProfile{c.x, 0, 0, 0, c.rho_se, c.ux_se, c.T_se, 0, 0, 0, 0};
      avg.totals = {};
      t_sq.assign(p.cells.size(), 0.0);
    }
    for (std::size_t c = 0; c < p.cells.size(); ++c) {
      auto& a = avg.cells[c];
      a.rho += p.cells[c].rho / replicas;
      a.ux += p.cells[c].ux / replicas;
      a.T += p.cells[c].T / replicas;
      a.collisions += p.cells[c].collisions;
      a.cost += p.cells[c].cost;
      t_sq[c] += p.cells[c].T * p.cells[c].T;
    }
    avg.totals += p.totals;
  }
  if (replicas > 1) {
    for (std::size_t c = 0; c < avg.cells.size(); ++c) {
      auto& a = avg.cells[c];
      const double var = std::max(0.0, (t_sq[c] - replicas * a.T * a.T) / (replicas - 1.0));
      a.T_se = std::sqrt(var / replicas);
    }
  }
  return avg;
}

std::string format_report(const RunReport& rep) {
  if (rep.config.experiment == Experiment::Shock) return format_profile(rep.profile);
  std::string out = kHomogeneousHeader;
  out += '\n';
  for (const auto& r : rep.records) {
    out += std::to_string(r.step) + ',' + num(r.time) + ',' + num(r.M4) + ',' + num(r.Pxx) + ',' +
           std::to_string(r.collisions) + ',' + std::to_string(r.maxw_samples) + ',' + num(r.cost) +
           ',' + num(r.m_max) + '\n';
  }
  return out;
}

std::string format_reference(const std::vector<ReferenceRow>& rows) {
  std::string out = kReferenceHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.step) + ',' + num(r.time) + ',' + num(r.M4_mean) + ',' + num(r.M4_sd) +
           ',' + num(r.Pxx_mean) + ',' + num(r.Pxx_sd) + '\n';
  }
  return out;
}

std::string format_profile(const SpatialProfile& prof) {
  std::string out = kShockHeader;
  out += '\n';
  for (const auto& c : prof.cells) {
    out += num(c.x) + ',' + num(c.rho) + ',' + num(c.ux) + ',' + num(c.T) + ',' +
           std::to_string(c.collisions) + ',' + num(c.m_max_mean) + '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void emit_report(const RunReport& rep, const std::string& path) {
  if (path.empty()) throw ConfigError("no output path");
  write_text(path, format_report(rep));
  write_text(path + ".meta", echo_config(rep.config));
}

}  // namespace trmc
