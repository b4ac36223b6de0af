#include "trmc/shock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "trmc/error.hpp"
#include "trmc/simd/kernels.hpp"

namespace trmc {

void ShockConfig::validate() const {
  if (!(mach > 1.0)) throw ConfigError("shock.mach must exceed 1");
  if (!(T_L > 0.0) || !(rho_L > 0.0)) throw ConfigError("shock upstream state must be positive");
  if (!(gamma > 1.0)) throw ConfigError("shock.gamma must exceed 1");
  if (n_cells < 1) throw ConfigError("shock.cells must be >= 1");
  if (particles_per_cell < 2) throw ConfigError("shock.particles_per_cell must be >= 2");
  if (!(domain_mfp > 0.0)) throw ConfigError("shock.domain_mfp must be positive");
  if (!(cfl > 0.0)) throw ConfigError("shock.cfl must be positive");
  if (!(dt >= 0.0)) throw ConfigError("shock.dt must be >= 0");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (steps < 1) throw ConfigError("steps must be >= 1");
  if (average_from >= steps) throw ConfigError("shock.average_from must precede the last step");
  if (batches < 2) throw ConfigError("shock.batches must be >= 2");
  if (se_pool < 0) throw ConfigError("shock.se_pool must be >= 0");
  if (threads < 1) throw ConfigError("shock.threads must be >= 1");
}

FlowState upstream_state(const ShockConfig& cfg) {
  FlowState s;
  s.rho = cfg.rho_L;
  s.T = cfg.T_L;
  s.u = {-cfg.mach * std::sqrt(cfg.gamma * cfg.T_L), 0.0, 0.0};
  return s;
}

FlowState rankine_hugoniot_right_state(const ShockConfig& cfg) {
  if (!(cfg.mach > 1.0)) throw NumericalError("no shock");
  const double g = cfg.gamma;
  const double m2 = cfg.mach * cfg.mach;
  const double density_ratio = (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0);
  const double pressure_ratio = (2.0 * g * m2 - (g - 1.0)) / (g + 1.0);
  const FlowState left = upstream_state(cfg);
  FlowState right;
  right.rho = left.rho * density_ratio;
  right.T = left.T * pressure_ratio / density_ratio;
  right.u = {left.u.vx / density_ratio, 0.0, 0.0};
  return right;
}

double mean_relative_speed_pow(double T, double alpha) {
  return std::pow(4.0 * T, 0.5 * alpha) * std::tgamma(0.5 * (3.0 + alpha)) / std::tgamma(1.5);
}

double mean_free_path(double rho, double T, double eps, double K, double alpha) {
  const double mean_speed = std::sqrt(8.0 * T / std::numbers::pi);
  const double frequency = 4.0 * std::numbers::pi * rho * K * mean_relative_speed_pow(T, alpha) / eps;
  return mean_speed / frequency;
}

double one_sided_flux(const FlowState& s, double inward) {
  const double a = inward * s.u.vx;
  if (s.T <= 0.0) return s.rho * std::max(a, 0.0);
  const double st = std::sqrt(s.T);
  const double z = a / st;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return s.rho * (a * cdf + st * pdf);
}

SpatialGrid SpatialGrid::uniform(double x_min, double x_max, int n_cells, double particle_mass) {
  if (!(x_max > x_min) || n_cells < 1 || !(particle_mass > 0.0))
    throw NumericalError("invalid grid");
  SpatialGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n_cells = n_cells;
  g.dx = (x_max - x_min) / n_cells;
  g.particle_mass = particle_mass;
  g.cells.resize(static_cast<std::size_t>(n_cells));
  for (auto& c : g.cells) c.v.set_weight(particle_mass / g.dx);
  return g;
}

int SpatialGrid::cell_of(double x) const {
  const auto c = static_cast<int>(std::floor((x - x_min) / dx));
  return std::clamp(c, 0, n_cells - 1);
}

std::size_t SpatialGrid::total() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.x.size();
  return n;
}

void stream_and_sort(SpatialGrid& grid, double dt) {
  std::vector<Particles> next(grid.cells.size());
  for (auto& c : next) c.v.set_weight(grid.particle_mass / grid.dx);
  for (auto& cell : grid.cells) {
    simd::advance(cell.x.data(), cell.v.vx().data(), cell.x.size(), dt);
    for (std::size_t i = 0; i < cell.x.size(); ++i) {
      const double x = cell.x[i];
      if (x < grid.x_min || x >= grid.x_max) continue;
      auto& dst = next[static_cast<std::size_t>(grid.cell_of(x))];
      dst.x.push_back(x);
      dst.v.push_back(cell.v.velocity(i));
    }
  }
  grid.cells = std::move(next);
}

std::int64_t apply_boundary(SpatialGrid& grid, const Boundary& b, double dt, Rng& rng) {
  const double inward = b.at_min ? 1.0 : -1.0;
  const double expected = one_sided_flux(b.state, inward) * dt / grid.particle_mass;
  const std::int64_t count = integer_round(expected, rng);
  const double a = inward * b.state.u.vx;
  const double st = std::sqrt(std::max(b.state.T, 0.0));
  const double cap = std::max(a, 0.0) + 8.0 * st;
  std::int64_t added = 0;
  for (std::int64_t k = 0; k < count; ++k) {
    // Normal speed c > 0 with density proportional to c N(c; a, T).
    double c = a;
    if (st > 0.0) {
      for (;;) {
        c = a + st * rng.normal();
        if (c <= 0.0) continue;
        if (rng.uniform() * cap < c) break;
      }
    }
    const Velocity3 v{inward * c, b.state.u.vy + st * rng.normal(), b.state.u.vz + st * rng.normal()};
    const double travel = c * dt * (1.0 - rng.uniform());
    const double x = b.at_min ? grid.x_min + travel : grid.x_max - travel;
    if (x < grid.x_min || x >= grid.x_max) continue;
    auto& dst = grid.cells[static_cast<std::size_t>(grid.cell_of(x))];
    dst.x.push_back(x);
    dst.v.push_back(v);
    ++added;
  }
  return added;
}

namespace {

// Time series of one cell quantity over the averaging window.
struct Series {
  std::vector<double> sum;  // per batch
  std::vector<int> count;
  double sq = 0.0;

  void reset(int batches) {
    sum.assign(static_cast<std::size_t>(batches), 0.0);
    count.assign(static_cast<std::size_t>(batches), 0);
  }
  void add(std::size_t batch, double x) {
    sum[batch] += x;
    ++count[batch];
    sq += x * x;
  }
  int n() const {
    int t = 0;
    for (int c : count) t += c;
    return t;
  }
  double mean() const {
    double s = 0.0;
    for (double x : sum) s += x;
    const int t = n();
    return t > 0 ? s / t : 0.0;
  }
  // Squared standard error of the mean from the spread of batch means.
  double batch_var() const {
    std::vector<double> means;
    for (std::size_t b = 0; b < sum.size(); ++b)
      if (count[b] > 0) means.push_back(sum[b] / count[b]);
    if (means.size() < 2) return 0.0;
    double m = 0.0;
    for (double x : means) m += x;
    m /= static_cast<double>(means.size());
    double var = 0.0;
    for (double x : means) var += (x - m) * (x - m);
    return var / static_cast<double>((means.size() - 1) * means.size());
  }
  // Same, treating every sample as independent.
  double naive_var() const {
    const int t = n();
    if (t < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, (sq - t * m * m) / (t - 1)) / t;
  }
};

struct CellAccumulator {
  Series rho, ux, T;
  double m_sum = 0.0;
  double m_peak = 0.0;
  int m_count = 0;
};

// Standard errors: each cell's naive variance times the ratio of batch to
// naive variance summed over cells c-pool..c+pool.
std::vector<double> pooled_se(const std::vector<const Series*>& series, int pool) {
  const int n = static_cast<int>(series.size());
  std::vector<double> naive(series.size()), batch(series.size()), se(series.size());
  for (int c = 0; c < n; ++c) {
    naive[static_cast<std::size_t>(c)] = series[static_cast<std::size_t>(c)]->naive_var();
    batch[static_cast<std::size_t>(c)] = series[static_cast<std::size_t>(c)]->batch_var();
  }
  for (int c = 0; c < n; ++c) {
    const auto i = static_cast<std::size_t>(c);
    if (pool == 0 || naive[i] == 0.0) {
      se[i] = std::sqrt(batch[i]);
      continue;
    }
    double sb = 0.0, sn = 0.0;
    for (int d = std::max(0, c - pool); d <= std::min(n - 1, c + pool); ++d) {
      sb += batch[static_cast<std::size_t>(d)];
      sn += naive[static_cast<std::size_t>(d)];
    }
    se[i] = std::sqrt(naive[i] * sb / sn);
  }
  return se;
}

template <class Fn>
void for_cells(int n_cells, int threads, Fn&& fn) {
  if (threads <= 1 || n_cells < 2) {
    for (int c = 0; c < n_cells; ++c) fn(c);
    return;
  }
  const int workers = std::min(threads, n_cells);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int c = w; c < n_cells; c += workers) fn(c);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

SpatialProfile run_shock(const ShockConfig& cfg, const SchemeParams& scheme, std::uint64_t seed) {
  cfg.validate();
  const FlowState left = upstream_state(cfg);
  const FlowState right = rankine_hugoniot_right_state(cfg);

  const double length =
      cfg.domain_mfp * mean_free_path(left.rho, left.T, 1.0, scheme.K, scheme.alpha);
  const double dx = length / cfg.n_cells;
  SpatialGrid grid =
      SpatialGrid::uniform(-0.5 * length, 0.5 * length, cfg.n_cells, left.rho * dx / cfg.particles_per_cell);
  const double dt =
      cfg.dt > 0.0 ? cfg.dt : cfg.cfl * dx / (std::abs(left.u.vx) + 4.0 * std::sqrt(right.T));

  const auto n_cells = static_cast<std::size_t>(cfg.n_cells);
  std::vector<Rng> cell_rng;
  cell_rng.reserve(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c) cell_rng.push_back(Rng::stream(seed, c));
  Rng rng_min = Rng::stream(seed, n_cells);
  Rng rng_max = Rng::stream(seed, n_cells + 1);
  Rng rng_init = Rng::stream(seed, n_cells + 2);

  for (int c = 0; c < cfg.n_cells; ++c) {
    const FlowState& s = grid.center(c) < 0.0 ? right : left;
    const auto n = static_cast<std::size_t>(integer_round(s.rho * dx / grid.particle_mass, rng_init));
    if (n < 2) continue;
    Moments mom;
    mom.rho = s.rho;
    mom.u = s.u;
    mom.T = s.T;
    auto& cell = grid.cells[static_cast<std::size_t>(c)];
    cell.v = sample_maxwellian(mom, n, rng_init);
    cell.v.set_weight(grid.particle_mass / dx);
    cell.x.resize(n);
    for (auto& x : cell.x) x = grid.x_min + (c + rng_init.uniform()) * dx;
  }

  const int average_from = cfg.average_from >= 0 ? cfg.average_from : cfg.steps / 2;
  const int window = cfg.steps - average_from;
  const int batches = std::min(cfg.batches, window);
  std::vector<AdaptiveState> adaptive(n_cells, AdaptiveState::start(scheme.adaptive));
  std::vector<StepReport> cell_reports(n_cells);
  std::vector<StepReport> step_reports(n_cells);
  std::vector<CellAccumulator> acc(n_cells);
  for (auto& a : acc) {
    a.rho.reset(batches);
    a.ux.reset(batches);
    a.T.reset(batches);
  }

  for (int step = 0; step < cfg.steps; ++step) {
    stream_and_sort(grid, dt);
    for (auto& a : adaptive) a.indicator_current = false;
    apply_boundary(grid, Boundary{right, true}, dt, rng_min);
    apply_boundary(grid, Boundary{left, false}, dt, rng_max);

    for_cells(cfg.n_cells, cfg.threads, [&](int c) {
      const auto ci = static_cast<std::size_t>(c);
      auto& cell = grid.cells[ci];
      step_reports[ci] = {};
      if (cell.v.size() < 2) return;
      step_reports[ci] = collision_step(cell.v, scheme, dt, cfg.eps, adaptive[ci], cell_rng[ci]);
    });

    const bool record = step >= average_from;
    const auto batch = record ? static_cast<std::size_t>(
                                    static_cast<std::int64_t>(step - average_from) * batches / window)
                              : 0;
    for (std::size_t c = 0; c < n_cells; ++c) {
      cell_reports[c] += step_reports[c];
      if (!record) continue;
      auto& a = acc[c];
      const auto& cell = grid.cells[c];
      const double rho = cell.v.weight() * static_cast<double>(cell.v.size());
      a.rho.add(batch, rho);
      if (cell.v.size() >= 2) {
        const Moments m = compute_moments(cell.v);
        a.ux.add(batch, m.u.vx);
        a.T.add(batch, m.T);
      }
      const double mm = reported_m_max(scheme, adaptive[c]);
      a.m_sum += mm;
      a.m_peak = std::max(a.m_peak, mm);
      ++a.m_count;
    }
  }

  SpatialProfile prof;
  prof.dt = dt;
  prof.dx = dx;
  prof.x_min = grid.x_min;
  prof.x_max = grid.x_max;
  prof.steps = cfg.steps;
  prof.average_from = average_from;
  prof.cells.resize(n_cells);
  std::vector<const Series*> rho_s, ux_s, T_s;
  for (const auto& a : acc) {
    rho_s.push_back(&a.rho);
    ux_s.push_back(&a.ux);
    T_s.push_back(&a.T);
  }
  const auto rho_se = pooled_se(rho_s, cfg.se_pool);
  const auto ux_se = pooled_se(ux_s, cfg.se_pool);
  const auto T_se = pooled_se(T_s, cfg.se_pool);
  for (std::size_t c = 0; c < n_cells; ++c) {
    auto& p = prof.cells[c];
    const auto& a = acc[c];
    p.x = grid.center(static_cast<int>(c));
    p.rho = a.rho.mean();
    p.ux = a.ux.mean();
    p.T = a.T.mean();
    p.rho_se = rho_se[c];
    p.ux_se = ux_se[c];
    p.T_se = T_se[c];
    p.collisions = cell_reports[c].collisions;
    p.cost = cell_reports[c].effective_cost();
    p.m_max_mean = a.m_count > 0 ? a.m_sum / a.m_count : 0.0;
    p.m_max_peak = a.m_peak;
    prof.totals += cell_reports[c];
    prof.retries += adaptive[c].retries;
    prof.cap_hits += adaptive[c].cap_hits;
  }
  return prof;
}

}  // namespace trmc
