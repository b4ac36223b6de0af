#include "trmc/kinetics.hpp"

#include <algorithm>
#include <string>

#include "trmc/error.hpp"
#include "trmc/simd/kernels.hpp"

namespace trmc {
namespace {

simd::Vec3 to_vec(Velocity3 v) { return {v.vx, v.vy, v.vz}; }

struct PoolStats {
  Velocity3 mean;
  double temperature = 0.0;
};

PoolStats stats_of(std::span<const double> vx, std::span<const double> vy,
                   std::span<const double> vz) {
  const std::size_t n = vx.size();
  const auto s = simd::sum_velocity(vx.data(), vy.data(), vz.data(), n);
  const double inv = 1.0 / static_cast<double>(n);
  PoolStats st;
  st.mean = {s.sx * inv, s.sy * inv, s.sz * inv};
  const auto c = simd::central_sums(vx.data(), vy.data(), vz.data(), n, to_vec(st.mean));
  st.temperature = c.sq * inv / 3.0;
  return st;
}

// Overwrites the arrays with Gaussian draws reshaped to the exact mean and
// temperature requested.
void fill_exact_gaussian(std::span<double> vx, std::span<double> vy, std::span<double> vz,
                         Velocity3 mean, double temperature, Rng& rng) {
  const std::size_t n = vx.size();
  if (temperature <= 0.0 || n == 1) {
    std::fill(vx.begin(), vx.end(), mean.vx);
    std::fill(vy.begin(), vy.end(), mean.vy);
    std::fill(vz.begin(), vz.end(), mean.vz);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    vx[i] = rng.normal();
    vy[i] = rng.normal();
    vz[i] = rng.normal();
  }
  const PoolStats drawn = stats_of(vx, vy, vz);
  const double scale = std::sqrt(temperature / drawn.temperature);
  simd::affine(vx.data(), vy.data(), vz.data(), n, to_vec(drawn.mean), scale, to_vec(mean));
}

}  // namespace

ParticleEnsemble::ParticleEnsemble(std::size_t n, double weight)
    : vx_(n, 0.0), vy_(n, 0.0), vz_(n, 0.0) {
  set_weight(weight);
}

void ParticleEnsemble::set_weight(double w) {
  if (!(w > 0.0)) throw NumericalError("particle weight must be positive");
  weight_ = w;
}

void ParticleEnsemble::push_back(Velocity3 v) {
  vx_.push_back(v.vx);
  vy_.push_back(v.vy);
  vz_.push_back(v.vz);
}

void ParticleEnsemble::resize(std::size_t n) {
  vx_.resize(n);
  vy_.resize(n);
  vz_.resize(n);
}

void ParticleEnsemble::reserve(std::size_t n) {
  vx_.reserve(n);
  vy_.reserve(n);
  vz_.reserve(n);
}

void ParticleEnsemble::clear() {
  vx_.clear();
  vy_.clear();
  vz_.clear();
}

void KernelParams::validate() const {
  if (!(K > 0.0)) throw NumericalError("kernel constant K must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw NumericalError("kernel exponent alpha must lie in [0,1]");
}

Moments compute_moments(const ParticleEnsemble& ens) {
  if (ens.empty()) throw NumericalError("empty ensemble");
  const std::size_t n = ens.size();
  const double inv = 1.0 / static_cast<double>(n);
  const auto s = simd::sum_velocity(ens.vx().data(), ens.vy().data(), ens.vz().data(), n);

  Moments m;
  m.rho = ens.weight() * static_cast<double>(n);
  m.u = {s.sx * inv, s.sy * inv, s.sz * inv};
  const auto c =
      simd::central_sums(ens.vx().data(), ens.vy().data(), ens.vz().data(), n, to_vec(m.u));
  m.T = c.sq * inv / 3.0;
  m.p = m.rho * m.T;
  m.E = 1.5 * m.rho * m.T + 0.5 * m.rho * m.u.norm2();
  m.M4 = ens.weight() * c.quartic;
  m.Pxx = ens.weight() * c.sq_x;
  return m;
}

Totals compute_totals(const ParticleEnsemble& ens) {
  Totals t;
  t.count = ens.size();
  if (ens.empty()) return t;
  const auto s =
      simd::sum_velocity(ens.vx().data(), ens.vy().data(), ens.vz().data(), ens.size());
  t.momentum = {s.sx, s.sy, s.sz};
  const auto c = simd::central_sums(ens.vx().data(), ens.vy().data(), ens.vz().data(),
                                    ens.size(), simd::Vec3{});
  t.energy = c.sq;
  return t;
}

Velocity3 scattering_direction(double xi1, double xi2) {
  const double cos_theta = 2.0 * xi1 - 1.0;
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const double phi = 2.0 * std::numbers::pi * xi2;
  return {std::cos(phi) * sin_theta, std::sin(phi) * sin_theta, cos_theta};
}

std::pair<Velocity3, Velocity3> collide_pair(Velocity3 vi, Velocity3 vj, double xi1, double xi2) {
  const Velocity3 centre = 0.5 * (vi + vj);
  const double half_speed = 0.5 * (vi - vj).norm();
  const Velocity3 offset = half_speed * scattering_direction(xi1, xi2);
  return {centre + offset, centre - offset};
}

double cross_section(Velocity3 vi, Velocity3 vj, const KernelParams& params) {
  return params.sigma((vi - vj).norm());
}

double sigma_upper_bound(const ParticleEnsemble& ens, const KernelParams& params) {
  if (ens.empty()) throw NumericalError("empty ensemble");
  if (params.alpha == 0.0) return params.K;
  const std::size_t n = ens.size();
  const auto s = simd::sum_velocity(ens.vx().data(), ens.vy().data(), ens.vz().data(), n);
  const double inv = 1.0 / static_cast<double>(n);
  const simd::Vec3 mean{s.sx * inv, s.sy * inv, s.sz * inv};
  const double dv2 =
      simd::max_deviation_sq(ens.vx().data(), ens.vy().data(), ens.vz().data(), n, mean);
  return params.sigma(2.0 * std::sqrt(dv2));
}

KernelParams majorant_for(const ParticleEnsemble& ens, double K, double alpha, double mu_floor) {
  KernelParams p;
  p.K = K;
  p.alpha = alpha;
  p.validate();
  p.Sigma = sigma_upper_bound(ens, p);
  const double rho = ens.weight() * static_cast<double>(ens.size());
  p.mu = std::max(4.0 * std::numbers::pi * rho * p.Sigma, mu_floor);
  return p;
}

ParticleEnsemble sample_maxwellian(const Moments& mom, std::size_t n, Rng& rng) {
  if (n == 0) throw NumericalError("sample_maxwellian needs at least one particle");
  if (mom.T < 0.0) throw NumericalError("negative temperature");
  if (n == 1 && mom.T > 0.0) throw NumericalError("cannot match two moments with one particle");
  const double rho = mom.rho > 0.0 ? mom.rho : 1.0;
  ParticleEnsemble ens(n, rho / static_cast<double>(n));
  fill_exact_gaussian(ens.vx(), ens.vy(), ens.vz(), mom.u, mom.T, rng);
  return ens;
}

std::size_t thermalize(ParticleEnsemble& ens, std::span<const std::uint32_t> indices, Rng& rng) {
  const std::size_t n = indices.size();
  if (n == 0) return 0;
  std::vector<double> bx(n), by(n), bz(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = indices[k];
    bx[k] = ens.vx()[i];
    by[k] = ens.vy()[i];
    bz[k] = ens.vz()[i];
  }
  const PoolStats pool = stats_of(bx, by, bz);
  fill_exact_gaussian(bx, by, bz, pool.mean, pool.temperature, rng);
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = indices[k];
    ens.vx()[i] = bx[k];
    ens.vy()[i] = by[k];
    ens.vz()[i] = bz[k];
  }
  return n;
}

}  // namespace trmc
