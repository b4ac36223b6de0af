#pragma once

// Velocity-space primitives: particle storage, moments, binary collisions,
// variable-hard-sphere cross sections and moment-exact Maxwellian sampling.
//
// Units are nondimensional with unit molecular mass and the gas constant
// absorbed, so p = rho*T and T = (1/3rho) int |v-u|^2 f dv.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "trmc/rng.hpp"

namespace trmc {

struct Velocity3 {
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;

  friend Velocity3 operator+(Velocity3 a, Velocity3 b) {
    return {a.vx + b.vx, a.vy + b.vy, a.vz + b.vz};
  }
  friend Velocity3 operator-(Velocity3 a, Velocity3 b) {
    return {a.vx - b.vx, a.vy - b.vy, a.vz - b.vz};
  }
  friend Velocity3 operator*(double s, Velocity3 a) { return {s * a.vx, s * a.vy, s * a.vz}; }
  friend bool operator==(const Velocity3&, const Velocity3&) = default;

  double norm2() const { return vx * vx + vy * vy + vz * vz; }
  double norm() const { return std::sqrt(norm2()); }
  bool finite() const { return std::isfinite(vx) && std::isfinite(vy) && std::isfinite(vz); }
};

// Equal-weight test particles stored as three velocity arrays. `weight` is
// the density carried by one particle, so rho = weight * size().
class ParticleEnsemble {
 public:
  ParticleEnsemble() = default;
  ParticleEnsemble(std::size_t n, double weight);

  std::size_t size() const { return vx_.size(); }
  bool empty() const { return vx_.empty(); }

  double weight() const { return weight_; }
  void set_weight(double w);

  Velocity3 velocity(std::size_t i) const { return {vx_[i], vy_[i], vz_[i]}; }
  void set_velocity(std::size_t i, Velocity3 v) {
    vx_[i] = v.vx;
    vy_[i] = v.vy;
    vz_[i] = v.vz;
  }

  void push_back(Velocity3 v);
  void resize(std::size_t n);
  void reserve(std::size_t n);
  void clear();

  std::span<double> vx() { return vx_; }
  std::span<double> vy() { return vy_; }
  std::span<double> vz() { return vz_; }
  std::span<const double> vx() const { return vx_; }
  std::span<const double> vy() const { return vy_; }
  std::span<const double> vz() const { return vz_; }

  friend bool operator==(const ParticleEnsemble&, const ParticleEnsemble&) = default;

 private:
  std::vector<double> vx_;
  std::vector<double> vy_;
  std::vector<double> vz_;
  double weight_ = 1.0;
};

struct Moments {
  double rho = 0.0;
  Velocity3 u;
  double T = 0.0;
  double E = 0.0;
  double p = 0.0;
  double M4 = 0.0;   // int f |v|^4 dv
  double Pxx = 0.0;  // int f (vx - ux)^2 dv
};

// Conserved totals of an ensemble, without the weight factor.
struct Totals {
  std::size_t count = 0;
  Velocity3 momentum;  // sum v
  double energy = 0.0;  // sum |v|^2
};

// Variable-hard-sphere kernel B = K |q|^alpha with the per-step majorant.
struct KernelParams {
  double K = 1.0;
  double alpha = 1.0;  // 0 = Maxwell molecules, 1 = hard spheres
  double Sigma = 1.0;  // upper bound of sigma over the current ensemble
  double mu = 4.0 * std::numbers::pi;  // majorant rate 4*pi*rho*Sigma

  // Throws NumericalError unless K > 0 and alpha in [0, 1].
  void validate() const;
  double sigma(double relative_speed) const {
    if (alpha == 1.0) return K * relative_speed;
    if (alpha == 0.5) return K * std::sqrt(relative_speed);
    return alpha == 0.0 ? K : K * std::pow(relative_speed, alpha);
  }
};

inline constexpr double kDefaultMuFloor = 1e-12;

Moments compute_moments(const ParticleEnsemble& ens);
Totals compute_totals(const ParticleEnsemble& ens);

// Direction on S^2 with theta = acos(2 xi1 - 1), phi = 2 pi xi2.
Velocity3 scattering_direction(double xi1, double xi2);

// Post-collision velocities for a given scattering direction.
std::pair<Velocity3, Velocity3> collide_pair(Velocity3 vi, Velocity3 vj, double xi1, double xi2);

double cross_section(Velocity3 vi, Velocity3 vj, const KernelParams& params);

// K * (2 max_i |v_i - vbar|)^alpha. Never below the pairwise maximum by the
// triangle inequality; O(N).
double sigma_upper_bound(const ParticleEnsemble& ens, const KernelParams& params);

// Fills Sigma and mu = max(4 pi rho Sigma, mu_floor) for the ensemble.
KernelParams majorant_for(const ParticleEnsemble& ens, double K, double alpha,
                          double mu_floor = kDefaultMuFloor);

// n velocities whose sample mean is exactly mom.u and whose sample
// temperature is exactly mom.T (up to rounding); weight = mom.rho / n.
ParticleEnsemble sample_maxwellian(const Moments& mom, std::size_t n, Rng& rng);

// Replaces the velocities of the listed particles by a Maxwellian sample
// carrying exactly the same momentum and energy as the particles it
// replaces. Returns the number of samples drawn.
std::size_t thermalize(ParticleEnsemble& ens, std::span<const std::uint32_t> indices, Rng& rng);

}  // namespace trmc
