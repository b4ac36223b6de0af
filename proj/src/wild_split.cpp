#include "trmc/wild_split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trmc/error.hpp"

namespace trmc {
namespace {

// Untruncated splits stop opening new levels here; anything left over is
// thermalized. Reached only when 1 - tau is below ~1e-5 per particle.
constexpr int kMaxLevels = 1 << 20;

void continue_levels(SplitState& s, int upto, Rng& rng) {
  std::int64_t remaining = s.thermalized;
  const int limit = std::min(upto, kMaxLevels);
  while (remaining > 0 && s.level < limit) {
    // lambda_n = lambda_{n-1} - omega_{n-1} = tau^n exactly; the running
    // product avoids the cancellation of the subtraction.
    s.lambda *= s.tau;
    s.omega *= s.tau;
    if (s.lambda <= 0.0) break;
    ++s.level;
    const double expected = s.omega / s.lambda * static_cast<double>(remaining);
    const std::int64_t n = std::min(integer_round(expected, rng), remaining);
    s.sizes.push_back(n);
    remaining -= n;
  }
  s.thermalized = remaining;
}

}  // namespace

RelaxParams RelaxParams::make(double dt, double eps, double mu) {
  RelaxParams p;
  p.dt = dt;
  p.eps = eps;
  p.mu = mu;
  p.tau = relax_tau(dt, eps, mu);
  return p;
}

double relax_tau(double dt, double eps, double mu) {
  if (!(dt >= 0.0) || !(eps > 0.0) || !(mu > 0.0))
    throw NumericalError("relax_tau needs dt >= 0, eps > 0, mu > 0");
  return std::clamp(-std::expm1(-mu * dt / eps), 0.0, 1.0);
}

std::int64_t integer_round(double x, Rng& rng) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw NumericalError("integer_round needs finite x >= 0");
  const double base = std::floor(x);
  const double frac = x - base;
  return static_cast<std::int64_t>(base) + (rng.uniform() < frac ? 1 : 0);
}

std::int64_t sample_geometric_depth(double tau, Rng& rng) {
  if (!(tau >= 0.0 && tau < 1.0)) throw NumericalError("geometric depth needs tau in [0,1)");
  if (tau == 0.0) return 0;
  const double u = 1.0 - rng.uniform();  // (0, 1]
  return static_cast<std::int64_t>(std::floor(std::log(u) / std::log(tau)));
}

std::int64_t SplitState::sum() const {
  return std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0}) + thermalized;
}

SplitState split_collision_sets(std::int64_t N, double tau, int m, Rng& rng) {
  if (N < 1) throw NumericalError("split needs N >= 1");
  if (!(tau >= 0.0 && tau <= 1.0)) throw NumericalError("split needs tau in [0,1]");
  if (m < 1) throw NumericalError("split needs m >= 1");

  SplitState s;
  s.tau = tau;
  s.m = m;
  s.total = N;
  if (tau >= 1.0) {
    // Full thermalization: every collision set is empty.
    s.sizes.assign(1, 0);
    s.thermalized = N;
    s.level = m;
    s.lambda = 0.0;
    s.omega = 0.0;
    return s;
  }
  s.lambda = 1.0;
  s.omega = 1.0 - tau;
  const std::int64_t n0 = std::min(integer_round(s.omega * static_cast<double>(N), rng), N);
  s.sizes.push_back(n0);
  s.thermalized = N - n0;
  s.level = 0;
  continue_levels(s, m, rng);
  return s;
}

void extend_split(SplitState& split, int new_m, Rng& rng) {
  if (new_m <= split.m) return;
  split.m = new_m;
  // A split that ran out of particles (or reached full thermalization) has
  // nothing left to redistribute.
  if (split.thermalized == 0 || split.lambda <= 0.0) return;
  continue_levels(split, new_m, rng);
}

}  // namespace trmc
