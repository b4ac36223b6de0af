#include "trmc/bird.hpp"

#include "trmc/error.hpp"

namespace trmc {

StepReport bird_step(ParticleEnsemble& ens, const BirdConfig& cfg, Rng& rng) {
  if (ens.empty()) throw NumericalError("empty ensemble");
  if (!(cfg.dt >= 0.0) || !(cfg.eps > 0.0)) throw NumericalError("bird step needs dt >= 0, eps > 0");
  StepReport rep;
  const std::size_t n = ens.size();
  if (n < 2 || cfg.dt == 0.0) return rep;

  const double expected = static_cast<double>(n) * cfg.kernel.mu * cfg.dt / (2.0 * cfg.eps);
  const std::int64_t proposals = integer_round(expected, rng);
  const double sigma_max = cfg.kernel.Sigma;
  for (std::int64_t p = 0; p < proposals; ++p) {
    const std::size_t i = rng.index(n);
    std::size_t j = rng.index(n - 1);
    if (j >= i) ++j;
    const Velocity3 vi = ens.velocity(i);
    const Velocity3 vj = ens.velocity(j);
    if (cfg.kernel.alpha != 0.0) {
      const double s = cfg.kernel.sigma((vi - vj).norm());
      if (s > sigma_max) ++rep.sigma_violations;
      if (!(sigma_max * rng.uniform() < s)) {
        ++rep.dummy_rejections;
        continue;
      }
    }
    const double xi1 = rng.uniform();
    const double xi2 = rng.uniform();
    const auto [a, b] = collide_pair(vi, vj, xi1, xi2);
    ens.set_velocity(i, a);
    ens.set_velocity(j, b);
    ++rep.collisions;
  }
  return rep;
}

}  // namespace trmc
