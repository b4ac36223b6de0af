#pragma once

// Bird's direct simulation with no-time-counter pair selection: the
// reference scheme for accuracy and cost.

#include "trmc/engine.hpp"

namespace trmc {

struct BirdConfig {
  double dt = 1.0;
  double eps = 1.0;
  KernelParams kernel;  // Sigma and mu must be set for the ensemble
};

// IR(N mu dt / (2 eps)) proposals of distinct random pairs, each accepted
// with probability sigma_ij / Sigma.
StepReport bird_step(ParticleEnsemble& ens, const BirdConfig& cfg, Rng& rng);

}  // namespace trmc
