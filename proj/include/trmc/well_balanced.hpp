#pragma once

// Well-balanced truncation: every f_n request first builds its collision
// tree without colliding. Trees longer than m_max under the chosen length
// functional send the particle to the Maxwellian; the others are replayed.

#include <limits>

#include "trmc/engine.hpp"
#include "trmc/tree.hpp"

namespace trmc {

inline constexpr double kNoLengthLimit = std::numeric_limits<double>::infinity();

StepReport relax_step_wb(ParticleEnsemble& ens, const RelaxParams& params,
                         const KernelParams& kernel, double m_max, LengthDef def, Rng& rng,
                         bool update_sigma = false);

}  // namespace trmc
