#pragma once

// Scheme selection shared by the homogeneous and the spatial drivers.

#include <string_view>

#include "trmc/adaptive.hpp"
#include "trmc/engine.hpp"
#include "trmc/tree.hpp"

namespace trmc {

enum class Scheme { Bird, TrmcR, TrmcRad, TrmcWb };

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme s);

struct SchemeParams {
  Scheme scheme = Scheme::TrmcR;
  double K = 1.0;
  double alpha = 1.0;
  int trmc_m = kUntruncated;
  bool update_sigma = false;
  AdaptiveConfig adaptive;
  LengthDef wb_length = LengthDef::Min;
  double wb_m_max = 5.0;

  bool operator==(const SchemeParams&) const = default;
};

// One collision step of length dt. Sigma and mu are recomputed from the
// ensemble; `adaptive` is only touched by TRMC_RAD.
StepReport collision_step(ParticleEnsemble& ens, const SchemeParams& params, double dt, double eps,
                          AdaptiveState& adaptive, Rng& rng);

// m_max reported for the step just taken (0 for Bird, the truncation order
// for TRMC_R, the accepted order for TRMC_RAD, m_max for TRMC_WB).
double reported_m_max(const SchemeParams& params, const AdaptiveState& adaptive);

}  // namespace trmc
