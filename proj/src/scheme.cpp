#include "trmc/scheme.hpp"

#include <string>

#include "trmc/bird.hpp"
#include "trmc/error.hpp"
#include "trmc/well_balanced.hpp"

namespace trmc {

Scheme parse_scheme(std::string_view name) {
  if (name == "BIRD") return Scheme::Bird;
  if (name == "TRMC_R") return Scheme::TrmcR;
  if (name == "TRMC_RAD") return Scheme::TrmcRad;
  if (name == "TRMC_WB") return Scheme::TrmcWb;
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Bird: return "BIRD";
    case Scheme::TrmcR: return "TRMC_R";
    case Scheme::TrmcRad: return "TRMC_RAD";
    case Scheme::TrmcWb: return "TRMC_WB";
  }
  return "?";
}

StepReport collision_step(ParticleEnsemble& ens, const SchemeParams& params, double dt, double eps,
                          AdaptiveState& adaptive, Rng& rng) {
  const KernelParams kernel = majorant_for(ens, params.K, params.alpha);
  if (params.scheme == Scheme::Bird) return bird_step(ens, BirdConfig{dt, eps, kernel}, rng);

  const RelaxParams relax = RelaxParams::make(dt, eps, kernel.mu);
  switch (params.scheme) {
    case Scheme::TrmcR:
      return relax_step_vhs(ens, relax, kernel, params.trmc_m, rng, params.update_sigma);
    case Scheme::TrmcRad:
      return relax_step_rad(ens, relax, kernel, params.adaptive, adaptive, rng, params.update_sigma);
    case Scheme::TrmcWb:
      return relax_step_wb(ens, relax, kernel, params.wb_m_max, params.wb_length, rng,
                           params.update_sigma);
    case Scheme::Bird: break;
  }
  return {};
}

double reported_m_max(const SchemeParams& params, const AdaptiveState& adaptive) {
  switch (params.scheme) {
    case Scheme::Bird: return 0.0;
    case Scheme::TrmcR: return params.trmc_m == kUntruncated ? 0.0 : params.trmc_m;
    case Scheme::TrmcRad: return adaptive.last_step_m;
    case Scheme::TrmcWb: return params.wb_m_max;
  }
  return 0.0;
}

}  // namespace trmc
