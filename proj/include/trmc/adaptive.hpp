#pragma once

// Adaptive truncation order: after each attempt the change of an
// equilibrium indicator decides whether to halve, keep or double m_max.
// A doubled attempt keeps every collision already performed and only
// redistributes the particles that were headed for the Maxwellian.

#include <cstdint>
#include <span>
#include <string_view>

#include "trmc/engine.hpp"

namespace trmc {

enum class Indicator { M4, Pxx };

Indicator parse_indicator(std::string_view name);
std::string_view indicator_name(Indicator ind);

struct AdaptiveConfig {
  double delta1 = 0.005;
  double delta2 = 0.01;
  int m_init = 2;
  int m_min = 1;
  int m_cap = 64;
  Indicator indicator = Indicator::Pxx;

  void validate() const;  // throws ConfigError
  bool operator==(const AdaptiveConfig&) const = default;
};

struct AdaptiveState {
  int m_max = 2;
  double last_indicator = 0.0;
  // last_indicator describes the ensemble as it is now. Cleared by anything
  // that changes the ensemble between steps (transport); the next step then
  // measures its starting indicator instead.
  bool indicator_current = false;
  std::int64_t steps = 0;
  std::int64_t retries = 0;        // doublings, all steps
  std::int64_t cap_hits = 0;       // steps force-accepted at m_cap
  std::int64_t fallbacks = 0;      // indicator changes taken as absolute values
  int last_step_retries = 0;
  int last_step_m = 0;             // order the last step was accepted at

  static AdaptiveState start(const AdaptiveConfig& cfg);
};

enum class Decision { AcceptHalve, AcceptKeep, RejectDouble };

struct IndicatorChange {
  double value = 0.0;
  bool fallback = false;  // S_prev was zero: value is |S_new|
};

IndicatorChange indicator_change(double s_prev, double s_new);

// Pure three-branch rule. E1 above delta2 at m_max >= m_cap is force-accepted
// as AcceptKeep; a NaN E1 counts as above delta2.
Decision adapt_decision(double e1, const AdaptiveConfig& cfg, const AdaptiveState& st);

double indicator_value(const Moments& mom, Indicator ind);

// Indicator of the Maxwellian M(rho, u, T) measured about the ensemble mean
// velocity u_ref (Pxx is central, M4 is raw).
double maxwellian_indicator(Indicator ind, double rho, Velocity3 u, double T, Velocity3 u_ref);

// Post-step indicator with the pool about to be thermalized replaced by its
// own Maxwellian analytically. The pool keeps its momentum and energy, so
// the ensemble mean is unchanged.
double estimate_indicator_cheap(const ParticleEnsemble& ens, std::span<const std::uint32_t> pool,
                                Indicator ind);

// Doubles the truncation order of an open step (capped at m_cap) and serves
// the new levels. Throws NumericalError("no retry state") when the engine
// holds no uncommitted step. Returns false when the split had nothing left
// to redistribute.
bool retry_with_double(AdaptiveState& st, const AdaptiveConfig& cfg, RecursiveEngine& engine,
                       Rng& rng);

// One adaptive step. Updates st.m_max for the next step. The starting
// indicator is the previous step's estimate while it is current, so that
// E1 compares like with like.
StepReport relax_step_rad(ParticleEnsemble& ens, const RelaxParams& params,
                          const KernelParams& kernel, const AdaptiveConfig& cfg,
                          AdaptiveState& st, Rng& rng, bool update_sigma = false);

}  // namespace trmc
