#include "trmc/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "trmc/error.hpp"
#include "trmc/simd/kernels.hpp"

namespace trmc {

Indicator parse_indicator(std::string_view name) {
  if (name == "M4") return Indicator::M4;
  if (name == "PXX") return Indicator::Pxx;
  throw ConfigError("unknown indicator '" + std::string(name) + "'");
}

std::string_view indicator_name(Indicator ind) {
  return ind == Indicator::M4 ? "M4" : "PXX";
}

void AdaptiveConfig::validate() const {
  if (!(delta1 > 0.0 && delta1 < delta2)) throw ConfigError("adaptive deltas need 0 < delta1 < delta2");
  if (m_min < 1) throw ConfigError("adaptive.m_min must be >= 1");
  if (m_cap < m_min) throw ConfigError("adaptive.m_cap must be >= adaptive.m_min");
  if (m_init < m_min || m_init > m_cap)
    throw ConfigError("adaptive.m_init must lie in [m_min, m_cap]");
}

AdaptiveState AdaptiveState::start(const AdaptiveConfig& cfg) {
  AdaptiveState st;
  st.m_max = cfg.m_init;
  return st;
}

IndicatorChange indicator_change(double s_prev, double s_new) {
  if (s_prev == 0.0) return {std::abs(s_new), true};
  return {std::abs(s_new - s_prev) / std::abs(s_prev), false};
}

Decision adapt_decision(double e1, const AdaptiveConfig& cfg, const AdaptiveState& st) {
  if (e1 < cfg.delta1) return Decision::AcceptHalve;
  if (e1 <= cfg.delta2) return Decision::AcceptKeep;
  return st.m_max >= cfg.m_cap ? Decision::AcceptKeep : Decision::RejectDouble;
}

double indicator_value(const Moments& mom, Indicator ind) {
  return ind == Indicator::M4 ? mom.M4 : mom.Pxx;
}

double maxwellian_indicator(Indicator ind, double rho, Velocity3 u, double T, Velocity3 u_ref) {
  if (ind == Indicator::Pxx) {
    const double d = u.vx - u_ref.vx;
    return rho * (T + d * d);
  }
  const double u2 = u.norm2();
  return rho * (u2 * u2 + 10.0 * u2 * T + 15.0 * T * T);
}

double estimate_indicator_cheap(const ParticleEnsemble& ens, std::span<const std::uint32_t> pool,
                                Indicator ind) {
  if (ens.empty()) throw NumericalError("empty ensemble");
  const std::size_t n = ens.size();
  const double w = ens.weight();
  const auto s = simd::sum_velocity(ens.vx().data(), ens.vy().data(), ens.vz().data(), n);
  const double inv = 1.0 / static_cast<double>(n);
  const Velocity3 u{s.sx * inv, s.sy * inv, s.sz * inv};
  const simd::Vec3 uv{u.vx, u.vy, u.vz};
  const auto all = simd::central_sums(ens.vx().data(), ens.vy().data(), ens.vz().data(), n, uv);
  const double total = ind == Indicator::M4 ? all.quartic : all.sq_x;
  if (pool.empty()) return w * total;

  const std::size_t np = pool.size();
  std::vector<double> bx(np), by(np), bz(np);
  for (std::size_t k = 0; k < np; ++k) {
    bx[k] = ens.vx()[pool[k]];
    by[k] = ens.vy()[pool[k]];
    bz[k] = ens.vz()[pool[k]];
  }
  const auto ps = simd::sum_velocity(bx.data(), by.data(), bz.data(), np);
  const double pinv = 1.0 / static_cast<double>(np);
  const Velocity3 up{ps.sx * pinv, ps.sy * pinv, ps.sz * pinv};
  const auto own = simd::central_sums(bx.data(), by.data(), bz.data(), np, {up.vx, up.vy, up.vz});
  const auto about_u = simd::central_sums(bx.data(), by.data(), bz.data(), np, uv);
  const double pool_measured = ind == Indicator::M4 ? about_u.quartic : about_u.sq_x;
  const double tp = own.sq * pinv / 3.0;
  const double analytic = maxwellian_indicator(ind, w * static_cast<double>(np), up, tp, u);
  return w * (total - pool_measured) + analytic;
}

bool retry_with_double(AdaptiveState& st, const AdaptiveConfig& cfg, RecursiveEngine& engine,
                       Rng& rng) {
  if (!engine.open()) throw NumericalError("no retry state");
  const int new_m = std::min(cfg.m_cap, st.m_max > cfg.m_cap / 2 ? cfg.m_cap : 2 * st.m_max);
  const auto before = engine.split().thermalized;
  st.m_max = new_m;
  ++st.retries;
  ++st.last_step_retries;
  engine.extend(new_m, rng);
  const bool changed = engine.split().thermalized != before;
  engine.fill(rng);
  return changed;
}

StepReport relax_step_rad(ParticleEnsemble& ens, const RelaxParams& params,
                          const KernelParams& kernel, const AdaptiveConfig& cfg,
                          AdaptiveState& st, Rng& rng, bool update_sigma) {
  const double s_prev = st.indicator_current ? st.last_indicator
                                             : indicator_value(compute_moments(ens), cfg.indicator);
  st.last_step_retries = 0;
  RecursiveEngine engine;
  engine.begin(ens, params.tau, st.m_max, kernel,
               EngineOptions{CollisionModel::Vhs, update_sigma}, rng);
  engine.fill(rng);

  Decision decision = Decision::AcceptKeep;
  double s_new = s_prev;
  for (;;) {
    s_new = estimate_indicator_cheap(ens, engine.thermal_set(), cfg.indicator);
    const IndicatorChange change = indicator_change(s_prev, s_new);
    if (change.fallback) ++st.fallbacks;
    decision = adapt_decision(change.value, cfg, st);
    if (decision != Decision::RejectDouble) {
      if (!(change.value <= cfg.delta2)) ++st.cap_hits;
      break;
    }
    if (!retry_with_double(st, cfg, engine, rng)) {
      decision = Decision::AcceptKeep;
      break;
    }
  }
  engine.commit(rng);
  st.last_step_m = st.m_max;
  if (decision == Decision::AcceptHalve) st.m_max = std::max(st.m_max / 2, cfg.m_min);
  st.last_indicator = s_new;
  st.indicator_current = true;
  ++st.steps;
  return engine.report();
}

}  // namespace trmc
