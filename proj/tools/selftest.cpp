#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "trmc/experiment.hpp"
#include "trmc/simd/kernels.hpp"

using namespace trmc;

namespace {

struct Check {
  std::string name;
  std::function<bool()> run;
};

bool conserves(Scheme scheme) {
  RunConfig cfg;
  cfg.N = 2000;
  cfg.steps = 20;
  cfg.scheme.scheme = scheme;
  cfg.scheme.K = 0.05;
  cfg.scheme.adaptive.m_cap = 1 << 12;
  Rng rng(7);
  ParticleEnsemble ens = init_two_maxwellians(cfg.N, cfg.init, rng);
  const Totals before = compute_totals(ens);
  AdaptiveState st = AdaptiveState::start(cfg.scheme.adaptive);
  for (int s = 0; s < cfg.steps; ++s) collision_step(ens, cfg.scheme, 1.0, 1.0, st, rng);
  const Totals after = compute_totals(ens);
  const double scale = std::sqrt(before.energy * static_cast<double>(before.count));
  return after.count == before.count &&
         (after.momentum - before.momentum).norm() <= 1e-9 * scale &&
         std::abs(after.energy - before.energy) <= 1e-9 * before.energy;
}

}  // namespace

int run_selftest(std::ostream& out) {
  const std::vector<Check> checks = {
      {"conservation BIRD", [] { return conserves(Scheme::Bird); }},
      {"conservation TRMC_R", [] { return conserves(Scheme::TrmcR); }},
      {"conservation TRMC_RAD", [] { return conserves(Scheme::TrmcRad); }},
      {"conservation TRMC_WB", [] { return conserves(Scheme::TrmcWb); }},
      {"balanced tree k=7 lengths (7, 3, 3)",
       [] {
         return build_balanced_tree(7, LengthDef::Coeff).length == 7.0 &&
                build_balanced_tree(7, LengthDef::Min).length == 3.0 &&
                build_balanced_tree(7, LengthDef::Mean).length == 3.0;
       }},
      {"Rankine-Hugoniot Mach 3",
       [] {
         ShockConfig cfg;
         const FlowState r = rankine_hugoniot_right_state(cfg);
         const FlowState l = upstream_state(cfg);
         return std::abs(r.rho / l.rho - 3.0) < 1e-12 && std::abs(r.T / l.T - 11.0 / 3.0) < 1e-12;
       }},
      {"SIMD kernels match scalar",
       [] {
         Rng rng(3);
         std::vector<double> x(1003), y(1003), z(1003);
         for (std::size_t i = 0; i < x.size(); ++i) {
           x[i] = rng.normal();
           y[i] = rng.normal();
           z[i] = rng.normal();
         }
         const auto a = simd::table(simd::Isa::Scalar).sum_velocity(x.data(), y.data(), z.data(), x.size());
         const auto b = simd::sum_velocity(x.data(), y.data(), z.data(), x.size());
         return std::abs(a.sx - b.sx) <= 1e-12 * x.size() && std::abs(a.sy - b.sy) <= 1e-12 * x.size();
       }},
  };
  int failures = 0;
  for (const auto& c : checks) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      out << "  error: " << e.what() << '\n';
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << '\n';
    if (!ok) ++failures;
  }
  return failures;
}
