#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "trmc/adaptive.hpp"
#include "trmc/error.hpp"
#include "trmc/experiment.hpp"

using namespace trmc;

namespace {

AdaptiveConfig paper_deltas() {
  AdaptiveConfig c;
  c.delta1 = 0.005;
  c.delta2 = 0.01;
  return c;
}

}  // namespace

TEST_SUITE("adaptive") {
  TEST_CASE("indicator change") {
    CHECK(indicator_change(1.5, 1.5).value == 0.0);
    CHECK(indicator_change(2.0, 2.02).value == doctest::Approx(0.01));
    const IndicatorChange z = indicator_change(0.0, 0.0);
    CHECK(z.value == 0.0);
    CHECK(z.fallback);
    CHECK(indicator_change(0.0, 0.3).value == doctest::Approx(0.3));
  }

  TEST_CASE("three-branch decision") {
    const AdaptiveConfig c = paper_deltas();
    AdaptiveState st = AdaptiveState::start(c);
    CHECK(adapt_decision(0.001, c, st) == Decision::AcceptHalve);
    CHECK(adapt_decision(0.007, c, st) == Decision::AcceptKeep);
    CHECK(adapt_decision(0.02, c, st) == Decision::RejectDouble);
    CHECK(adapt_decision(std::numeric_limits<double>::quiet_NaN(), c, st) == Decision::RejectDouble);
    st.m_max = c.m_cap;
    CHECK(adapt_decision(0.02, c, st) == Decision::AcceptKeep);
  }

  TEST_CASE("decision is monotone in E1") {
    const AdaptiveConfig c = paper_deltas();
    const AdaptiveState st = AdaptiveState::start(c);
    int last = 0;
    for (double e = 0.0; e < 0.05; e += 1e-4) {
      const int d = static_cast<int>(adapt_decision(e, c, st));
      CHECK(d >= last);
      last = d;
    }
  }

  TEST_CASE("config validation") {
    AdaptiveConfig c = paper_deltas();
    CHECK_NOTHROW(c.validate());
    c.delta1 = 0.02;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = paper_deltas();
    c.m_min = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK(parse_indicator("M4") == Indicator::M4);
    CHECK_THROWS_AS(parse_indicator("TXX"), ConfigError);
  }

  TEST_CASE("cheap estimate: empty, full and half pools") {
    Rng rng(1);
    ParticleEnsemble e = init_two_maxwellians(2000, InitParams{}, rng);
    for (Indicator ind : {Indicator::Pxx, Indicator::M4}) {
      const Moments all = compute_moments(e);
      CHECK(estimate_indicator_cheap(e, {}, ind) == doctest::Approx(indicator_value(all, ind)).epsilon(1e-12));

      std::vector<std::uint32_t> every(e.size());
      for (std::uint32_t i = 0; i < every.size(); ++i) every[i] = i;
      CHECK(estimate_indicator_cheap(e, every, ind) ==
            doctest::Approx(maxwellian_indicator(ind, all.rho, all.u, all.T, all.u)).epsilon(1e-12));

      // Pool = every other particle: collided half measured, pool analytic.
      std::vector<std::uint32_t> half;
      ParticleEnsemble pool(0, e.weight()), rest(0, e.weight());
      for (std::uint32_t i = 0; i < e.size(); ++i) {
        if (i % 2 == 0) {
          half.push_back(i);
          pool.push_back(e.velocity(i));
        } else {
          rest.push_back(e.velocity(i));
        }
      }
      const Moments pm = compute_moments(pool);
      double measured = 0.0;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        const Velocity3 v = rest.velocity(i);
        const Velocity3 d = v - all.u;
        measured += ind == Indicator::Pxx ? d.vx * d.vx : v.norm2() * v.norm2();
      }
      const double expected =
          e.weight() * measured + maxwellian_indicator(ind, pm.rho, pm.u, pm.T, all.u);
      CHECK(estimate_indicator_cheap(e, half, ind) == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  TEST_CASE("retry needs an open step") {
    AdaptiveConfig c = paper_deltas();
    AdaptiveState st = AdaptiveState::start(c);
    RecursiveEngine eng;
    Rng rng(2);
    CHECK_THROWS_WITH_AS(retry_with_double(st, c, eng, rng), "no retry state", NumericalError);
  }

  TEST_CASE("retry keeps earlier collisions and splits the old Maxwellian pool") {
    AdaptiveConfig c = paper_deltas();
    double n3 = 0, n4 = 0, tail = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
      Rng rng(10 + r);
      ParticleEnsemble e = init_two_maxwellians(10000, InitParams{}, rng);
      const Totals before = compute_totals(e);
      AdaptiveState st = AdaptiveState::start(c);
      st.m_max = 2;
      RecursiveEngine eng;
      KernelParams k;
      k.alpha = 0.0;
      eng.begin(e, 0.5, 2, k, EngineOptions{CollisionModel::Maxwell, false}, rng);
      eng.fill(rng);
      const auto thermal = eng.thermal_set();
      std::vector<char> in_pool(e.size(), 0);
      for (auto i : thermal) in_pool[i] = 1;
      const ParticleEnsemble first = e;
      REQUIRE(retry_with_double(st, c, eng, rng));
      CHECK(st.m_max == 4);
      n3 += static_cast<double>(eng.split().size_at(3));
      n4 += static_cast<double>(eng.split().size_at(4));
      tail += static_cast<double>(eng.split().thermalized);
      eng.commit(rng);
      if (r < 5) {
        for (std::size_t i = 0; i < e.size(); ++i)
          if (!in_pool[i]) REQUIRE(e.velocity(i) == first.velocity(i));
        const Totals after = compute_totals(e);
        CHECK(std::abs(after.energy - before.energy) <= 1e-10 * before.energy);
        CHECK((after.momentum - before.momentum).norm() <= 1e-9 * std::sqrt(before.energy * 1e4));
      }
    }
    CHECK(std::abs(n3 / reps - 625.0) <= 3.0 * std::sqrt(1e4 * 0.0625 * 0.9375 / reps));
    CHECK(std::abs(n4 / reps - 312.5) <= 3.0 * std::sqrt(1e4 * 0.03125 * 0.96875 / reps));
    CHECK(std::abs(tail / reps - 312.5) <= 3.0 * std::sqrt(1e4 * 0.03125 * 0.96875 / reps));
  }

  TEST_CASE("m_max rises early and decays toward equilibrium") {
    RunConfig cfg;
    cfg.N = 50000;
    cfg.steps = 30;
    cfg.scheme.scheme = Scheme::TrmcRad;
    cfg.scheme.K = 0.052;
    cfg.scheme.adaptive.m_cap = 16384;
    const RunReport rep = run_homogeneous(cfg);
    double peak = 0.0;
    for (const auto& r : rep.records) peak = std::max(peak, r.m_max);
    CHECK(peak > 2.0);
    CHECK(rep.records.back().m_max <= peak);
    CHECK(rep.records.back().m_max < peak);
  }

  TEST_CASE("halving floors at m_min") {
    AdaptiveConfig c = paper_deltas();
    c.m_init = 1;
    AdaptiveState st = AdaptiveState::start(c);
    Rng rng(3);
    Moments mom;
    mom.rho = 1.0;
    mom.T = 1.0;
    ParticleEnsemble e = sample_maxwellian(mom, 5000, rng);
    for (int s = 0; s < 10; ++s) {
      const KernelParams k = majorant_for(e, 0.01, 1.0);
      relax_step_rad(e, RelaxParams::make(1.0, 1.0, k.mu), k, c, st, rng);
      REQUIRE(st.m_max >= c.m_min);
    }
  }
}
