#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "trmc/bird.hpp"
#include "trmc/engine.hpp"
#include "trmc/experiment.hpp"

using namespace trmc;

namespace {

ParticleEnsemble mixture(std::int64_t n, std::uint64_t seed) {
  Rng rng(seed);
  return init_two_maxwellians(n, InitParams{}, rng);
}

bool conserved(const Totals& a, const Totals& b, double tol) {
  const double scale = std::sqrt(a.energy * static_cast<double>(a.count));
  return a.count == b.count && (a.momentum - b.momentum).norm() <= tol * scale &&
         std::abs(a.energy - b.energy) <= tol * a.energy;
}

double deviatoric(const ParticleEnsemble& e) {
  const Moments m = compute_moments(e);
  return m.Pxx - m.rho * m.T;
}

}  // namespace

TEST_SUITE("recursive") {
  TEST_CASE("tau = 0 leaves the ensemble unchanged") {
    ParticleEnsemble e = mixture(2000, 1);
    const ParticleEnsemble before = e;
    Rng rng(2);
    const StepReport r = relax_step_maxwell(e, RelaxParams::make(0.0, 1.0, 1.0), kUntruncated, rng);
    CHECK(r.collisions == 0);
    CHECK(r.maxwellian_samples == 0);
    CHECK(e == before);
  }

  TEST_CASE("stiff step thermalizes everything and conserves exactly") {
    ParticleEnsemble e = mixture(100000, 3);
    const Totals before = compute_totals(e);
    Rng rng(4);
    const StepReport r = relax_step_maxwell(e, RelaxParams::make(40.0, 1.0, 1.0), 8, rng);
    CHECK(r.maxwellian_samples == 100000);
    CHECK(conserved(before, compute_totals(e), 1e-12));
    const Moments m = compute_moments(e);
    // M4 of a Maxwellian: 15 rho T^2 + 10 rho T |u|^2 + rho |u|^4, u = 0 here
    const double se = std::sqrt((945.0 - 225.0) / 100000.0) * m.T * m.T;
    CHECK(std::abs(m.M4 - 15.0 * m.rho * m.T * m.T) <= 3.0 * se);
  }

  TEST_CASE("every step conserves momentum and energy") {
    for (int m : {1, 3, kUntruncated}) {
      ParticleEnsemble e = mixture(5000, 5);
      const Totals before = compute_totals(e);
      Rng rng(6);
      for (int s = 0; s < 30; ++s) {
        const KernelParams k = majorant_for(e, 0.05, 1.0);
        const StepReport r = relax_step_vhs(e, RelaxParams::make(1.0, 1.0, k.mu), k, m, rng);
        REQUIRE(r.sigma_violations == 0);
        REQUIRE(conserved(before, compute_totals(e), 1e-10));
      }
      for (int s = 0; s < 30; ++s) relax_step_maxwell(e, RelaxParams::make(0.7, 1.0, 1.0), m, rng);
      CHECK(conserved(before, compute_totals(e), 1e-10));
    }
  }

  TEST_CASE("a level-1 sample is one collision of two leaves") {
    ParticleEnsemble e = mixture(1000, 7);
    Rng rng(8);
    RecursiveEngine eng;
    KernelParams k;
    k.alpha = 0.0;
    eng.begin(e, 0.5, 4, k, EngineOptions{CollisionModel::Maxwell, false}, rng);
    const std::size_t pool = eng.leaf_pool().size();
    const auto got = eng.sample(1, rng);
    REQUIRE(got.has_value());
    CHECK(eng.report().collisions == 1);
    CHECK(eng.stored(1) == 1);
    CHECK(eng.leaf_pool().size() == pool - 2);
    const auto leaf = eng.sample(0, rng);
    REQUIRE(leaf.has_value());
    CHECK(eng.report().collisions == 1);
    eng.commit(rng);
  }

  TEST_CASE("untouched fraction is 1 - tau and untouched particles keep their velocities") {
    const double tau = 1.0 - std::exp(-0.8);
    const std::int64_t N = 2000;
    double untouched = 0.0;
    const int reps = 1000;
    Rng rng(9);
    for (int r = 0; r < reps; ++r) {
      ParticleEnsemble e = mixture(N, 10 + r);
      const ParticleEnsemble before = e;
      RecursiveEngine eng;
      KernelParams k;
      k.alpha = 0.0;
      eng.begin(e, tau, kUntruncated, k, EngineOptions{CollisionModel::Maxwell, false}, rng);
      const std::vector<std::uint32_t> keep(eng.untouched().begin(), eng.untouched().end());
      eng.fill(rng);
      eng.commit(rng);
      untouched += static_cast<double>(keep.size());
      if (r < 10)
        for (auto i : keep) REQUIRE(e.velocity(i) == before.velocity(i));
    }
    const double p = 1.0 - tau;
    CHECK(std::abs(untouched / (reps * N) - p) <= 3.0 * std::sqrt(p * (1 - p) / (reps * N)));
  }

  TEST_CASE("Maxwell molecules: acceptance is one when Sigma = K") {
    ParticleEnsemble e = mixture(4000, 11);
    Rng rng(12);
    const KernelParams k = majorant_for(e, 0.3, 0.0);
    CHECK(k.Sigma == 0.3);
    const StepReport r = relax_step_vhs(e, RelaxParams::make(1.0, 1.0, k.mu), k, kUntruncated, rng);
    CHECK(r.dummy_rejections == 0);
    CHECK(r.collisions > 0);
  }

  TEST_CASE("truncated steps follow the Wild-sum deviatoric decay") {
    // Maxwell molecules, isotropic scattering: Pxx - rho T of f_k obeys the
    // Wild recurrence, so a truncated step has a closed-form expectation.
    for (double x : {0.5, 1.0, 2.0}) {
      for (int m : {1, 2, 3, 5}) {
        CAPTURE(x);
        CAPTURE(m);
        const double tau = 1.0 - std::exp(-x);
        const int reps = 6;
        std::vector<double> ratio;
        for (int r = 0; r < reps; ++r) {
          ParticleEnsemble e = mixture(100000, 100 + r);
          const double d0 = deviatoric(e);
          Rng rng(200 + r);
          relax_step_maxwell(e, RelaxParams::make(x, 1.0, 1.0), m, rng);
          ratio.push_back(deviatoric(e) / oracle::wild_deviatoric(d0, tau, m));
        }
        double mean = 0.0, var = 0.0;
        for (double v : ratio) mean += v / reps;
        for (double v : ratio) var += (v - mean) * (v - mean) / (reps - 1);
        const double se = std::sqrt(var / reps);
        CHECK(std::abs(mean - 1.0) <= 3.0 * se + 0.01);
      }
    }
  }

  TEST_CASE("untruncated decay tracks the exact relaxation") {
    // Reuse of stored siblings correlates outputs slightly, so the
    // untruncated step relaxes a little slower than exp(-x/2).
    for (double x : {1.0, 2.0}) {
      ParticleEnsemble e = mixture(100000, 300);
      const double d0 = deviatoric(e);
      Rng rng(301);
      relax_step_maxwell(e, RelaxParams::make(x, 1.0, 1.0), kUntruncated, rng);
      const double ratio = deviatoric(e) / (d0 * std::exp(-x / 2.0));
      CAPTURE(x);
      CHECK(ratio == doctest::Approx(1.0).epsilon(0.04));
    }
  }
}

TEST_SUITE("bird") {
  TEST_CASE("zero step is the identity") {
    ParticleEnsemble e = mixture(500, 13);
    const ParticleEnsemble before = e;
    Rng rng(14);
    const StepReport r = bird_step(e, BirdConfig{0.0, 1.0, majorant_for(e, 1.0, 1.0)}, rng);
    CHECK(r.collisions == 0);
    CHECK(e == before);
  }

  TEST_CASE("Maxwell molecules accept every proposal at the expected rate") {
    ParticleEnsemble e = mixture(2000, 15);
    Rng rng(16);
    const KernelParams k = majorant_for(e, 0.1, 0.0);
    const double expected = 2000 * k.mu * 0.5 / 2.0;
    double sum = 0.0;
    const int reps = 200;
    for (int i = 0; i < reps; ++i) {
      const StepReport r = bird_step(e, BirdConfig{0.5, 1.0, k}, rng);
      REQUIRE(r.dummy_rejections == 0);
      sum += static_cast<double>(r.collisions);
    }
    // stochastic rounding: variance at most 1/4 per step
    CHECK(std::abs(sum / reps - expected) <= 3.0 * std::sqrt(0.25 / reps) + 1e-9);
  }

  TEST_CASE("equilibrium is invariant and conserved") {
    Rng rng(17);
    Moments mom;
    mom.rho = 1.0;
    mom.T = 1.0;
    ParticleEnsemble e = sample_maxwellian(mom, 20000, rng);
    const Totals before = compute_totals(e);
    for (int s = 0; s < 100; ++s) bird_step(e, BirdConfig{0.2, 1.0, majorant_for(e, 0.1, 1.0)}, rng);
    CHECK(conserved(before, compute_totals(e), 1e-10));
    const Moments m = compute_moments(e);
    const double se = std::sqrt((945.0 - 225.0) / 20000.0);
    CHECK(std::abs(m.M4 - 15.0) <= 3.0 * se);
  }

  TEST_CASE("M4 of the mixture relaxes toward equilibrium") {
    ParticleEnsemble e = mixture(20000, 18);
    Rng rng(19);
    double last = compute_moments(e).M4;
    const double target = 15.0 * std::pow(compute_moments(e).T, 2);
    for (int s = 0; s < 10; ++s) {
      bird_step(e, BirdConfig{0.5, 1.0, majorant_for(e, 0.05, 1.0)}, rng);
      const double now = compute_moments(e).M4;
      CHECK(now <= target + 1.5);
      CHECK(now >= last - 1.5);
      last = now;
    }
  }
}
