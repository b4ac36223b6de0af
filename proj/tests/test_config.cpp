#include <doctest.h>

#include <string>

#include "trmc/error.hpp"
#include "trmc/experiment.hpp"

using namespace trmc;

TEST_SUITE("config") {
  TEST_CASE("echo and parse round trip") {
    RunConfig c;
    c.experiment = Experiment::Shock;
    c.scheme.scheme = Scheme::TrmcWb;
    c.scheme.K = 0.1 / 3.0;
    c.scheme.alpha = 0.5;
    c.scheme.adaptive.delta1 = 0.004;
    c.scheme.adaptive.m_cap = 512;
    c.scheme.wb_length = LengthDef::Mean;
    c.N = 1234;
    c.eps = 0.01;
    c.steps = 17;
    c.seed = 0xdeadbeefcafeULL;
    c.output = "out/run.csv";
    c.init.u1x = 1.25;
    c.shock.mach = 2.5;
    c.shock.se_pool = 3;
    c.shock.batches = 7;
    const RunConfig back = parse_config_text(echo_config(c));
    CHECK(back == c);
    CHECK(echo_config(back) == echo_config(c));
  }

  TEST_CASE("comments, blanks and defaults") {
    const RunConfig c = parse_config_text("# comment\n\nscheme = BIRD   # trailing\nN = 10\n");
    CHECK(c.scheme.scheme == Scheme::Bird);
    CHECK(c.N == 10);
    CHECK(c.steps == RunConfig{}.steps);
  }

  TEST_CASE("errors carry the line number") {
    CHECK_THROWS_WITH_AS(parse_config_text("N = 10\nbogus = 1\n"), "line 2: unknown key 'bogus'", ConfigError);
    CHECK_THROWS_AS(parse_config_text("N = ten\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("scheme = FOO\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigError);
  }

  TEST_CASE("validation") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    c.N = 3;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = RunConfig{};
    c.steps = 0;
    CHECK_NOTHROW(c.validate());
    c.scheme.adaptive.delta2 = 0.001;
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }
}

TEST_SUITE("experiment") {
  TEST_CASE("two-Maxwellian initial data") {
    Rng rng(1);
    const ParticleEnsemble e = init_two_maxwellians(10000, InitParams{}, rng);
    const Moments m = compute_moments(e);
    CHECK(m.rho == doctest::Approx(1.0));
    CHECK(m.u.norm() <= 1e-12);
    // T_mix = T + (1/3) mean |u_i - u|^2 = 0.5 + 4/3
    CHECK(m.T == doctest::Approx(0.5 + 4.0 / 3.0).epsilon(1e-12));
    const ParticleEnsemble two = init_two_maxwellians(2, InitParams{}, rng);
    CHECK(two.velocity(0).vx == doctest::Approx(2.0));
    CHECK(two.velocity(1).vx == doctest::Approx(-2.0));
    CHECK_THROWS_AS(init_two_maxwellians(11, InitParams{}, rng), NumericalError);
  }

  TEST_CASE("equal halves stay in equilibrium") {
    RunConfig c;
    c.N = 20000;
    c.steps = 10;
    c.scheme.scheme = Scheme::TrmcRad;
    c.scheme.K = 0.05;
    c.init.u1x = 0.0;
    c.init.u2x = 0.0;
    const RunReport rep = run_homogeneous(c);
    const double se = std::sqrt((945.0 - 225.0) / 20000.0) * 0.25;
    for (const auto& r : rep.records) CHECK(std::abs(r.M4 - 15.0 * 0.25) <= 4.0 * se);
  }

  TEST_CASE("zero steps report the initial record only") {
    RunConfig c;
    c.N = 100;
    c.steps = 0;
    const RunReport rep = run_homogeneous(c);
    REQUIRE(rep.records.size() == 1);
    CHECK(rep.records[0].step == 0);
    CHECK(rep.records[0].cost == 0.0);
  }

  TEST_CASE("records are ordered and cumulative") {
    RunConfig c;
    c.N = 2000;
    c.steps = 8;
    c.scheme.scheme = Scheme::TrmcRad;
    c.scheme.K = 0.05;
    const RunReport rep = run_homogeneous(c);
    for (std::size_t i = 1; i < rep.records.size(); ++i) {
      CHECK(rep.records[i].time > rep.records[i - 1].time);
      CHECK(rep.records[i].collisions >= rep.records[i - 1].collisions);
      CHECK(rep.records[i].cost >= rep.records[i - 1].cost);
    }
  }

  TEST_CASE("homogeneous runs are byte-identical for the same seed") {
    for (Scheme s : {Scheme::Bird, Scheme::TrmcR, Scheme::TrmcRad, Scheme::TrmcWb}) {
      RunConfig c;
      c.N = 3000;
      c.steps = 5;
      c.scheme.scheme = s;
      c.scheme.K = 0.05;
      const std::string a = format_report(run_homogeneous(c));
      const std::string b = format_report(run_homogeneous(c));
      CHECK(a == b);
      CHECK(a.rfind(kHomogeneousHeader, 0) == 0);
    }
  }
}
