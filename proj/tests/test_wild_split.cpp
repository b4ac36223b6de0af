#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "trmc/wild_split.hpp"

using namespace trmc;

namespace {

// Expected level probabilities: (1 - tau) tau^k for k <= m, tau^{m+1} beyond.
std::vector<std::int64_t> sizes_with_tail(const SplitState& s, int m) {
  std::vector<std::int64_t> out;
  for (int k = 0; k <= m; ++k) out.push_back(s.size_at(k));
  out.push_back(s.thermalized);
  return out;
}

}  // namespace

TEST_SUITE("wild-split") {
  TEST_CASE("relax_tau") {
    CHECK(relax_tau(1e-30, 1.0, 1.0) == doctest::Approx(1e-30));
    CHECK(relax_tau(std::log(2.0), 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(1.0 - relax_tau(40.0, 1.0, 1.0) <= 1e-17);
    CHECK(relax_tau(1.0, 2.0, 2.0) == doctest::Approx(1.0 - std::exp(-1.0)));
    const RelaxParams p = RelaxParams::make(0.5, 0.1, 3.0);
    CHECK(p.tau == doctest::Approx(1.0 - std::exp(-15.0)));
  }

  TEST_CASE("integer rounding") {
    Rng rng(1);
    for (int i = 0; i < 100; ++i) CHECK(integer_round(3.0, rng) == 3);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto r = integer_round(2.3, rng);
      REQUIRE((r == 2 || r == 3));
      sum += static_cast<double>(r);
    }
    CHECK(std::abs(sum / n - 2.3) <= 3.0 * std::sqrt(0.21 / n));
  }

  TEST_CASE("geometric depth pmf") {
    Rng rng(2);
    for (int i = 0; i < 100; ++i) CHECK(sample_geometric_depth(0.0, rng) == 0);
    const int n = 1000000;
    std::vector<int> hist(4, 0);
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto k = sample_geometric_depth(0.5, rng);
      mean += static_cast<double>(k);
      if (k < 3) ++hist[static_cast<std::size_t>(k)];
    }
    mean /= n;
    for (int k = 0; k < 3; ++k) {
      const double p = 0.5 * std::pow(0.5, k);
      CHECK(std::abs(hist[static_cast<std::size_t>(k)] / static_cast<double>(n) - p) <=
            3.0 * std::sqrt(p * (1 - p) / n));
    }
    // mean tau/(1-tau) = 1, variance tau/(1-tau)^2 = 2
    CHECK(std::abs(mean - 1.0) <= 3.0 * std::sqrt(2.0 / n));
  }

  TEST_CASE("split edge cases") {
    Rng rng(3);
    const SplitState a = split_collision_sets(1000, 0.0, 4, rng);
    CHECK(a.size_at(0) == 1000);
    CHECK(a.thermalized == 0);
    CHECK(a.sum() == 1000);

    for (int i = 0; i < 50; ++i) {
      const SplitState b = split_collision_sets(1, 0.9, 5, rng);
      int ones = (b.thermalized == 1);
      for (int k = 0; k <= 5; ++k) ones += (b.size_at(k) == 1);
      CHECK(ones == 1);
      CHECK(b.sum() == 1);
    }

    const SplitState c = split_collision_sets(500, 1.0, 3, rng);
    CHECK(c.thermalized == 500);
    CHECK(c.sum() == 500);
  }

  TEST_CASE("split partitions N exactly") {
    Rng rng(4);
    for (int t = 0; t < 100; ++t) {
      const auto N = static_cast<std::int64_t>(1 + rng.index(10000));
      const double tau = rng.uniform();
      const int m = 1 + static_cast<int>(rng.index(20));
      const SplitState s = split_collision_sets(N, tau, m, rng);
      std::int64_t total = s.thermalized;
      for (auto v : s.sizes) {
        REQUIRE(v >= 0);
        total += v;
      }
      REQUIRE(total == N);
    }
  }

  TEST_CASE("split means at tau = 0.5, m = 3") {
    Rng rng(5);
    const std::int64_t N = 100000;
    const int reps = 1000;
    const auto p = oracle::level_probabilities(0.5, 3);
    std::vector<double> mean(p.size(), 0.0);
    for (int r = 0; r < reps; ++r) {
      const auto s = sizes_with_tail(split_collision_sets(N, 0.5, 3, rng), 3);
      for (std::size_t k = 0; k < p.size(); ++k) mean[k] += static_cast<double>(s[k]) / reps;
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
      CAPTURE(k);
      const double sd = std::sqrt(N * p[k] * (1 - p[k]) / reps);
      CHECK(std::abs(mean[k] - N * p[k]) <= 3.0 * sd);
    }
  }

  TEST_CASE("thermalized fraction grows with tau") {
    Rng rng(6);
    double last = -1.0;
    for (int i = 1; i <= 9; ++i) {
      double th = 0.0;
      for (int r = 0; r < 200; ++r) th += static_cast<double>(split_collision_sets(10000, 0.1 * i, 3, rng).thermalized);
      CHECK(th >= last);
      last = th;
    }
  }

  TEST_CASE("extension to a deeper order follows the geometric tail") {
    Rng rng(7);
    const int reps = 400;
    double n3 = 0, n4 = 0, th = 0, first_tail = 0;
    for (int r = 0; r < reps; ++r) {
      SplitState s = split_collision_sets(10000, 0.5, 2, rng);
      first_tail += static_cast<double>(s.thermalized);
      const auto kept = s.sizes;
      extend_split(s, 4, rng);
      for (std::size_t k = 0; k < kept.size(); ++k) REQUIRE(s.sizes[k] == kept[k]);
      REQUIRE(s.sum() == 10000);
      n3 += static_cast<double>(s.size_at(3));
      n4 += static_cast<double>(s.size_at(4));
      th += static_cast<double>(s.thermalized);
    }
    CHECK(std::abs(first_tail / reps - 1250.0) <= 3.0 * std::sqrt(10000 * 0.125 * 0.875 / reps));
    CHECK(std::abs(n3 / reps - 625.0) <= 3.0 * std::sqrt(10000 * 0.0625 * 0.9375 / reps));
    CHECK(std::abs(n4 / reps - 312.5) <= 3.0 * std::sqrt(10000 * 0.03125 * 0.96875 / reps));
    CHECK(std::abs(th / reps - 312.5) <= 3.0 * std::sqrt(10000 * 0.03125 * 0.96875 / reps));
  }

  TEST_CASE("chi-square of level counts") {
    Rng rng(8);
    for (double tau : {0.3, 0.5, 0.8}) {
      for (int m : {2, 5}) {
        CAPTURE(tau);
        CAPTURE(m);
        const auto p = oracle::level_probabilities(tau, m);
        std::vector<double> obs(p.size(), 0.0);
        const std::int64_t N = 10000;
        const int reps = 1000;
        for (int r = 0; r < reps; ++r) {
          const auto s = sizes_with_tail(split_collision_sets(N, tau, m, rng), m);
          for (std::size_t k = 0; k < p.size(); ++k) obs[k] += static_cast<double>(s[k]);
        }
        double chi2 = 0.0;
        const double total = static_cast<double>(N) * reps;
        for (std::size_t k = 0; k < p.size(); ++k) {
          const double e = total * p[k];
          chi2 += (obs[k] - e) * (obs[k] - e) / e;
        }
        CHECK(chi2 <= oracle::chi2_99(static_cast<int>(p.size()) - 1));
      }
    }
  }
}
