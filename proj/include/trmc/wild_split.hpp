#pragma once

// Time-relaxed bookkeeping: the relaxation parameter tau, stochastic integer
// rounding and the partition of N particles into collision sets.

#include <cstdint>
#include <limits>
#include <vector>

#include "trmc/rng.hpp"

namespace trmc {

struct RelaxParams {
  double dt = 1.0;
  double eps = 1.0;
  double mu = 1.0;
  double tau = 0.0;  // 1 - exp(-mu dt / eps)

  static RelaxParams make(double dt, double eps, double mu);
};

// Truncation order meaning "never truncate": sets are filled until the
// particles run out.
inline constexpr int kUntruncated = std::numeric_limits<int>::max();

// 1 - exp(-mu dt / eps), evaluated with expm1. Lies in [0, 1]; it rounds to
// exactly 1 once mu dt / eps exceeds about 37.
double relax_tau(double dt, double eps, double mu);

// floor(x) with probability floor(x)+1-x, floor(x)+1 otherwise.
std::int64_t integer_round(double x, Rng& rng);

// Number of collisions n >= 0 with P(n) = (1 - tau) tau^n.
std::int64_t sample_geometric_depth(double tau, Rng& rng);

// Collision-set sizes N_0..N_m plus the thermalized count N_{m+1}.
//
// `sizes` holds only the levels actually reached: when the particles run out
// at level n < m the vector stops at n and every later set is zero. The
// recursion state is kept so the split can be continued to a deeper order.
struct SplitState {
  double tau = 0.0;
  int m = 1;
  std::int64_t total = 0;
  std::vector<std::int64_t> sizes;
  std::int64_t thermalized = 0;

  // Continuation scratch: last level processed, tail mass lambda_n and the
  // next weight omega_n.
  int level = 0;
  double lambda = 1.0;
  double omega = 1.0;

  std::int64_t size_at(int k) const {
    return k >= 0 && k < static_cast<int>(sizes.size()) ? sizes[static_cast<std::size_t>(k)] : 0;
  }
  int deepest_level() const { return static_cast<int>(sizes.size()) - 1; }
  std::int64_t sum() const;
};

SplitState split_collision_sets(std::int64_t N, double tau, int m, Rng& rng);

// Re-splits the thermalized particles over levels m+1..new_m, leaving the
// remainder thermalized. Used when a truncation order is doubled.
void extend_split(SplitState& split, int new_m, Rng& rng);

}  // namespace trmc
