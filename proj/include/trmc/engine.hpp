#pragma once

// Recursive time-relaxed collision engine.
//
// One step partitions the ensemble into collision sets, then for every
// level n = deepest..1 draws the requested number of f_n samples by walking
// a random collision tree: a node of level n picks k uniform in [0, n),
// obtains one f_k and one f_{n-k-1} particle and collides them. An f_k with
// k > 0 comes from the level-k store when one is available; otherwise it is
// produced by a sub-collision whose sibling is stored. Leaves are untouched
// particles popped from the leaf pool. Whatever remains in the pool after all
// levels are served is replaced by a Maxwellian carrying the pool's own
// momentum and energy, so every step conserves mass, momentum and energy.
//
// Every velocity handled here belongs to a real ensemble slot; collisions
// are 2-in-2-out, so the particle count never changes.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "trmc/kinetics.hpp"
#include "trmc/rng.hpp"
#include "trmc/tree.hpp"
#include "trmc/wild_split.hpp"

namespace trmc {

enum class CollisionModel {
  Maxwell,  // every proposal scatters
  Vhs,      // proposal accepted when Sigma * xi < sigma_ij
};

struct StepReport {
  std::int64_t collisions = 0;        // accepted scatterings
  std::int64_t dummy_rejections = 0;  // proposals rejected by the majorant test
  std::int64_t maxwellian_samples = 0;
  std::int64_t sigma_violations = 0;  // proposals with sigma_ij > Sigma
  std::int64_t pool_exhausted = 0;    // trees abandoned for lack of leaves
  std::int64_t wb_thermalized = 0;    // requests moved to the Maxwellian by tree length
  std::int64_t rounding_carries = 0;  // odd or surplus counts passed one level down

  // A Maxwellian sample costs half a collision.
  double effective_cost() const {
    return static_cast<double>(collisions) + 0.5 * static_cast<double>(maxwellian_samples);
  }
  std::int64_t proposals() const { return collisions + dummy_rejections; }

  StepReport& operator+=(const StepReport& o);
};

struct EngineOptions {
  CollisionModel model = CollisionModel::Vhs;
  // Raise Sigma to sigma_ij whenever a proposal exceeds it (off by default;
  // tau stays frozen for the step either way).
  bool update_sigma = false;
};

class RecursiveEngine {
 public:
  // Shuffles the ensemble, splits it into collision sets for truncation
  // order m and sets up the leaf pool. The ensemble must outlive the step.
  void begin(ParticleEnsemble& ens, double tau, int m, const KernelParams& kernel,
             const EngineOptions& options, Rng& rng);

  // Serves every outstanding request, deepest level first.
  void fill(Rng& rng);

  // Retry support: marks everything produced so far as final, then
  // re-splits the not-yet-thermalized particles over the new levels
  // m+1..new_m. Call fill() afterwards. Final particles are never collided
  // again. Sub-collisions of the new trees may still need lower levels;
  // their spares are stored for reuse, and any left over when the next
  // extend() or commit() comes are thermalized with the pool.
  void extend(int new_m, Rng& rng);

  // Thermalizes the leftover leaf pool and the surplus.
  void commit(Rng& rng);

  // One f_n sample. For n > 0 the sibling of the returned particle is stored
  // at level n. Returns nullopt when the leaf pool runs dry.
  std::optional<std::uint32_t> sample(int n, Rng& rng);

  // Collides a pair at level n following the splits fixed in `shape` and
  // random splits elsewhere (everywhere when `shape` is empty). A subtree
  // whose particle is taken from a store is skipped along with its splits.
  // Both products are returned; neither is stored.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> produce_pair(
      int n, Rng& rng, std::span<const TreeNode> shape = {});

  // True while level n still needs a pair. Odd remainders and surpluses
  // are settled first (see balance_level).
  bool pending(int n, Rng& rng);

  // Serves two requests at level n with one pair; false when the leaf pool
  // runs dry.
  bool serve(int n, Rng& rng, std::span<const TreeNode> shape = {});

  // Requests at level n are reduced by one and the particle is left to the
  // Maxwellian instead.
  void defer_to_thermal(int n);

  // True between begin() and commit().
  bool open() const { return open_; }

  int truncation_order() const { return split_.m; }
  int levels() const { return static_cast<int>(need_.size()) - 1; }
  std::int64_t need(int k) const { return need_[static_cast<std::size_t>(k)]; }
  std::size_t stored(int k) const { return stores_[static_cast<std::size_t>(k)].size(); }
  std::span<const std::uint32_t> store(int k) const { return stores_[static_cast<std::size_t>(k)]; }
  std::span<const std::uint32_t> leaf_pool() const { return pool_; }
  std::span<const std::uint32_t> surplus() const { return surplus_; }
  // Everything commit() would replace by the Maxwellian right now.
  std::vector<std::uint32_t> thermal_set() const;
  std::span<const std::uint32_t> untouched() const {
    return std::span<const std::uint32_t>(order_).first(static_cast<std::size_t>(split_.size_at(0)));
  }
  const SplitState& split() const { return split_; }
  const StepReport& report() const { return report_; }
  double sigma() const { return kernel_.Sigma; }
  double tau() const { return split_.tau; }

 private:
  struct Frame {
    std::int32_t level;
    std::int32_t left;
    std::int32_t node;  // index into the replayed shape, -1 when splits are random
    std::uint32_t first;
    std::uint32_t second;
    std::uint8_t stage;
  };

  Frame make_frame(int level, std::int32_t node, std::span<const TreeNode> shape, Rng& rng);
  void collide(std::uint32_t a, std::uint32_t b, Rng& rng);
  // Random element of `from` other than `avoid`, credited back to level k;
  // nullopt when that leaves nothing.
  std::optional<std::uint32_t> take(std::vector<std::uint32_t>& from, int k, std::uint32_t avoid,
                                    Rng& rng);
  void release_own();
  void abandon_stack();
  bool frozen(int k) const { return k < first_open_; }
  void balance_level(int n, Rng& rng);
  void resize_levels(int levels);

  ParticleEnsemble* ens_ = nullptr;
  KernelParams kernel_;
  EngineOptions options_;
  SplitState split_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> pool_;
  std::vector<std::uint32_t> surplus_;
  int first_open_ = 1;  // lowest level still taking requests
  std::vector<std::int64_t> need_;
  std::vector<std::vector<std::uint32_t>> stores_;
  std::vector<Frame> stack_;
  // Spares made by the pair in production. A tree reuses its own spares
  // only at levels whose requests are already met, where a fresh subtree
  // would be surplus; the rest join the stores once the pair is done.
  std::vector<std::vector<std::uint32_t>> own_;
  std::vector<int> own_levels_;
  // Last collision partner of every slot. The two inputs of a collision
  // are never each other's partner: twins share their centre of mass.
  std::vector<std::uint32_t> partner_;
  StepReport report_;
  bool open_ = false;
};

// Complete steps. The caller supplies tau (via RelaxParams) and, for VHS,
// the kernel with its majorant Sigma for this ensemble.
StepReport relax_step_maxwell(ParticleEnsemble& ens, const RelaxParams& params, int m, Rng& rng);
StepReport relax_step_vhs(ParticleEnsemble& ens, const RelaxParams& params,
                          const KernelParams& kernel, int m, Rng& rng,
                          bool update_sigma = false);

}  // namespace trmc
