#include "trmc/engine.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "trmc/error.hpp"

namespace trmc {
namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

}  // namespace

StepReport& StepReport::operator+=(const StepReport& o) {
  collisions += o.collisions;
  dummy_rejections += o.dummy_rejections;
  maxwellian_samples += o.maxwellian_samples;
  sigma_violations += o.sigma_violations;
  pool_exhausted += o.pool_exhausted;
  wb_thermalized += o.wb_thermalized;
  rounding_carries += o.rounding_carries;
  return *this;
}

void RecursiveEngine::begin(ParticleEnsemble& ens, double tau, int m, const KernelParams& kernel,
                            const EngineOptions& options, Rng& rng) {
  if (ens.empty()) throw NumericalError("empty ensemble");
  if (ens.size() > std::numeric_limits<std::uint32_t>::max())
    throw NumericalError("ensemble too large for 32-bit indices");
  ens_ = &ens;
  kernel_ = kernel;
  options_ = options;
  report_ = {};
  stack_.clear();

  const auto n = static_cast<std::int64_t>(ens.size());
  split_ = split_collision_sets(n, tau, m, rng);

  partner_.assign(ens.size(), kNone);
  order_.resize(ens.size());
  std::iota(order_.begin(), order_.end(), std::uint32_t{0});
  std::shuffle(order_.begin(), order_.end(), rng.engine());
  pool_.assign(order_.begin() + split_.size_at(0), order_.end());

  for (auto& s : stores_) s.clear();
  surplus_.clear();
  first_open_ = 1;
  need_.clear();
  resize_levels(split_.deepest_level());
  for (int k = 1; k <= levels(); ++k) need_[static_cast<std::size_t>(k)] = split_.size_at(k);
  open_ = true;
}

void RecursiveEngine::resize_levels(int lv) {
  const auto size = static_cast<std::size_t>(std::max(lv, 0)) + 1;
  if (need_.size() < size) need_.resize(size, 0);
  if (stores_.size() < size) stores_.resize(size);
  if (own_.size() < size) own_.resize(size);
}

void RecursiveEngine::fill(Rng& rng) {
  for (int n = levels(); n >= first_open_; --n) {
    while (pending(n, rng))
      if (!serve(n, rng)) return;
  }
}

bool RecursiveEngine::pending(int n, Rng& rng) {
  const auto need = need_[static_cast<std::size_t>(n)];
  if (need >= 2) return true;
  if (need != 0) balance_level(n, rng);
  return need_[static_cast<std::size_t>(n)] > 0;
}

void RecursiveEngine::balance_level(int n, Rng& rng) {
  // Pairs come out two at a time. An odd remainder is rounded up or down
  // with equal probability and a surplus is handed to the level below, so
  // every level keeps its expected count and the slot total stays exact.
  auto& need = need_[static_cast<std::size_t>(n)];
  std::int64_t shift = 0;
  if (need == 1) {
    shift = rng.uniform() < 0.5 ? -1 : 1;
    need = shift < 0 ? 2 : 0;
  } else if (need < 0) {
    shift = need;
    need = 0;
  }
  ++report_.rounding_carries;
  if (n > first_open_) need_[static_cast<std::size_t>(n - 1)] += shift;
}

bool RecursiveEngine::serve(int n, Rng& rng, std::span<const TreeNode> shape) {
  if (!produce_pair(n, rng, shape)) return false;
  need_[static_cast<std::size_t>(n)] -= 2;
  return true;
}

void RecursiveEngine::extend(int new_m, Rng& rng) {
  const int old = split_.deepest_level();
  for (int k = 1; k <= levels(); ++k) {
    auto& st = stores_[static_cast<std::size_t>(k)];
    if (frozen(k)) surplus_.insert(surplus_.end(), st.begin(), st.end());
    st.clear();
  }
  std::fill(need_.begin(), need_.end(), 0);
  first_open_ = old + 1;
  extend_split(split_, new_m, rng);
  resize_levels(split_.deepest_level());
  for (int k = old + 1; k <= split_.deepest_level(); ++k)
    need_[static_cast<std::size_t>(k)] = split_.size_at(k);
}

std::vector<std::uint32_t> RecursiveEngine::thermal_set() const {
  std::vector<std::uint32_t> out(pool_);
  out.insert(out.end(), surplus_.begin(), surplus_.end());
  for (int k = 1; k < first_open_ && k <= levels(); ++k) {
    const auto& st = stores_[static_cast<std::size_t>(k)];
    out.insert(out.end(), st.begin(), st.end());
  }
  return out;
}

void RecursiveEngine::commit(Rng& rng) {
  const std::vector<std::uint32_t> set = thermal_set();
  report_.maxwellian_samples += static_cast<std::int64_t>(thermalize(*ens_, set, rng));
  pool_.clear();
  surplus_.clear();
  open_ = false;
}

void RecursiveEngine::defer_to_thermal(int n) {
  --need_[static_cast<std::size_t>(n)];
  ++report_.wb_thermalized;
}

std::optional<std::uint32_t> RecursiveEngine::sample(int n, Rng& rng) {
  if (n < 0) throw NumericalError("sample level must be >= 0");
  if (n == 0) {
    if (pool_.empty()) return std::nullopt;
    const auto leaf = pool_.back();
    pool_.pop_back();
    return leaf;
  }
  resize_levels(n);
  const auto pr = produce_pair(n, rng);
  if (!pr) return std::nullopt;
  stores_[static_cast<std::size_t>(n)].push_back(pr->second);
  return pr->first;
}

RecursiveEngine::Frame RecursiveEngine::make_frame(int level, std::int32_t node,
                                                   std::span<const TreeNode> shape, Rng& rng) {
  Frame f{};
  f.level = level;
  f.node = node;
  f.left = -1;
  if (node >= 0) {
    if (static_cast<std::size_t>(node) >= shape.size()) throw NumericalError("tree node out of range");
    f.left = shape[static_cast<std::size_t>(node)].left;
    if (f.left >= level) throw NumericalError("tree split does not match the requested level");
  }
  if (f.left < 0) f.left = static_cast<std::int32_t>(rng.index(static_cast<std::size_t>(level)));
  return f;
}

std::optional<std::uint32_t> RecursiveEngine::take(std::vector<std::uint32_t>& st, int k,
                                                   std::uint32_t avoid, Rng& rng) {
  if (st.empty()) return std::nullopt;
  std::size_t i = rng.index(st.size());
  if (st[i] == avoid) {
    if (st.size() == 1) return std::nullopt;
    i = (i + 1 + rng.index(st.size() - 1)) % st.size();
  }
  const auto v = st[i];
  st[i] = st.back();
  st.pop_back();
  if (!frozen(k)) ++need_[static_cast<std::size_t>(k)];
  return v;
}

void RecursiveEngine::collide(std::uint32_t a, std::uint32_t b, Rng& rng) {
  const Velocity3 va = ens_->velocity(a);
  const Velocity3 vb = ens_->velocity(b);
  if (options_.model == CollisionModel::Vhs) {
    const double s = kernel_.sigma((va - vb).norm());
    if (s > kernel_.Sigma) {
      ++report_.sigma_violations;
      if (options_.update_sigma) kernel_.Sigma = s;
    }
    if (!(kernel_.Sigma * rng.uniform() < s)) {
      ++report_.dummy_rejections;
      return;
    }
  }
  const double xi1 = rng.uniform();
  const double xi2 = rng.uniform();
  const auto [na, nb] = collide_pair(va, vb, xi1, xi2);
  ens_->set_velocity(a, na);
  ens_->set_velocity(b, nb);
  partner_[a] = b;
  partner_[b] = a;
  ++report_.collisions;
}

void RecursiveEngine::abandon_stack() {
  // Inputs already obtained go back where they can be reused: leaves to the
  // pool, produced particles to their level's store.
  for (const Frame& f : stack_) {
    if (f.stage == 0) continue;
    if (f.left == 0) {
      pool_.push_back(f.first);
    } else {
      stores_[static_cast<std::size_t>(f.left)].push_back(f.first);
      if (!frozen(f.left)) --need_[static_cast<std::size_t>(f.left)];
    }
  }
  stack_.clear();
  release_own();
  ++report_.pool_exhausted;
}

void RecursiveEngine::release_own() {
  for (const int lv : own_levels_) {
    auto& from = own_[static_cast<std::size_t>(lv)];
    auto& to = stores_[static_cast<std::size_t>(lv)];
    to.insert(to.end(), from.begin(), from.end());
    from.clear();
  }
  own_levels_.clear();
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> RecursiveEngine::produce_pair(
    int n, Rng& rng, std::span<const TreeNode> shape) {
  if (n < 1) throw NumericalError("pairs are produced at levels >= 1");
  resize_levels(n);
  stack_.clear();
  stack_.push_back(make_frame(n, shape.empty() ? -1 : 0, shape, rng));

  bool have = false;
  std::uint32_t carry = 0;
  for (;;) {
    Frame& f = stack_.back();
    if (have) {
      if (f.stage == 0) {
        f.first = carry;
        f.stage = 1;
      } else {
        f.second = carry;
        f.stage = 2;
      }
      have = false;
    }

    if (f.stage < 2) {
      const int want = f.stage == 0 ? f.left : f.level - 1 - f.left;
      if (want == 0) {
        if (pool_.empty()) {
          abandon_stack();
          return std::nullopt;
        }
        carry = pool_.back();
        pool_.pop_back();
        have = true;
        continue;
      }
      const std::uint32_t avoid = f.stage == 1 ? partner_[f.first] : kNone;
      const auto w = static_cast<std::size_t>(want);
      auto got = take(stores_[w], want, avoid, rng);
      if (!got && need_[w] <= 0) got = take(own_[w], want, avoid, rng);
      if (got) {
        carry = *got;
        have = true;
        continue;
      }
      std::int32_t child = -1;
      if (f.node >= 0) {
        const TreeNode& t = shape[static_cast<std::size_t>(f.node)];
        child = f.stage == 0 ? t.first : t.second;
      }
      stack_.push_back(make_frame(want, child, shape, rng));
      continue;
    }

    collide(f.first, f.second, rng);
    if (stack_.size() == 1) {
      const std::pair<std::uint32_t, std::uint32_t> out{f.first, f.second};
      stack_.clear();
      release_own();
      return out;
    }
    const std::uint32_t keep = f.first;
    const std::uint32_t spare = f.second;
    const auto lv = static_cast<std::size_t>(f.level);
    stack_.pop_back();
    if (own_[lv].empty()) own_levels_.push_back(static_cast<int>(lv));
    own_[lv].push_back(spare);
    if (!frozen(static_cast<int>(lv))) --need_[lv];
    carry = keep;
    have = true;
  }
}

StepReport relax_step_maxwell(ParticleEnsemble& ens, const RelaxParams& params, int m, Rng& rng) {
  RecursiveEngine engine;
  KernelParams kernel;
  kernel.alpha = 0.0;
  engine.begin(ens, params.tau, m, kernel, EngineOptions{CollisionModel::Maxwell, false}, rng);
  engine.fill(rng);
  engine.commit(rng);
  return engine.report();
}

StepReport relax_step_vhs(ParticleEnsemble& ens, const RelaxParams& params,
                          const KernelParams& kernel, int m, Rng& rng, bool update_sigma) {
  RecursiveEngine engine;
  engine.begin(ens, params.tau, m, kernel, EngineOptions{CollisionModel::Vhs, update_sigma}, rng);
  engine.fill(rng);
  engine.commit(rng);
  return engine.report();
}

}  // namespace trmc
