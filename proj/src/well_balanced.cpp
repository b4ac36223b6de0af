#include "trmc/well_balanced.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "trmc/error.hpp"

namespace trmc {

StepReport relax_step_wb(ParticleEnsemble& ens, const RelaxParams& params,
                         const KernelParams& kernel, double m_max, LengthDef def, Rng& rng,
                         bool update_sigma) {
  if (!(m_max >= 0.0)) throw NumericalError("m_max must be >= 0");
  RecursiveEngine engine;
  engine.begin(ens, params.tau, kUntruncated, kernel,
               EngineOptions{CollisionModel::Vhs, update_sigma}, rng);
  TreePath tree;
  std::vector<TreeNode> shape;
  bool leaves_left = true;
  for (int n = engine.levels(); n >= 1 && leaves_left; --n) {
    // Min lengths are integers, so only the first floor(m_max) layers can
    // decide the test.
    const int limit = static_cast<int>(std::min<double>(n, std::floor(m_max)));
    while (leaves_left && engine.pending(n, rng)) {
      double length = n;
      switch (def) {
        case LengthDef::Coeff:
          shape.clear();
          break;
        case LengthDef::Min:
          length = explore_min_length(n, std::max(limit, 1), rng, shape);
          break;
        case LengthDef::Mean:
          build_tree_into(tree, n, def, rng);
          length = tree.length;
          shape = path_to_nodes(tree.path);
          break;
      }
      if (length > m_max)
        engine.defer_to_thermal(n);
      else
        leaves_left = engine.serve(n, rng, shape);
    }
  }
  engine.commit(rng);
  return engine.report();
}

}  // namespace trmc
