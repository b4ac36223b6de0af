#pragma once

// Explicit McKean collision trees and their length functionals.
//
// A tree of depth k is stored in pre-order as path = [k, j0, h0, ...]: each
// internal node contributes the pair (j, h) with j + h = level - 1, followed
// by the pairs of its j-subtree and then those of its h-subtree. Leaves
// contribute nothing beyond the zero already written by their parent, so a
// depth-k tree has 2k+1 entries and k+1 zeros.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "trmc/rng.hpp"

namespace trmc {

enum class LengthDef {
  Coeff,  // L = k
  Min,    // L = 1 + min(L_j, L_h), leaves 0
  Mean,   // L = 1 + (L_j + L_h) / 2, leaves 0
};

// Explicit node form used for replay. Node 0 is the root. A negative split
// or child index leaves that part of the tree open: its splits are drawn
// when replay reaches it.
struct TreeNode {
  std::int32_t left = -1;  // j: level of the first input
  std::int32_t first = -1;
  std::int32_t second = -1;
};

struct TreePath {
  std::vector<std::int32_t> path;
  double length = 0.0;
  int k = 0;
};

LengthDef parse_length_def(std::string_view name);
std::string_view length_def_name(LengthDef def);

// Random tree with j uniform on {0, ..., level-1} at every node.
TreePath build_tree(int k, LengthDef def, Rng& rng);

// Same, reusing `out`'s storage.
void build_tree_into(TreePath& out, int k, LengthDef def, Rng& rng);

// Tree whose node of level L splits as (split(L), L - 1 - split(L)).
TreePath build_tree_with(int k, LengthDef def, const std::function<int(int)>& split);

// Every split as even as possible: j = (L-1)/2.
TreePath build_balanced_tree(int k, LengthDef def);

// Every split peels off a leaf: j = 0.
TreePath build_caterpillar_tree(int k, LengthDef def);

// Validates the encoding; throws NumericalError("invalid tree encoding").
double tree_length(const std::vector<std::int32_t>& path, LengthDef def);

// Node form of a full path.
std::vector<TreeNode> path_to_nodes(const std::vector<std::int32_t>& path);

// Min-length test without building the whole tree: splits are drawn breadth
// first until the shallowest leaf is found or depth `limit` is exhausted.
// Returns the min length when it is <= limit, otherwise limit + 1. `nodes`
// receives every split drawn, for replay.
int explore_min_length(int k, int limit, Rng& rng, std::vector<TreeNode>& nodes);

std::string dump_tree(const TreePath& t);
TreePath parse_tree(std::string_view text, LengthDef def);

}  // namespace trmc
