#include "trmc/tree.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "trmc/error.hpp"

namespace trmc {
namespace {

[[noreturn]] void invalid() { throw NumericalError("invalid tree encoding"); }

double combine(double a, double b, LengthDef def) {
  return def == LengthDef::Min ? 1.0 + std::min(a, b) : 1.0 + 0.5 * (a + b);
}

// Lengths of a well-formed path, children before parents. Internal node i
// keeps its pair at 1+2i; its j-child is node i+1 and its h-child node i+1+j.
double length_unchecked(const std::vector<std::int32_t>& path, LengthDef def,
                        std::vector<double>& scratch) {
  const int k = path[0];
  if (def == LengthDef::Coeff || k == 0) return static_cast<double>(k);
  scratch.assign(static_cast<std::size_t>(k), 0.0);
  for (int i = k - 1; i >= 0; --i) {
    const int j = path[static_cast<std::size_t>(1 + 2 * i)];
    const int h = path[static_cast<std::size_t>(2 + 2 * i)];
    const double lj = j > 0 ? scratch[static_cast<std::size_t>(i + 1)] : 0.0;
    const double lh = h > 0 ? scratch[static_cast<std::size_t>(i + 1 + j)] : 0.0;
    scratch[static_cast<std::size_t>(i)] = combine(lj, lh, def);
  }
  return scratch[0];
}

thread_local std::vector<double> tl_lengths;
thread_local std::vector<std::int32_t> tl_pending;

template <class Split>
void build_into(TreePath& out, int k, LengthDef def, Split&& split) {
  if (k < 0) throw NumericalError("tree depth must be >= 0");
  out.k = k;
  out.path.clear();
  out.path.reserve(static_cast<std::size_t>(2 * k + 1));
  out.path.push_back(k);
  auto& pending = tl_pending;
  pending.clear();
  if (k > 0) pending.push_back(k);
  while (!pending.empty()) {
    const int level = pending.back();
    pending.pop_back();
    const int j = split(level);
    const int h = level - 1 - j;
    out.path.push_back(j);
    out.path.push_back(h);
    if (h > 0) pending.push_back(h);
    if (j > 0) pending.push_back(j);
  }
  out.length = length_unchecked(out.path, def, tl_lengths);
}

}  // namespace

LengthDef parse_length_def(std::string_view name) {
  if (name == "COEFF") return LengthDef::Coeff;
  if (name == "MIN") return LengthDef::Min;
  if (name == "MEAN") return LengthDef::Mean;
  throw ConfigError("unknown tree length definition '" + std::string(name) + "'");
}

std::string_view length_def_name(LengthDef def) {
  switch (def) {
    case LengthDef::Coeff: return "COEFF";
    case LengthDef::Min: return "MIN";
    case LengthDef::Mean: return "MEAN";
  }
  return "?";
}

void build_tree_into(TreePath& out, int k, LengthDef def, Rng& rng) {
  build_into(out, k, def,
             [&rng](int level) { return static_cast<int>(rng.index(static_cast<std::uint64_t>(level))); });
}

TreePath build_tree(int k, LengthDef def, Rng& rng) {
  TreePath t;
  build_tree_into(t, k, def, rng);
  return t;
}

TreePath build_tree_with(int k, LengthDef def, const std::function<int(int)>& split) {
  TreePath t;
  build_into(t, k, def, [&split](int level) {
    const int j = split(level);
    if (j < 0 || j >= level) throw NumericalError("split out of range");
    return j;
  });
  return t;
}

TreePath build_balanced_tree(int k, LengthDef def) {
  return build_tree_with(k, def, [](int level) { return (level - 1) / 2; });
}

TreePath build_caterpillar_tree(int k, LengthDef def) {
  return build_tree_with(k, def, [](int) { return 0; });
}

double tree_length(const std::vector<std::int32_t>& path, LengthDef def) {
  if (path.empty() || path[0] < 0) invalid();
  const int k = path[0];
  if (path.size() != static_cast<std::size_t>(2 * k + 1)) invalid();
  // Forward pass: every internal node must receive exactly one level from
  // its parent and split it consistently.
  std::vector<std::int32_t> level(static_cast<std::size_t>(k), -1);
  if (k > 0) level[0] = k;
  for (int i = 0; i < k; ++i) {
    const int lv = level[static_cast<std::size_t>(i)];
    const int j = path[static_cast<std::size_t>(1 + 2 * i)];
    const int h = path[static_cast<std::size_t>(2 + 2 * i)];
    if (lv < 1 || j < 0 || h < 0 || j + h != lv - 1) invalid();
    for (const auto& [child, value] : {std::pair{i + 1, j}, std::pair{i + 1 + j, h}}) {
      if (value == 0) continue;
      if (child >= k || level[static_cast<std::size_t>(child)] != -1) invalid();
      level[static_cast<std::size_t>(child)] = value;
    }
  }
  std::vector<double> scratch;
  return length_unchecked(path, def, scratch);
}

std::vector<TreeNode> path_to_nodes(const std::vector<std::int32_t>& path) {
  const int k = path.empty() ? 0 : path[0];
  std::vector<TreeNode> nodes(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const int j = path[static_cast<std::size_t>(1 + 2 * i)];
    const int h = path[static_cast<std::size_t>(2 + 2 * i)];
    auto& node = nodes[static_cast<std::size_t>(i)];
    node.left = j;
    node.first = j > 0 ? i + 1 : -1;
    node.second = h > 0 ? i + 1 + j : -1;
  }
  return nodes;
}

int explore_min_length(int k, int limit, Rng& rng, std::vector<TreeNode>& nodes) {
  if (k < 0) throw NumericalError("tree depth must be >= 0");
  nodes.clear();
  if (k == 0) return 0;
  struct Open {
    std::int32_t node;
    std::int32_t level;
  };
  std::vector<Open> layer{{0, k}}, next;
  nodes.push_back(TreeNode{});
  for (int depth = 1; depth <= limit; ++depth) {
    next.clear();
    bool leaf = false;
    for (const Open& o : layer) {
      const auto j = static_cast<std::int32_t>(rng.index(static_cast<std::uint64_t>(o.level)));
      const std::int32_t h = o.level - 1 - j;
      const auto at = static_cast<std::size_t>(o.node);
      nodes[at].left = j;
      if (j == 0 || h == 0) leaf = true;
      if (j > 0) {
        nodes[at].first = static_cast<std::int32_t>(nodes.size());
        next.push_back({nodes[at].first, j});
        nodes.push_back(TreeNode{});
      }
      if (h > 0) {
        nodes[at].second = static_cast<std::int32_t>(nodes.size());
        next.push_back({nodes[at].second, h});
        nodes.push_back(TreeNode{});
      }
    }
    // Children opened on this layer stay unsplit; replay draws them.
    if (leaf) return depth;
    layer.swap(next);
  }
  return limit + 1;
}

std::string dump_tree(const TreePath& t) {
  std::string out;
  for (std::size_t i = 0; i < t.path.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(t.path[i]);
  }
  return out;
}

TreePath parse_tree(std::string_view text, LengthDef def) {
  TreePath t;
  const char* p = text.data();
  const char* end = p + text.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\n' || *p == '\r')) ++p;
    if (p == end) break;
    std::int32_t v = 0;
    const auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{}) invalid();
    t.path.push_back(v);
    p = next;
  }
  t.length = tree_length(t.path, def);
  t.k = t.path[0];
  return t;
}

}  // namespace trmc
