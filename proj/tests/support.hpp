#pragma once

// Test helpers that deliberately avoid the library's own generators.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bgap/treebank.hpp"

namespace bgap::test {

/// Random tree over [lo, hi] with 2-4 way branching, from std::mt19937.
inline Tree random_tree(std::size_t lo, std::size_t hi, std::mt19937& rng, bool binary = false) {
  if (lo == hi) return Tree::leaf(lo);
  const std::size_t width = hi - lo + 1;
  std::size_t parts = 2;
  if (!binary && width > 2) {
    parts = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(4, width))(rng);
  }
  // choose parts-1 distinct cut points among the width-1 gaps
  std::vector<std::size_t> gaps(width - 1);
  for (std::size_t g = 0; g < gaps.size(); ++g) gaps[g] = lo + g;
  std::shuffle(gaps.begin(), gaps.end(), rng);
  std::vector<std::size_t> cuts(gaps.begin(), gaps.begin() + static_cast<long>(parts - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Tree> kids;
  std::size_t start = lo;
  for (std::size_t c : cuts) {
    kids.push_back(random_tree(start, c, rng, binary));
    start = c + 1;
  }
  kids.push_back(random_tree(start, hi, rng, binary));
  return Tree::node(std::move(kids));
}

inline Tree random_tree(std::size_t n, std::mt19937& rng, bool binary = false) {
  return random_tree(0, n - 1, rng, binary);
}

/// Spans by walking the tree and collecting leaf indices under every node.
inline std::set<std::pair<std::size_t, std::size_t>> brute_spans(const Tree& t, bool whole,
                                                                 std::size_t n) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  auto walk = [&](auto&& self, const Tree& node) -> std::vector<std::size_t> {
    if (node.is_leaf()) return {node.index()};
    std::vector<std::size_t> leaves;
    for (const Tree& c : node.children()) {
      auto sub = self(self, c);
      leaves.insert(leaves.end(), sub.begin(), sub.end());
    }
    const auto [lo, hi] = std::minmax_element(leaves.begin(), leaves.end());
    if (whole || !(*lo == 0 && *hi == n - 1)) out.insert({*lo, *hi});
    return leaves;
  };
  walk(walk, t);
  return out;
}

inline std::vector<std::string> words(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

}  // namespace bgap::test
