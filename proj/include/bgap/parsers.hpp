#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bgap/errors.hpp"
#include "bgap/random.hpp"
#include "bgap/treebank.hpp"

namespace bgap {

enum class Algorithm { dist, mart, attnspan, right_b, left_b, random_tree, balanced };

/// How equal-scoring split points are resolved. Leftmost and rightmost are
/// themselves branching biases; random is the default.
struct TieBreak {
  enum class Mode { leftmost, rightmost, random };
  Mode mode = Mode::random;
  std::uint64_t seed = 0;
};

struct MartOptions {
  /// Include the diagonal in within-block means.
  bool include_diagonal = true;
};

struct AttnSpanOptions {
  /// Cross-gap attention is divided by ((k-i+1)(j-k))^size_power. Power 1 is
  /// a plain mean and is size-neutral; power 2 prefers central splits.
  double size_power = 2.0;
};

struct BaselineOptions {
  /// random_tree draws uniformly over bracketings instead of recursive
  /// uniform split points.
  bool uniform_catalan = false;
};

/// Scores closer than this (relative) count as tied.
inline constexpr double kTieTolerance = 1e-12;

inline bool nearly_equal(double a, double b) noexcept {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

namespace detail {

/// Generic top-down splitter. `score(i, k, j)` rates splitting [i, j] between
/// k and k+1; the best (max or min) wins, ties go through `tb`.
template <typename SplitScore>
class TopDown {
 public:
  TopDown(SplitScore score, bool maximize, TieBreak tb)
      : score_(std::move(score)), maximize_(maximize), tb_(tb), rng_(tb.seed) {}

  Tree build(std::size_t i, std::size_t j) {
    if (i == j) return Tree::leaf(i);
    values_.clear();
    for (std::size_t k = i; k < j; ++k) values_.push_back(score_(i, k, j));
    double best = values_.front();
    for (double v : values_) best = maximize_ ? std::max(best, v) : std::min(best, v);
    ties_.clear();
    for (std::size_t t = 0; t < values_.size(); ++t) {
      if (nearly_equal(values_[t], best)) ties_.push_back(i + t);
    }
    std::size_t k = ties_.front();
    switch (tb_.mode) {
      case TieBreak::Mode::leftmost:
        break;
      case TieBreak::Mode::rightmost:
        k = ties_.back();
        break;
      case TieBreak::Mode::random:
        if (ties_.size() > 1) k = ties_[rng_.below(ties_.size())];
        break;
    }
    std::vector<Tree> kids;
    kids.reserve(2);
    kids.push_back(build(i, k));
    kids.push_back(build(k + 1, j));
    return Tree::node(std::move(kids));
  }

 private:
  SplitScore score_;
  bool maximize_;
  TieBreak tb_;
  Rng rng_;
  std::vector<double> values_;
  std::vector<std::size_t> ties_;
};

/// Summed-area table for O(1) rectangular block sums.
class BlockSums {
 public:
  template <typename Derived>
  explicit BlockSums(const Eigen::MatrixBase<Derived>& m)
      : table_(Eigen::MatrixXd::Zero(m.rows() + 1, m.cols() + 1)),
        diagonal_(Eigen::VectorXd::Zero(m.rows() + 1)) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        table_(r + 1, c + 1) = static_cast<double>(m(r, c)) + table_(r, c + 1) + table_(r + 1, c) -
                               table_(r, c);
      }
      diagonal_(r + 1) = diagonal_(r) + static_cast<double>(m(r, r));
    }
  }

  /// Sum of rows [r0, r1] x cols [c0, c1], inclusive.
  double block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
    const auto a = static_cast<Eigen::Index>(r0), b = static_cast<Eigen::Index>(r1 + 1);
    const auto c = static_cast<Eigen::Index>(c0), d = static_cast<Eigen::Index>(c1 + 1);
    return table_(b, d) - table_(a, d) - table_(b, c) + table_(a, c);
  }

  double diagonal(std::size_t r0, std::size_t r1) const {
    return diagonal_(static_cast<Eigen::Index>(r1 + 1)) - diagonal_(static_cast<Eigen::Index>(r0));
  }

 private:
  Eigen::MatrixXd table_;
  Eigen::VectorXd diagonal_;
};

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InputError(std::string(who) + " needs a non-empty square matrix");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Split objectives, evaluated directly from the matrix. The parsers use a
// summed-area table instead; these are the reference definitions.

/// Mean of the square block [lo, hi]^2; a 1x1 block is its single cell.
template <typename Derived>
double block_mean(const Eigen::MatrixBase<Derived>& m, std::size_t lo, std::size_t hi,
                  const MartOptions& options = {}) {
  const auto a = static_cast<Eigen::Index>(lo);
  const auto size = static_cast<Eigen::Index>(hi - lo + 1);
  const double total = m.block(a, a, size, size).template cast<double>().sum();
  if (options.include_diagonal || size == 1) return total / double(size * size);
  const double diag = m.block(a, a, size, size).diagonal().template cast<double>().sum();
  return (total - diag) / double(size * size - size);
}

/// Within-block means minus both cross-block means for splitting [i, j] after k.
template <typename Derived>
double mart_split_score(const Eigen::MatrixBase<Derived>& m, std::size_t i, std::size_t k,
                        std::size_t j, const MartOptions& options = {}) {
  const auto left = static_cast<Eigen::Index>(k - i + 1);
  const auto right = static_cast<Eigen::Index>(j - k);
  const auto li = static_cast<Eigen::Index>(i), ri = static_cast<Eigen::Index>(k + 1);
  const double cross_lr = m.block(li, ri, left, right).template cast<double>().mean();
  const double cross_rl = m.block(ri, li, right, left).template cast<double>().mean();
  return block_mean(m, i, k, options) + block_mean(m, k + 1, j, options) - cross_lr - cross_rl;
}

/// Cross-gap attention in both directions divided by ((k-i+1)(j-k))^power.
template <typename Derived>
double attnspan_split_cost(const Eigen::MatrixBase<Derived>& a, std::size_t i, std::size_t k,
                           std::size_t j, const AttnSpanOptions& options = {}) {
  const auto left = static_cast<Eigen::Index>(k - i + 1);
  const auto right = static_cast<Eigen::Index>(j - k);
  const auto li = static_cast<Eigen::Index>(i), ri = static_cast<Eigen::Index>(k + 1);
  const double cross = a.block(li, ri, left, right).template cast<double>().sum() +
                       a.block(ri, li, right, left).template cast<double>().sum();
  return cross / std::pow(double(left * right), options.size_power);
}

// ---------------------------------------------------------------------------
// Parsers

/// Syntactic-distance parser: split each span at its largest adjacent score.
/// `scores` has n-1 entries; an empty vector yields a single leaf.
template <typename Derived>
Tree parse_dist(const Eigen::MatrixBase<Derived>& scores, TieBreak tb = {}) {
  const auto n = static_cast<std::size_t>(scores.size()) + 1;
  auto score = [&](std::size_t, std::size_t k, std::size_t) {
    return static_cast<double>(scores(static_cast<Eigen::Index>(k)));
  };
  detail::TopDown<decltype(score)> splitter(score, /*maximize=*/true, tb);
  return splitter.build(0, n - 1);
}

/// Block-contrast parser on an n x n matrix: maximize mart_split_score.
template <typename Derived>
Tree parse_mart(const Eigen::MatrixBase<Derived>& m, TieBreak tb = {},
                const MartOptions& options = {}) {
  detail::require_square(m, "parse_mart");
  const detail::BlockSums sums(m);
  auto within = [&](std::size_t lo, std::size_t hi) {
    const double size = double(hi - lo + 1);
    const double total = sums.block(lo, hi, lo, hi);
    if (options.include_diagonal || lo == hi) return total / (size * size);
    return (total - sums.diagonal(lo, hi)) / (size * size - size);
  };
  auto score = [&](std::size_t i, std::size_t k, std::size_t j) {
    const double area = double(k - i + 1) * double(j - k);
    return within(i, k) + within(k + 1, j) - sums.block(i, k, k + 1, j) / area -
           sums.block(k + 1, j, i, k) / area;
  };
  detail::TopDown<decltype(score)> splitter(score, /*maximize=*/true, tb);
  return splitter.build(0, static_cast<std::size_t>(m.rows()) - 1);
}

/// Attention-span parser: split where size-normalized cross-gap attention is
/// smallest.
template <typename Derived>
Tree parse_attnspan(const Eigen::MatrixBase<Derived>& a, TieBreak tb = {},
                    const AttnSpanOptions& options = {}) {
  detail::require_square(a, "parse_attnspan");
  const detail::BlockSums sums(a);
  auto cost = [&](std::size_t i, std::size_t k, std::size_t j) {
    const double area = double(k - i + 1) * double(j - k);
    return (sums.block(i, k, k + 1, j) + sums.block(k + 1, j, i, k)) /
           std::pow(area, options.size_power);
  };
  detail::TopDown<decltype(cost)> splitter(cost, /*maximize=*/false, tb);
  return splitter.build(0, static_cast<std::size_t>(a.rows()) - 1);
}

/// Right_b, left_b, balanced or random_tree over n words; other algorithms are
/// an InputError. `seed` only matters for random_tree.
Tree parse_baseline(std::size_t n, Algorithm kind, std::uint64_t seed = 0,
                    const BaselineOptions& options = {});

bool is_baseline(Algorithm algorithm) noexcept;
std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);
std::string to_string(TieBreak::Mode mode);

// ---------------------------------------------------------------------------
// Exhaustive oracle

/// Largest sentence the oracle will enumerate (Catalan(11) = 58786 trees).
inline constexpr std::size_t kOracleMaxWords = 12;

struct OracleResult {
  Tree best;
  double best_score = 0;
  /// Objective of every binary bracketing, in enumeration order.
  std::vector<double> scores;
};

/// Sum of `score(first, split, last)` over the internal nodes of a binary tree.
template <typename SplitScore>
double tree_objective(const Tree& tree, SplitScore&& score) {
  if (tree.is_leaf()) return 0.0;
  if (tree.children().size() != 2) throw InputError("tree_objective needs a binary tree");
  const Tree& left = tree.children()[0];
  const Tree& right = tree.children()[1];
  return score(tree.first(), left.last(), tree.last()) + tree_objective(left, score) +
         tree_objective(right, score);
}

/// Enumerate every binary bracketing of n words and return one with the
/// highest total split score (first in enumeration order on ties).
template <typename SplitScore>
OracleResult oracle_best_tree(std::size_t n, SplitScore&& score) {
  if (n == 0) throw InputError("oracle needs at least one word");
  if (n > kOracleMaxWords) {
    throw InputError("oracle refuses n = " + std::to_string(n) + " (limit " +
                     std::to_string(kOracleMaxWords) + ")");
  }
  struct Entry {
    double value;
    std::size_t split;  // k; unused for leaves
    std::size_t left;   // index into the left span's entries
    std::size_t right;
  };
  // table[i][j] holds all bracketings of [i, j].
  std::vector<std::vector<std::vector<Entry>>> table(n, std::vector<std::vector<Entry>>(n));
  for (std::size_t i = 0; i < n; ++i) table[i][i].push_back({0.0, i, 0, 0});
  for (std::size_t width = 2; width <= n; ++width) {
    for (std::size_t i = 0; i + width <= n; ++i) {
      const std::size_t j = i + width - 1;
      auto& cell = table[i][j];
      for (std::size_t k = i; k < j; ++k) {
        const double here = score(i, k, j);
        const auto& lhs = table[i][k];
        const auto& rhs = table[k + 1][j];
        for (std::size_t a = 0; a < lhs.size(); ++a) {
          for (std::size_t b = 0; b < rhs.size(); ++b) {
            cell.push_back({here + lhs[a].value + rhs[b].value, k, a, b});
          }
        }
      }
    }
  }
  const auto& top = table[0][n - 1];
  std::size_t best = 0;
  OracleResult result;
  result.scores.reserve(top.size());
  for (std::size_t t = 0; t < top.size(); ++t) {
    result.scores.push_back(top[t].value);
    if (top[t].value > top[best].value) best = t;
  }
  std::function<Tree(std::size_t, std::size_t, std::size_t)> rebuild =
      [&](std::size_t i, std::size_t j, std::size_t e) -> Tree {
    if (i == j) return Tree::leaf(i);
    const Entry& entry = table[i][j][e];
    std::vector<Tree> kids;
    kids.push_back(rebuild(i, entry.split, entry.left));
    kids.push_back(rebuild(entry.split + 1, j, entry.right));
    return Tree::node(std::move(kids));
  };
  result.best = rebuild(0, n - 1, best);
  result.best_score = top[best].value;
  return result;
}

/// Number of trees whose objective is strictly better than `value`
/// (beyond tie tolerance); 0 means `value` is optimal.
std::size_t rank_among(const std::vector<double>& scores, double value);

}  // namespace bgap
