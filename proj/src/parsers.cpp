#include "bgap/parsers.hpp"

#include <numeric>

namespace bgap {

namespace {

Tree right_branching(std::size_t first, std::size_t last) {
  Tree t = Tree::leaf(last);
  for (std::size_t i = last; i-- > first;) t = Tree::node({Tree::leaf(i), std::move(t)});
  return t;
}

Tree left_branching(std::size_t first, std::size_t last) {
  Tree t = Tree::leaf(first);
  for (std::size_t i = first + 1; i <= last; ++i) t = Tree::node({std::move(t), Tree::leaf(i)});
  return t;
}

Tree balanced(std::size_t i, std::size_t j) {
  if (i == j) return Tree::leaf(i);
  const std::size_t left_size = (j - i + 2) / 2;  // ceil(width / 2)
  return Tree::node({balanced(i, i + left_size - 1), balanced(i + left_size, j)});
}

Tree random_split(std::size_t i, std::size_t j, Rng& rng) {
  if (i == j) return Tree::leaf(i);
  const std::size_t k = i + rng.below(j - i);
  Tree left = random_split(i, k, rng);
  Tree right = random_split(k + 1, j, rng);
  return Tree::node({std::move(left), std::move(right)});
}

// Decodes a preorder Lukasiewicz word (+1 internal, -1 leaf).
Tree decode_preorder(const std::vector<int>& word, std::size_t& pos, std::size_t& next_leaf) {
  if (word[pos++] < 0) return Tree::leaf(next_leaf++);
  Tree left = decode_preorder(word, pos, next_leaf);
  Tree right = decode_preorder(word, pos, next_leaf);
  return Tree::node({std::move(left), std::move(right)});
}

// Uniform over all Catalan(n-1) binary bracketings: shuffle n-1 internal and
// n leaf symbols, then take the unique rotation whose proper prefixes are all
// non-negative (cycle lemma).
Tree uniform_bracketing(std::size_t n, Rng& rng) {
  std::vector<int> word(2 * n - 1, -1);
  std::fill(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(n - 1), 1);
  for (std::size_t i = word.size(); i > 1; --i) std::swap(word[i - 1], word[rng.below(i)]);
  int sum = 0;
  int lowest = 1;
  std::size_t cut = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    sum += word[i];
    if (sum < lowest) {
      lowest = sum;
      cut = i + 1;
    }
  }
  std::rotate(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(cut % word.size()),
              word.end());
  std::size_t pos = 0;
  std::size_t next_leaf = 0;
  return decode_preorder(word, pos, next_leaf);
}

}  // namespace

Tree parse_baseline(std::size_t n, Algorithm kind, std::uint64_t seed,
                    const BaselineOptions& options) {
  if (n == 0) throw InputError("baseline parser needs at least one word");
  switch (kind) {
    case Algorithm::right_b:
      return right_branching(0, n - 1);
    case Algorithm::left_b:
      return left_branching(0, n - 1);
    case Algorithm::balanced:
      return balanced(0, n - 1);
    case Algorithm::random_tree: {
      Rng rng(seed);
      return options.uniform_catalan ? uniform_bracketing(n, rng) : random_split(0, n - 1, rng);
    }
    default:
      throw InputError(to_string(kind) + " is not a baseline");
  }
}

bool is_baseline(Algorithm algorithm) noexcept {
  return algorithm == Algorithm::right_b || algorithm == Algorithm::left_b ||
         algorithm == Algorithm::random_tree || algorithm == Algorithm::balanced;
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::dist:
      return "dist";
    case Algorithm::mart:
      return "mart";
    case Algorithm::attnspan:
      return "attnspan";
    case Algorithm::right_b:
      return "right-b";
    case Algorithm::left_b:
      return "left-b";
    case Algorithm::random_tree:
      return "random";
    case Algorithm::balanced:
      return "balanced";
  }
  return "dist";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (Algorithm a : {Algorithm::dist, Algorithm::mart, Algorithm::attnspan, Algorithm::right_b,
                      Algorithm::left_b, Algorithm::random_tree, Algorithm::balanced}) {
    if (to_string(a) == name) return a;
  }
  throw InputError("unknown parsing algorithm '" + name + "'");
}

std::string to_string(TieBreak::Mode mode) {
  switch (mode) {
    case TieBreak::Mode::leftmost:
      return "leftmost";
    case TieBreak::Mode::rightmost:
      return "rightmost";
    case TieBreak::Mode::random:
      return "random";
  }
  return "random";
}

std::size_t rank_among(const std::vector<double>& scores, double value) {
  return static_cast<std::size_t>(std::count_if(scores.begin(), scores.end(), [&](double s) {
    return s > value && !nearly_equal(s, value);
  }));
}

}  // namespace bgap
