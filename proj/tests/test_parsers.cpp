#include <map>
#include <random>

#include "bgap/features.hpp"
#include "bgap/parsers.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bgap;

namespace {

std::string show(const Tree& t) { return to_unlabeled(t, test::words(t.leaf_count())); }

Tree right_chain(std::size_t lo, std::size_t hi) {
  if (lo == hi) return Tree::leaf(lo);
  return Tree::node({Tree::leaf(lo), right_chain(lo + 1, hi)});
}

// Greedy top-down splitting written out plainly, without the summed-area table.
template <typename Score>
Tree greedy_reference(std::size_t i, std::size_t j, Score score, bool maximize) {
  if (i == j) return Tree::leaf(i);
  std::size_t best = i;
  for (std::size_t k = i + 1; k < j; ++k) {
    const double a = score(i, k, j), b = score(i, best, j);
    if (maximize ? a > b : a < b) best = k;
  }
  return Tree::node({greedy_reference(i, best, score, maximize),
                     greedy_reference(best + 1, j, score, maximize)});
}

Eigen::MatrixXd noise_matrix(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m(r, c) = u(rng);
  }
  return m;
}

std::size_t count_bracketings(std::size_t n) {
  return oracle_best_tree(n, [](std::size_t, std::size_t, std::size_t) { return 0.0; }).scores.size();
}

}  // namespace

TEST_SUITE("parsers") {

TEST_CASE("dist examples") {
  CHECK(show(parse_dist(Eigen::Vector2d(0.9, 0.1))) == "(w0 (w1 w2))");
  CHECK(parse_dist(Eigen::VectorXd(0)).is_leaf());
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(3, 0.5);
  // leftmost ties split off the first word each time: right-branching
  CHECK(show(parse_dist(flat, {TieBreak::Mode::leftmost})) == "(w0 (w1 (w2 w3)))");
  CHECK(show(parse_dist(flat, {TieBreak::Mode::rightmost})) == "(((w0 w1) w2) w3)");
}

TEST_CASE("random tie-break spreads over tied splits") {
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(5, 1.0);
  std::set<std::string> seen;
  // the rarest bracketing (a chain) has probability 1/120 per draw
  for (std::uint64_t s = 0; s < 5000; ++s) seen.insert(show(parse_dist(flat, {TieBreak::Mode::random, s})));
  CHECK(seen.size() == 42);  // every bracketing of six words
  // differences below the relative tolerance still tie
  Eigen::VectorXd near = flat;
  near(3) += 1e-14;
  CHECK(show(parse_dist(near, {TieBreak::Mode::leftmost})) == show(parse_dist(flat, {TieBreak::Mode::leftmost})));
  near(3) += 1e-9;
  CHECK(parse_dist(near, {TieBreak::Mode::leftmost}).children()[0].last() == 3);
}

TEST_CASE("mart examples") {
  Eigen::Matrix2d any;
  any << 0.3, 0.7, 0.9, 0.1;
  CHECK(show(parse_mart(any)) == "(w0 w1)");
  Eigen::Matrix3d left;
  left << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  CHECK(show(parse_mart(left)) == "((w0 w1) w2)");
  Eigen::Matrix3d right;
  right << 1, 0, 0, 0, 1, 1, 0, 1, 1;
  CHECK(show(parse_mart(right)) == "(w0 (w1 w2))");
  // k=1: 1 + 1 - 0 - 0; k=0: 1 + 0.5 - 0.5 - 0.5
  CHECK(mart_split_score(left, 0, 1, 2) == doctest::Approx(2.0));
  CHECK(mart_split_score(left, 0, 0, 2) == doctest::Approx(0.5));
  // without the diagonal, within(1,2) of `left` is the off-diagonal mean 0
  CHECK(mart_split_score(left, 0, 0, 2, {false}) == doctest::Approx(1.0 + 0.0 - 1.0));
}

TEST_CASE("attnspan examples") {
  Eigen::Matrix2d any;
  any << 0.5, 0.5, 0.2, 0.8;
  CHECK(show(parse_attnspan(any)) == "(w0 w1)");
  Eigen::Matrix3d cut;
  cut << 0.5, 0.5, 0, 0.5, 0.5, 0, 0, 0, 1;
  CHECK(attnspan_split_cost(cut, 0, 1, 2) == 0.0);
  CHECK(attnspan_split_cost(cut, 0, 0, 2) > 0.0);
  CHECK(show(parse_attnspan(cut)) == "((w0 w1) w2)");

  const Eigen::Matrix4d flat = Eigen::Matrix4d::Constant(0.25);
  CHECK(attnspan_split_cost(flat, 0, 1, 3) < attnspan_split_cost(flat, 0, 0, 3));
  CHECK(attnspan_split_cost(flat, 0, 1, 3) < attnspan_split_cost(flat, 0, 2, 3));
  CHECK(show(parse_attnspan(flat, {TieBreak::Mode::leftmost})) == "((w0 w1) (w2 w3))");
  // with a plain mean the constant matrix gives no preference at all
  const AttnSpanOptions mean{1.0};
  CHECK(attnspan_split_cost(flat, 0, 0, 3, mean) == doctest::Approx(attnspan_split_cost(flat, 0, 1, 3, mean)));
  CHECK(attnspan_split_cost(flat, 0, 2, 3, mean) == doctest::Approx(attnspan_split_cost(flat, 0, 1, 3, mean)));
}

TEST_CASE("fast parsers match the direct objectives") {
  std::mt19937 rng(21);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 25;
    const Eigen::MatrixXd m = noise_matrix(n, rng);
    for (bool diag : {true, false}) {
      const MartOptions opts{diag};
      auto score = [&](std::size_t i, std::size_t k, std::size_t j) { return mart_split_score(m, i, k, j, opts); };
      REQUIRE(parse_mart(m, {TieBreak::Mode::leftmost}, opts) == greedy_reference(0, n - 1, score, true));
    }
    for (double p : {1.0, 2.0}) {
      const AttnSpanOptions opts{p};
      auto cost = [&](std::size_t i, std::size_t k, std::size_t j) { return attnspan_split_cost(m, i, k, j, opts); };
      REQUIRE(parse_attnspan(m, {TieBreak::Mode::leftmost}, opts) == greedy_reference(0, n - 1, cost, false));
    }
  }
}

TEST_CASE("baselines") {
  CHECK(spans(parse_baseline(4, Algorithm::right_b)).values() == std::vector<Span>{{1, 3}, {2, 3}});
  CHECK(spans(parse_baseline(4, Algorithm::left_b)).values() == std::vector<Span>{{0, 1}, {0, 2}});
  CHECK(show(parse_baseline(5, Algorithm::balanced)) == "(((w0 w1) w2) (w3 w4))");
  CHECK(parse_baseline(1, Algorithm::random_tree).is_leaf());
  for (std::size_t n = 1; n <= 50; ++n) {
    const Tree r = parse_baseline(n, Algorithm::right_b);
    REQUIRE(r == right_chain(0, n - 1));
    REQUIRE(mirror_tree(r) == parse_baseline(n, Algorithm::left_b));
  }
  CHECK_THROWS_AS(parse_baseline(4, Algorithm::dist), InputError);
}

TEST_CASE("random trees: recursive split and uniform bracketing") {
  // recursive uniform split over 4 words: root split uniform on 3 gaps, so the
  // two chains each have probability 1/3 * 1/2
  std::map<std::string, int> split, uniform;
  const int draws = 70000;
  for (int s = 0; s < draws; ++s) {
    split[show(parse_baseline(4, Algorithm::random_tree, s))]++;
    uniform[show(parse_baseline(5, Algorithm::random_tree, s, {true}))]++;
  }
  CHECK(split.size() == 5);
  CHECK(split["(w0 (w1 (w2 w3)))"] / double(draws) == doctest::Approx(1.0 / 6).epsilon(0.05));
  CHECK(split["((w0 w1) (w2 w3))"] / double(draws) == doctest::Approx(1.0 / 3).epsilon(0.05));
  CHECK(uniform.size() == 14);
  for (const auto& [tree, count] : uniform) {
    CHECK(count / double(draws) == doctest::Approx(1.0 / 14).epsilon(0.05));
  }
}

TEST_CASE("mirror equivariance on tie-free inputs") {
  std::mt19937 rng(8);
  RandomSpec spec;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng() % 30;
    const Eigen::VectorXd s = random_scoreseq(n, spec, rng());
    REQUIRE(parse_dist(Eigen::VectorXd(s.reverse())) == mirror_tree(parse_dist(s)));
    for (AttentionKind kind : {AttentionKind::full, AttentionKind::prefix}) {
      const Eigen::MatrixXd a = random_attention(n, kind, spec, rng());
      const Eigen::MatrixXd f = matrix_reverse(a);
      REQUIRE(parse_mart(f) == mirror_tree(parse_mart(a)));
      REQUIRE(parse_attnspan(f) == mirror_tree(parse_attnspan(a)));
    }
  }
}

TEST_CASE("oracle enumeration") {
  CHECK(count_bracketings(1) == 1);
  CHECK(count_bracketings(3) == 2);
  CHECK(count_bracketings(5) == 14);
  CHECK(count_bracketings(6) == 42);
  CHECK_THROWS_AS(count_bracketings(0), InputError);
  CHECK_THROWS_AS(count_bracketings(kOracleMaxWords + 1), InputError);

  // best score and tree agree with scoring every enumerated tree directly
  std::mt19937 rng(2);
  const Eigen::MatrixXd m = noise_matrix(5, rng);
  auto score = [&](std::size_t i, std::size_t k, std::size_t j) { return mart_split_score(m, i, k, j); };
  const OracleResult o = oracle_best_tree(5, score);
  CHECK(o.best_score == *std::max_element(o.scores.begin(), o.scores.end()));
  CHECK(tree_objective(o.best, score) == doctest::Approx(o.best_score));
  CHECK(rank_among(o.scores, o.best_score) == 0);
  CHECK(rank_among({3.0, 2.0, 1.0}, 1.0) == 2);
}

TEST_CASE("greedy versus global: root split agreement") {
  // Measured, not asserted: greedy top-down is not globally optimal.
  std::mt19937 rng(13);
  RandomSpec spec;
  int agree = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXd a = random_attention(5, AttentionKind::full, spec, rng());
    auto score = [&](std::size_t i, std::size_t k, std::size_t j) { return -attnspan_split_cost(a, i, k, j); };
    const Tree greedy = parse_attnspan(a);
    const Tree best = oracle_best_tree(5, score).best;
    agree += greedy.children()[0].last() == best.children()[0].last();
  }
  MESSAGE("attnspan root split agrees with the oracle on " << agree << "/" << trials
                                                           << " random 5-word matrices");
}

}
