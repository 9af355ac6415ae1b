#include <cstring>
#include <random>

#include "bgap/eval.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bgap;

namespace {

IdSpans make(const std::string& id, std::vector<Span> s) { return {id, SpanSet(std::move(s), false)}; }

// Corpus-level F1 from plain std::set arithmetic.
double f1_reference(const std::vector<Tree>& pred, const std::vector<Tree>& gold) {
  std::size_t hit = 0, np = 0, ng = 0;
  for (std::size_t s = 0; s < pred.size(); ++s) {
    const std::size_t n = gold[s].leaf_count();
    const auto p = test::brute_spans(pred[s], false, n);
    const auto g = test::brute_spans(gold[s], false, n);
    for (const auto& x : p) hit += g.count(x);
    np += p.size();
    ng += g.size();
  }
  const double P = np ? 100.0 * hit / np : 0, R = ng ? 100.0 * hit / ng : 0;
  return P + R == 0 ? 0 : 2 * P * R / (P + R);
}

std::vector<Prediction> as_predictions(const Corpus& c, const std::vector<Tree>& trees) {
  std::vector<Prediction> out;
  for (std::size_t s = 0; s < c.size(); ++s) out.push_back({c[s].id, c[s].tokens, trees[s]});
  return out;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("hand-counted F1") {
  const std::vector<IdSpans> pred{make("1", {{1, 3}, {2, 3}})};
  const std::vector<IdSpans> gold{make("1", {{1, 3}, {0, 1}})};
  const F1Result r = f1(pred, gold, F1Level::corpus);
  CHECK(r.precision == 50.0);
  CHECK(r.recall == 50.0);
  CHECK(r.f1 == 50.0);
  CHECK(r.matched == 1);

  CHECK(f1(gold, gold, F1Level::corpus).f1 == 100.0);
  const std::vector<IdSpans> disjoint{make("1", {{0, 2}})};
  CHECK(f1(disjoint, gold, F1Level::corpus).f1 == 0.0);
  CHECK(harmonic_f1(0, 0) == 0.0);
}

TEST_CASE("corpus level is micro, sentence level is a mean") {
  // sentence 1: 1/1 correct; sentence 2: 0/3 correct; sentence 3 has no gold spans
  const std::vector<IdSpans> pred{make("1", {{0, 1}}), make("2", {{0, 1}, {0, 2}, {0, 3}}),
                                  make("3", {})};
  const std::vector<IdSpans> gold{make("1", {{0, 1}}), make("2", {{2, 3}, {1, 3}, {2, 4}}),
                                  make("3", {})};
  const F1Result corpus = f1(pred, gold, F1Level::corpus);
  CHECK(corpus.precision == 25.0);
  CHECK(corpus.recall == 25.0);
  const F1Result sentence = f1(pred, gold, F1Level::sentence);
  CHECK(sentence.sentences == 2);
  CHECK(sentence.f1 == 50.0);
}

TEST_CASE("id mismatch names the sentence") {
  const std::vector<IdSpans> pred{make("1", {}), make("x", {})};
  const std::vector<IdSpans> gold{make("1", {}), make("2", {})};
  try {
    f1(pred, gold, F1Level::corpus);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("'x'") != std::string::npos);
  }
  CHECK_THROWS_AS(f1(pred, std::vector<IdSpans>{make("1", {})}, F1Level::corpus), InputError);
}

TEST_CASE("F1 matches set arithmetic, stays in bounds, and survives mirroring") {
  std::mt19937 rng(17);
  Corpus gold;
  std::vector<Tree> pred_trees, gold_trees;
  for (int s = 0; s < 300; ++s) {
    const std::size_t n = 1 + rng() % 25;
    gold_trees.push_back(test::random_tree(n, rng));
    pred_trees.push_back(test::random_tree(n, rng, true));
    gold.push_back({std::to_string(s + 1), test::words(n), gold_trees.back()});
  }
  const auto pred = as_predictions(gold, pred_trees);
  for (F1Level level : {F1Level::corpus, F1Level::sentence}) {
    const F1Result r = evaluate(pred, gold, {level, false});
    CHECK(r.f1 >= 0.0);
    CHECK(r.f1 <= std::max(r.precision, r.recall) + 1e-12);
    CHECK(r.precision <= 100.0);
    CHECK(r.recall <= 100.0);

    std::vector<Prediction> mp;
    for (const Prediction& p : pred) mp.push_back({p.id, p.tokens, mirror_tree(p.tree)});
    const F1Result m = evaluate(mp, mirror_corpus(gold), {level, false});
    CHECK(std::memcmp(&m.f1, &r.f1, sizeof(double)) == 0);
  }
  CHECK(evaluate(pred, gold).f1 == doctest::Approx(f1_reference(pred_trees, gold_trees)).epsilon(1e-12));
}

TEST_CASE("whole-sentence span toggle") {
  Corpus gold{{"1", {"a", "b", "c"}, Tree::node({Tree::leaf(0), Tree::node({Tree::leaf(1), Tree::leaf(2)})})}};
  const std::vector<Prediction> pred{{"1", {"a", "b", "c"}, Tree::node({Tree::node({Tree::leaf(0), Tree::leaf(1)}), Tree::leaf(2)})}};
  CHECK(evaluate(pred, gold).f1 == 0.0);
  CHECK(evaluate(pred, gold, {F1Level::corpus, true}).f1 == 50.0);
}

TEST_CASE("evaluate checks leaf counts") {
  Corpus gold{{"1", {"a", "b"}, Tree::node({Tree::leaf(0), Tree::leaf(1)})}};
  const std::vector<Prediction> pred{{"1", {"a", "b", "c"}, Tree::node({Tree::leaf(0), Tree::leaf(1), Tree::leaf(2)})}};
  CHECK_THROWS_AS(evaluate(pred, gold), InputError);
}

TEST_CASE("gap arithmetic") {
  auto report_with = [](double l, double lp) {
    GapReport r;
    SeedResult s;
    s.original.f1 = l;
    s.reversed.f1 = lp;
    s.gap = l - lp;
    r.per_seed.push_back(s);
    summarize(r);
    return r;
  };
  CHECK(report_with(26.11, 15.41).gap == doctest::Approx(10.70));
  CHECK(report_with(35.82, 10.40).gap == doctest::Approx(25.42));
  CHECK(report_with(20.0, 20.0).gap == 0.0);
}

TEST_CASE("seed summaries ignore arrival order") {
  GapReport a, b;
  for (std::uint64_t seed : {3, 1, 2}) {
    SeedResult s;
    s.seed = seed;
    s.original.f1 = 10.0 + seed * 1.7;
    s.reversed.f1 = 9.0 + seed * 0.3;
    s.gap = s.original.f1 - s.reversed.f1;
    a.per_seed.push_back(s);
    b.per_seed.insert(b.per_seed.begin(), s);
  }
  summarize(a);
  summarize(b);
  CHECK(std::memcmp(&a.gap, &b.gap, sizeof(double)) == 0);
  CHECK(a.per_seed.front().seed == 1);
  // per-seed gaps 1.4*seed + 1: sample sd of {2.4, 3.8, 5.2} is 1.4
  CHECK(a.gap_sd == doctest::Approx(1.4));
}

TEST_CASE("branching gap on identical sides is zero") {
  std::mt19937 rng(4);
  Corpus gold;
  std::vector<Tree> trees;
  for (int s = 0; s < 50; ++s) {
    const std::size_t n = 2 + rng() % 10;
    gold.push_back({std::to_string(s + 1), test::words(n), test::random_tree(n, rng)});
    trees.push_back(test::random_tree(n, rng, true));
  }
  const auto pred = as_predictions(gold, trees);
  const GapReport r = branching_gap(pred, gold, pred, gold);
  CHECK(r.gap == 0.0);
  Corpus shorter(gold.begin(), gold.end() - 1);
  CHECK_THROWS_AS(branching_gap(pred, gold, pred, shorter), InputError);
}

}
