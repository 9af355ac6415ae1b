#include "bgap/eval.hpp"

#include <algorithm>
#include <cmath>

#include "bgap/errors.hpp"

namespace bgap {

namespace {

double ratio(std::size_t num, std::size_t den) noexcept {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double harmonic_f1(double precision, double recall) noexcept {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

F1Result f1(std::span<const IdSpans> pred, std::span<const IdSpans> gold, F1Level level) {
  if (pred.size() != gold.size()) {
    throw InputError("prediction count " + std::to_string(pred.size()) +
                     " differs from gold count " + std::to_string(gold.size()));
  }
  F1Result r;
  r.level = level;
  double p_sum = 0, r_sum = 0, f_sum = 0;
  for (std::size_t s = 0; s < pred.size(); ++s) {
    if (pred[s].id != gold[s].id) {
      throw InputError("sentence id mismatch at position " + std::to_string(s) + ": predicted '" +
                       pred[s].id + "', gold '" + gold[s].id + "'");
    }
    const std::size_t matched = pred[s].spans.overlap(gold[s].spans);
    r.matched += matched;
    r.predicted += pred[s].spans.size();
    r.gold += gold[s].spans.size();
    if (level == F1Level::sentence && !gold[s].spans.empty()) {
      const double p = ratio(matched, pred[s].spans.size());
      const double q = ratio(matched, gold[s].spans.size());
      p_sum += p;
      r_sum += q;
      f_sum += harmonic_f1(p, q);
      ++r.sentences;
    }
  }
  if (level == F1Level::corpus) {
    r.sentences = pred.size();
    r.precision = ratio(r.matched, r.predicted);
    r.recall = ratio(r.matched, r.gold);
    r.f1 = harmonic_f1(r.precision, r.recall);
  } else if (r.sentences > 0) {
    const auto count = static_cast<double>(r.sentences);
    r.precision = p_sum / count;
    r.recall = r_sum / count;
    r.f1 = f_sum / count;
  }
  return r;
}

std::vector<IdSpans> span_sets(std::span<const Prediction> predictions, bool include_whole) {
  std::vector<IdSpans> out;
  out.reserve(predictions.size());
  for (const Prediction& p : predictions) out.push_back({p.id, spans(p.tree, include_whole)});
  return out;
}

std::vector<IdSpans> span_sets(const Corpus& corpus, bool include_whole) {
  std::vector<IdSpans> out;
  out.reserve(corpus.size());
  for (const Sentence& s : corpus) out.push_back({s.id, spans(s.gold, include_whole)});
  return out;
}

F1Result evaluate(std::span<const Prediction> predictions, const Corpus& gold,
                  const EvalOptions& options) {
  if (predictions.size() == gold.size()) {
    for (std::size_t s = 0; s < gold.size(); ++s) {
      if (predictions[s].id == gold[s].id &&
          predictions[s].tree.leaf_count() != gold[s].tokens.size()) {
        throw InputError("sentence " + gold[s].id + ": predicted tree has " +
                         std::to_string(predictions[s].tree.leaf_count()) + " words, gold has " +
                         std::to_string(gold[s].tokens.size()));
      }
    }
  }
  const auto p = span_sets(predictions, options.include_whole);
  const auto g = span_sets(gold, options.include_whole);
  return f1(p, g, options.level);
}

GapReport branching_gap(std::span<const Prediction> pred_l, const Corpus& gold_l,
                        std::span<const Prediction> pred_lprime, const Corpus& gold_lprime,
                        const EvalOptions& options) {
  if (gold_l.size() != gold_lprime.size()) {
    throw InputError("L has " + std::to_string(gold_l.size()) + " sentences but L' has " +
                     std::to_string(gold_lprime.size()));
  }
  GapReport report;
  SeedResult r;
  r.original = evaluate(pred_l, gold_l, options);
  r.reversed = evaluate(pred_lprime, gold_lprime, options);
  r.gap = r.original.f1 - r.reversed.f1;
  report.per_seed.push_back(r);
  summarize(report);
  return report;
}

void summarize(GapReport& report) {
  auto& seeds = report.per_seed;
  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const SeedResult& a, const SeedResult& b) { return a.seed < b.seed; });
  if (seeds.empty()) throw InvariantError("gap report without results");
  // running means: identical per-seed values come back bit for bit
  auto mean_of = [&](auto field) {
    F1Result m;
    m.level = (seeds.front().*field).level;
    double k = 0;
    for (const SeedResult& s : seeds) {
      const F1Result& r = s.*field;
      k += 1;
      m.precision += (r.precision - m.precision) / k;
      m.recall += (r.recall - m.recall) / k;
      m.f1 += (r.f1 - m.f1) / k;
      m.matched += r.matched;
      m.predicted += r.predicted;
      m.gold += r.gold;
      m.sentences += r.sentences;
    }
    m.sentences /= seeds.size();
    return m;
  };
  report.metric_l = mean_of(&SeedResult::original);
  report.metric_lprime = mean_of(&SeedResult::reversed);
  report.gap = report.metric_l.f1 - report.metric_lprime.f1;
  double sd = 0;
  if (seeds.size() > 1) {
    double mean_gap = 0;
    for (const SeedResult& s : seeds) mean_gap += s.gap;
    mean_gap /= static_cast<double>(seeds.size());
    for (const SeedResult& s : seeds) sd += (s.gap - mean_gap) * (s.gap - mean_gap);
    sd = std::sqrt(sd / static_cast<double>(seeds.size() - 1));
  }
  report.gap_sd = sd;
}

}  // namespace bgap
