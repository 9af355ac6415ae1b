#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bgap/predictions.hpp"
#include "bgap/treebank.hpp"

namespace bgap {

enum class F1Level { corpus, sentence };

struct EvalOptions {
  F1Level level = F1Level::corpus;
  /// Count the whole-sentence span as a bracket.
  bool include_whole = false;
};

/// Bracketing scores in percent. Corpus level micro-averages span counts;
/// sentence level averages per-sentence scores over sentences that have at
/// least one gold span.
struct F1Result {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t matched = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  /// Sentences contributing to a sentence-level mean (all sentences at corpus level).
  std::size_t sentences = 0;
  F1Level level = F1Level::corpus;
};

struct IdSpans {
  std::string id;
  SpanSet spans;
};

/// 2PR/(P+R) in percent with 0/0 -> 0.
double harmonic_f1(double precision, double recall) noexcept;

/// Lists must align by id; the first mismatch is an InputError naming it.
F1Result f1(std::span<const IdSpans> pred, std::span<const IdSpans> gold, F1Level level);

std::vector<IdSpans> span_sets(std::span<const Prediction> predictions, bool include_whole);
std::vector<IdSpans> span_sets(const Corpus& corpus, bool include_whole);

F1Result evaluate(std::span<const Prediction> predictions, const Corpus& gold,
                  const EvalOptions& options = {});

/// Scores of one replicate on both languages.
struct SeedResult {
  std::uint64_t seed = 0;
  F1Result original;
  F1Result reversed;
  double gap = 0;
};

/// Paired scores on L and L' and the branching gap m(L) - m(L').
struct GapReport {
  std::string protocol = "gap";
  std::string algorithm;
  std::string feature = "none";
  std::string tiebreak = "random";
  F1Result metric_l;
  F1Result metric_lprime;
  double gap = 0;
  /// Sample standard deviation of per-seed gaps (0 for a single seed).
  double gap_sd = 0;
  std::vector<SeedResult> per_seed;
};

/// Single-shot gap between predictions on L and on L'.
GapReport branching_gap(std::span<const Prediction> pred_l, const Corpus& gold_l,
                        std::span<const Prediction> pred_lprime, const Corpus& gold_lprime,
                        const EvalOptions& options = {});

/// Fill metric_l, metric_lprime, gap and gap_sd from per-seed results. Seeds
/// are sorted first so the means do not depend on completion order. Rates are
/// means over seeds, counts are totals.
void summarize(GapReport& report);

}  // namespace bgap
