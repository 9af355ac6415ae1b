#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bgap/eval.hpp"
#include "bgap/features.hpp"
#include "bgap/pipeline.hpp"
#include "bgap/random.hpp"

namespace bgap {

/// Factor-isolation protocols: random parser inputs, random model weights
/// behind a feature definition, or real model features through Hidden + Dist.
enum class Protocol { random_parser, random_feature, lm_audit };

std::string to_string(Protocol protocol);

struct ExperimentSpec {
  Protocol protocol = Protocol::random_parser;
  PipelineConfig pipeline;
  TieBreak::Mode tiebreak = TieBreak::Mode::random;
  RandomSpec random;
  EvalOptions eval;
  /// Normalization of random matrices fed to Mart/AttnSpan; unset means the
  /// per-algorithm default (see default_matrix_kind).
  std::optional<AttentionKind> matrix_kind;
  std::size_t hidden_dim = 768;
  /// Use the same draws for L and L' instead of independent side streams.
  bool paired_seeds = false;
  std::size_t threads = 0;
};

/// Mart scores causal-model impact matrices, so its random inputs are
/// prefix-normalized; AttnSpan reads full (bidirectional) attention.
AttentionKind default_matrix_kind(Algorithm algorithm) noexcept;
AttentionKind resolved_matrix_kind(const ExperimentSpec& spec) noexcept;

/// Parse `corpus` from random parser inputs drawn for replicate seed `seed`.
std::vector<Prediction> parse_random_inputs(const Corpus& corpus, const ExperimentSpec& spec,
                                            std::uint64_t seed, Side side);

/// Parse `corpus` with Dist over a randomized feature definition.
std::vector<Prediction> parse_random_features(const Corpus& corpus, const ExperimentSpec& spec,
                                              std::uint64_t seed, Side side);

/// Random scores into the parser on L and on L' (the mirrored corpus unless
/// `lprime` is supplied), averaged over replicate seeds.
GapReport run_random_parser_bias(const ExperimentSpec& spec, const Corpus& l,
                                 const Corpus* lprime = nullptr);

/// Randomized hidden states or attention, converted by the feature
/// definition, parsed with Dist.
GapReport run_random_feature_bias(const ExperimentSpec& spec, const Corpus& l,
                                  const Corpus* lprime = nullptr);

/// Hidden + Dist over real model features for L and L'.
GapReport run_lm_audit(const ExperimentSpec& spec, const Corpus& gold_l, const Corpus& gold_lprime,
                       const std::vector<FeatureRecord>& features_l,
                       const std::vector<FeatureRecord>& features_lprime);

struct TuneRow {
  PipelineConfig config;
  F1Result result;
};

struct TuneResult {
  std::size_t best_index = 0;
  std::vector<TuneRow> table;

  const TuneRow& best() const { return table.at(best_index); }
};

/// Evaluate every configuration on the validation data; the first highest
/// F1 wins.
TuneResult tune(std::span<const PipelineConfig> grid, const Corpus& validation,
                const std::vector<FeatureRecord>& features, TieBreak::Mode tiebreak,
                std::uint64_t seed, const EvalOptions& eval = {}, std::size_t threads = 0);

/// Cartesian product of layers x heads x metrics over `base`. Hidden
/// pipelines ignore heads; Mart/AttnSpan ignore metrics.
std::vector<PipelineConfig> make_grid(const PipelineConfig& base, std::span<const int> layers,
                                      std::span<const int> heads,
                                      std::span<const std::string> metrics);

}  // namespace bgap
