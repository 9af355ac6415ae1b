#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bgap/features.hpp"
#include "bgap/parsers.hpp"
#include "bgap/predictions.hpp"
#include "bgap/treebank.hpp"

namespace bgap {

/// Which model information feeds the parser.
enum class FeatureDef { none, hidden, prefix_attn, full_attn };

std::string to_string(FeatureDef def);
FeatureDef feature_def_from_string(const std::string& name);

/// A syntax extracting pipeline: feature definition plus parsing algorithm.
struct PipelineConfig {
  Algorithm algorithm = Algorithm::dist;
  FeatureDef feature = FeatureDef::none;
  int layer = 0;
  int head = 0;
  HeadMerge merge = HeadMerge::single;
  HiddenMetric hidden_metric = HiddenMetric::l2;
  AttentionMetric attention_metric = AttentionMetric::jsd;
  MartOptions mart;
  AttnSpanOptions attnspan;
  BaselineOptions baseline;
};

/// Dist takes split scores; Mart and AttnSpan take an attention matrix;
/// baselines take nothing. Throws InputError for incompatible pairs.
void check_compatible(const PipelineConfig& config);

/// Short human-readable description, e.g. "dist+hidden@6/l2".
std::string describe(const PipelineConfig& config);

/// Parse one sentence from its model features.
Tree parse_record(const FeatureRecord& record, const PipelineConfig& config, TieBreak tb,
                  std::uint64_t tree_seed = 0);

/// Order `records` like `corpus` and check that tokens agree; errors name the
/// offending sentence id.
std::vector<FeatureRecord> align_records(const std::vector<FeatureRecord>& records,
                                         const Corpus& corpus);

/// Parse every record; tie-break and baseline seeds derive from `seed` and
/// the sentence id, so the result is independent of `threads`.
std::vector<Prediction> parse_records(const std::vector<FeatureRecord>& records,
                                      const PipelineConfig& config, TieBreak::Mode tiebreak,
                                      std::uint64_t seed, std::size_t threads = 0);

}  // namespace bgap
