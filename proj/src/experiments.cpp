#include "bgap/experiments.hpp"

#include "bgap/parallel.hpp"

namespace bgap {

std::string to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::random_parser:
      return "random-parser";
    case Protocol::random_feature:
      return "random-feature";
    case Protocol::lm_audit:
      return "lm-audit";
  }
  return "random-parser";
}

AttentionKind default_matrix_kind(Algorithm algorithm) noexcept {
  return algorithm == Algorithm::mart ? AttentionKind::prefix : AttentionKind::full;
}

AttentionKind resolved_matrix_kind(const ExperimentSpec& spec) noexcept {
  return spec.matrix_kind.value_or(default_matrix_kind(spec.pipeline.algorithm));
}

namespace {

RandomSpec replicate(const RandomSpec& base, std::uint64_t seed) {
  RandomSpec r = base;
  r.seed = seed;
  return r;
}

Side side_for(const ExperimentSpec& spec, Side side) {
  return spec.paired_seeds ? Side::original : side;
}

// Runs `parse_one(sentence) -> Tree` over the corpus in parallel.
template <typename ParseOne>
std::vector<Prediction> parse_all(const Corpus& corpus, std::size_t threads, ParseOne parse_one) {
  std::vector<Prediction> out(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t s) {
    out[s].id = corpus[s].id;
    out[s].tokens = corpus[s].tokens;
    out[s].tree = parse_one(corpus[s]);
  });
  return out;
}

const Corpus& reversed_side(const Corpus& l, const Corpus* lprime, Corpus& storage) {
  if (lprime == nullptr) {
    storage = mirror_corpus(l);
    return storage;
  }
  if (lprime->size() != l.size()) {
    throw InputError("L has " + std::to_string(l.size()) + " sentences but L' has " +
                     std::to_string(lprime->size()));
  }
  for (std::size_t s = 0; s < l.size(); ++s) {
    if ((*lprime)[s].id != l[s].id || (*lprime)[s].tokens.size() != l[s].tokens.size()) {
      throw InputError("sentence " + l[s].id + ": L and L' are not aligned");
    }
  }
  return *lprime;
}

template <typename ParseSide>
GapReport replicate_gap(const ExperimentSpec& spec, const Corpus& l, const Corpus* lprime,
                        ParseSide parse_side) {
  spec.random.validate();
  Corpus storage;
  const Corpus& lp = reversed_side(l, lprime, storage);
  GapReport report;
  report.protocol = to_string(spec.protocol);
  report.algorithm = to_string(spec.pipeline.algorithm);
  report.feature = to_string(spec.pipeline.feature);
  report.tiebreak = to_string(spec.tiebreak);
  for (int r = 0; r < spec.random.replicates; ++r) {
    const std::uint64_t seed = spec.random.seed + static_cast<std::uint64_t>(r);
    SeedResult result;
    result.seed = seed;
    result.original = evaluate(parse_side(l, seed, Side::original), l, spec.eval);
    result.reversed = evaluate(parse_side(lp, seed, Side::reversed), lp, spec.eval);
    result.gap = result.original.f1 - result.reversed.f1;
    report.per_seed.push_back(result);
  }
  summarize(report);
  return report;
}

}  // namespace

std::vector<Prediction> parse_random_inputs(const Corpus& corpus, const ExperimentSpec& spec,
                                            std::uint64_t seed, Side side) {
  const PipelineConfig& cfg = spec.pipeline;
  const RandomSpec draw = replicate(spec.random, seed);
  const Side stream_side = side_for(spec, side);
  const AttentionKind kind = resolved_matrix_kind(spec);
  return parse_all(corpus, spec.threads, [&](const Sentence& s) {
    const std::size_t n = s.tokens.size();
    const std::uint64_t scores = sentence_seed(seed, s.id, stream_side, Stream::scores);
    const TieBreak tb{spec.tiebreak, sentence_seed(seed, s.id, stream_side, Stream::tiebreak)};
    switch (cfg.algorithm) {
      case Algorithm::dist:
        return parse_dist(random_scoreseq(n, draw, scores), tb);
      case Algorithm::mart:
        return parse_mart(random_attention(n, kind, draw, scores), tb, cfg.mart);
      case Algorithm::attnspan:
        return parse_attnspan(random_attention(n, kind, draw, scores), tb, cfg.attnspan);
      default:
        return parse_baseline(n, cfg.algorithm,
                              sentence_seed(seed, s.id, stream_side, Stream::tree), cfg.baseline);
    }
  });
}

std::vector<Prediction> parse_random_features(const Corpus& corpus, const ExperimentSpec& spec,
                                              std::uint64_t seed, Side side) {
  const PipelineConfig& cfg = spec.pipeline;
  if (cfg.algorithm != Algorithm::dist) {
    throw InputError("random-feature experiments parse with dist, not " + to_string(cfg.algorithm));
  }
  if (cfg.feature == FeatureDef::none) {
    throw InputError("random-feature experiments need a feature definition");
  }
  if (spec.hidden_dim < 1) throw InputError("hidden dimension must be at least 1");
  const RandomSpec draw = replicate(spec.random, seed);
  const Side stream_side = side_for(spec, side);
  return parse_all(corpus, spec.threads, [&](const Sentence& s) {
    const std::size_t n = s.tokens.size();
    const std::uint64_t scores = sentence_seed(seed, s.id, stream_side, Stream::scores);
    const TieBreak tb{spec.tiebreak, sentence_seed(seed, s.id, stream_side, Stream::tiebreak)};
    if (cfg.feature == FeatureDef::hidden) {
      return parse_dist(dist_from_hidden(random_hidden(n, spec.hidden_dim, draw, scores),
                                         cfg.hidden_metric),
                        tb);
    }
    const AttentionKind kind =
        cfg.feature == FeatureDef::prefix_attn ? AttentionKind::prefix : AttentionKind::full;
    return parse_dist(
        dist_from_attention(random_attention(n, kind, draw, scores), cfg.attention_metric), tb);
  });
}

GapReport run_random_parser_bias(const ExperimentSpec& spec, const Corpus& l, const Corpus* lprime) {
  if (spec.protocol != Protocol::random_parser) {
    throw InputError("run_random_parser_bias called with protocol " + to_string(spec.protocol));
  }
  GapReport report = replicate_gap(spec, l, lprime, [&](const Corpus& c, std::uint64_t seed, Side side) {
    return parse_random_inputs(c, spec, seed, side);
  });
  if (spec.pipeline.algorithm == Algorithm::mart || spec.pipeline.algorithm == Algorithm::attnspan) {
    report.feature = "random-" + to_string(resolved_matrix_kind(spec));
  } else if (spec.pipeline.algorithm == Algorithm::dist) {
    report.feature = "random-scores";
  } else {
    report.feature = "none";
  }
  return report;
}

GapReport run_random_feature_bias(const ExperimentSpec& spec, const Corpus& l, const Corpus* lprime) {
  if (spec.protocol != Protocol::random_feature) {
    throw InputError("run_random_feature_bias called with protocol " + to_string(spec.protocol));
  }
  return replicate_gap(spec, l, lprime, [&](const Corpus& c, std::uint64_t seed, Side side) {
    return parse_random_features(c, spec, seed, side);
  });
}

GapReport run_lm_audit(const ExperimentSpec& spec, const Corpus& gold_l, const Corpus& gold_lprime,
                       const std::vector<FeatureRecord>& features_l,
                       const std::vector<FeatureRecord>& features_lprime) {
  if (spec.protocol != Protocol::lm_audit) {
    throw InputError("run_lm_audit called with protocol " + to_string(spec.protocol));
  }
  if (spec.pipeline.algorithm != Algorithm::dist || spec.pipeline.feature != FeatureDef::hidden) {
    throw InputError("lm-audit runs the hidden + dist pipeline only");
  }
  if (gold_l.size() != gold_lprime.size()) {
    throw InputError("L has " + std::to_string(gold_l.size()) + " sentences but L' has " +
                     std::to_string(gold_lprime.size()));
  }
  const auto aligned_l = align_records(features_l, gold_l);
  const auto aligned_lp = align_records(features_lprime, gold_lprime);
  // Both sides share one tie-break stream: the inputs are real features, and
  // identical inputs must give an exactly zero gap.
  const auto pred_l =
      parse_records(aligned_l, spec.pipeline, spec.tiebreak, spec.random.seed, spec.threads);
  const auto pred_lp =
      parse_records(aligned_lp, spec.pipeline, spec.tiebreak, spec.random.seed, spec.threads);
  GapReport report = branching_gap(pred_l, gold_l, pred_lp, gold_lprime, spec.eval);
  report.per_seed.front().seed = spec.random.seed;
  report.protocol = to_string(spec.protocol);
  report.algorithm = to_string(spec.pipeline.algorithm);
  report.feature = to_string(spec.pipeline.feature);
  report.tiebreak = to_string(spec.tiebreak);
  return report;
}

TuneResult tune(std::span<const PipelineConfig> grid, const Corpus& validation,
                const std::vector<FeatureRecord>& features, TieBreak::Mode tiebreak,
                std::uint64_t seed, const EvalOptions& eval, std::size_t threads) {
  if (grid.empty()) throw InputError("tuning grid is empty");
  const auto aligned = align_records(features, validation);
  TuneResult result;
  for (const PipelineConfig& cfg : grid) {
    const auto predictions = parse_records(aligned, cfg, tiebreak, seed, threads);
    result.table.push_back({cfg, evaluate(predictions, validation, eval)});
    if (result.table.back().result.f1 > result.table[result.best_index].result.f1) {
      result.best_index = result.table.size() - 1;
    }
  }
  return result;
}

std::vector<PipelineConfig> make_grid(const PipelineConfig& base, std::span<const int> layers,
                                      std::span<const int> heads,
                                      std::span<const std::string> metrics) {
  const bool uses_heads = base.feature == FeatureDef::prefix_attn ||
                          base.feature == FeatureDef::full_attn;
  const bool uses_metric = base.algorithm == Algorithm::dist;
  const std::vector<int> one_head{base.head};
  const std::vector<std::string> one_metric{""};
  std::span<const int> head_axis = uses_heads && base.merge == HeadMerge::single
                                       ? heads
                                       : std::span<const int>(one_head);
  std::span<const std::string> metric_axis =
      uses_metric && !metrics.empty() ? metrics : std::span<const std::string>(one_metric);
  std::vector<PipelineConfig> grid;
  for (int layer : layers) {
    for (int head : head_axis) {
      for (const std::string& metric : metric_axis) {
        PipelineConfig cfg = base;
        cfg.layer = layer;
        cfg.head = head;
        if (!metric.empty()) {
          if (base.feature == FeatureDef::hidden) {
            if (metric == "l2") {
              cfg.hidden_metric = HiddenMetric::l2;
            } else if (metric == "cosine") {
              cfg.hidden_metric = HiddenMetric::cosine;
            } else {
              throw InputError("unknown hidden metric '" + metric + "'");
            }
          } else if (metric == "jsd") {
            cfg.attention_metric = AttentionMetric::jsd;
          } else if (metric == "l2") {
            cfg.attention_metric = AttentionMetric::l2;
          } else {
            throw InputError("unknown attention metric '" + metric + "'");
          }
        }
        grid.push_back(cfg);
      }
    }
  }
  return grid;
}

}  // namespace bgap
