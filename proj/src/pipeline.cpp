#include "bgap/pipeline.hpp"

#include <map>

#include "bgap/parallel.hpp"
#include "bgap/random.hpp"

namespace bgap {

std::string to_string(FeatureDef def) {
  switch (def) {
    case FeatureDef::none:
      return "none";
    case FeatureDef::hidden:
      return "hidden";
    case FeatureDef::prefix_attn:
      return "prefix-attn";
    case FeatureDef::full_attn:
      return "full-attn";
  }
  return "none";
}

FeatureDef feature_def_from_string(const std::string& name) {
  for (FeatureDef d :
       {FeatureDef::none, FeatureDef::hidden, FeatureDef::prefix_attn, FeatureDef::full_attn}) {
    if (to_string(d) == name) return d;
  }
  throw InputError("unknown feature definition '" + name + "'");
}

void check_compatible(const PipelineConfig& config) {
  const std::string algo = to_string(config.algorithm);
  switch (config.algorithm) {
    case Algorithm::dist:
      if (config.feature == FeatureDef::none) {
        throw InputError("dist needs a feature definition (hidden, prefix-attn or full-attn)");
      }
      break;
    case Algorithm::mart:
    case Algorithm::attnspan:
      if (config.feature != FeatureDef::prefix_attn && config.feature != FeatureDef::full_attn) {
        throw InputError(algo + " parses an attention matrix; use prefix-attn or full-attn, not " +
                         to_string(config.feature));
      }
      break;
    default:
      break;
  }
}

std::string describe(const PipelineConfig& config) {
  std::string out = to_string(config.algorithm);
  if (is_baseline(config.algorithm)) return out;
  out += "+" + to_string(config.feature) + "@" + std::to_string(config.layer);
  if (config.feature == FeatureDef::hidden) return out + "/" + to_string(config.hidden_metric);
  if (config.merge == HeadMerge::single) out += "." + std::to_string(config.head);
  if (config.merge != HeadMerge::single) out += "/" + to_string(config.merge);
  if (config.algorithm == Algorithm::dist) out += "/" + to_string(config.attention_metric);
  return out;
}

namespace {

const Eigen::MatrixXd& hidden_layer(const FeatureRecord& record, int layer) {
  auto it = record.hidden.find(layer);
  if (it == record.hidden.end()) {
    std::string keys;
    for (const auto& [l, _] : record.hidden) keys += (keys.empty() ? "" : ", ") + std::to_string(l);
    throw InputError("sentence " + record.id + ": no hidden layer " + std::to_string(layer) +
                     " (available: " + (keys.empty() ? "none" : keys) + ")");
  }
  return it->second;
}

Eigen::MatrixXd attention_for(const FeatureRecord& record, const PipelineConfig& config) {
  const AttentionKind wanted =
      config.feature == FeatureDef::prefix_attn ? AttentionKind::prefix : AttentionKind::full;
  if (record.attention_kind != wanted) {
    throw InputError("sentence " + record.id + ": " + to_string(config.feature) +
                     " requested but the record holds " + to_string(record.attention_kind) +
                     " attention");
  }
  return attn_matrix(record, config.layer, config.head, config.merge);
}

}  // namespace

Tree parse_record(const FeatureRecord& record, const PipelineConfig& config, TieBreak tb,
                  std::uint64_t tree_seed) {
  check_compatible(config);
  const std::size_t n = record.tokens.size();
  switch (config.algorithm) {
    case Algorithm::dist: {
      if (config.feature == FeatureDef::hidden) {
        return parse_dist(dist_from_hidden(hidden_layer(record, config.layer), config.hidden_metric),
                          tb);
      }
      const Eigen::MatrixXd a = attention_for(record, config);
      return parse_dist(dist_from_attention(a, config.attention_metric), tb);
    }
    case Algorithm::mart:
      return parse_mart(attention_for(record, config), tb, config.mart);
    case Algorithm::attnspan:
      return parse_attnspan(attention_for(record, config), tb, config.attnspan);
    default:
      return parse_baseline(n, config.algorithm, tree_seed, config.baseline);
  }
}

std::vector<FeatureRecord> align_records(const std::vector<FeatureRecord>& records,
                                         const Corpus& corpus) {
  std::map<std::string, const FeatureRecord*> by_id;
  for (const FeatureRecord& r : records) {
    if (!by_id.emplace(r.id, &r).second) throw InputError("duplicate feature record id " + r.id);
  }
  std::vector<FeatureRecord> out;
  out.reserve(corpus.size());
  for (const Sentence& s : corpus) {
    auto it = by_id.find(s.id);
    if (it == by_id.end()) throw InputError("sentence " + s.id + ": no feature record");
    if (it->second->tokens != s.tokens) {
      throw InputError("sentence " + s.id + ": feature tokens differ from treebank tokens");
    }
    out.push_back(*it->second);
  }
  return out;
}

std::vector<Prediction> parse_records(const std::vector<FeatureRecord>& records,
                                      const PipelineConfig& config, TieBreak::Mode tiebreak,
                                      std::uint64_t seed, std::size_t threads) {
  check_compatible(config);
  std::vector<Prediction> out(records.size());
  parallel_for(records.size(), threads, [&](std::size_t s) {
    const FeatureRecord& r = records[s];
    const TieBreak tb{tiebreak, sentence_seed(seed, r.id, Side::original, Stream::tiebreak)};
    out[s].id = r.id;
    out[s].tokens = r.tokens;
    out[s].tree =
        parse_record(r, config, tb, sentence_seed(seed, r.id, Side::original, Stream::tree));
  });
  return out;
}

}  // namespace bgap
