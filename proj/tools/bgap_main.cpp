// bgap: branching-gap experiments over bracketed treebanks.
//
// Standard output carries TSV summary lines (or JSON with --emit json);
// diagnostics go to standard error. Exit codes: 0 ok, 2 usage or input
// error, 3 internal invariant violation.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bgap/errors.hpp"
#include "bgap/experiments.hpp"
#include "bgap/report.hpp"
#include "bgap/sample.hpp"
#include "manifest.hpp"

namespace {

using namespace bgap;
using nlohmann::json;

const std::map<std::string, TieBreak::Mode> kTieBreaks{{"leftmost", TieBreak::Mode::leftmost},
                                                       {"rightmost", TieBreak::Mode::rightmost},
                                                       {"random", TieBreak::Mode::random}};
const std::map<std::string, HeadMerge> kMerges{{"single", HeadMerge::single},
                                               {"head-mean", HeadMerge::head_mean},
                                               {"layer-head-mean", HeadMerge::layer_head_mean}};
const std::map<std::string, AttentionKind> kKinds{{"full", AttentionKind::full},
                                                  {"prefix", AttentionKind::prefix}};
const std::map<std::string, F1Level> kLevels{{"corpus", F1Level::corpus},
                                             {"sentence", F1Level::sentence}};

std::map<std::string, Algorithm> algorithms() {
  std::map<std::string, Algorithm> out;
  for (Algorithm a : {Algorithm::dist, Algorithm::mart, Algorithm::attnspan, Algorithm::right_b,
                      Algorithm::left_b, Algorithm::random_tree, Algorithm::balanced}) {
    out[to_string(a)] = a;
  }
  return out;
}

std::map<std::string, FeatureDef> feature_defs() {
  std::map<std::string, FeatureDef> out;
  for (FeatureDef d :
       {FeatureDef::none, FeatureDef::hidden, FeatureDef::prefix_attn, FeatureDef::full_attn}) {
    out[to_string(d)] = d;
  }
  return out;
}

// Everything a subcommand can set. Unused fields keep their defaults.
struct Options {
  ExperimentSpec spec;
  std::string metric;
  std::optional<std::string> attention_kind;
  bool keep_punct = false;
  bool random = false;
  std::string emit = "tsv";
  std::string out;

  std::string treebank, treebank_lprime;
  std::string features, features_lprime;
  std::string pred_l, pred_lprime, gold_l, gold_lprime;
  std::string in;
  std::vector<int> layers{0}, heads{0};
  std::vector<std::string> metrics;
  SampleOptions sample;
};

void add_threads(CLI::App* cmd, Options& o) {
  cmd->add_option("--threads", o.spec.threads, "Worker threads (0 = all cores); never changes results");
}

void add_eval(CLI::App* cmd, Options& o) {
  cmd->add_option("--level", o.spec.eval.level, "F1 aggregation: corpus or sentence")
      ->transform(CLI::CheckedTransformer(kLevels).description(""));
  cmd->add_flag("--include-whole", o.spec.eval.include_whole,
                "Count the whole-sentence span as a constituent");
}

void add_reading(CLI::App* cmd, Options& o) {
  cmd->add_flag("--keep-punct", o.keep_punct, "Keep punctuation tokens when reading treebanks");
}

void add_output(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "Write the JSON report here");
  cmd->add_option("--emit", o.emit, "What goes to standard output")
      ->check(CLI::IsMember({"tsv", "json"}));
}

void add_tiebreak(CLI::App* cmd, Options& o) {
  cmd->add_option("--tiebreak", o.spec.tiebreak, "Tie resolution: leftmost, rightmost, random")
      ->transform(CLI::CheckedTransformer(kTieBreaks).description(""));
  cmd->add_option("--seed", o.spec.random.seed, "Base seed");
}

void add_pipeline(CLI::App* cmd, Options& o, bool with_algo) {
  PipelineConfig& p = o.spec.pipeline;
  if (with_algo) {
    cmd->add_option("--algo", p.algorithm, "Parser: dist, mart, attnspan, right-b, left-b, random, balanced")
        ->transform(CLI::CheckedTransformer(algorithms()).description(""));
  }
  cmd->add_option("--feature-def", p.feature, "Feature definition: none, hidden, prefix-attn, full-attn")
      ->transform(CLI::CheckedTransformer(feature_defs()).description(""));
  cmd->add_option("--layer", p.layer, "Model layer");
  cmd->add_option("--head", p.head, "Attention head");
  cmd->add_option("--merge", p.merge, "Head merge: single, head-mean, layer-head-mean")
      ->transform(CLI::CheckedTransformer(kMerges).description(""));
  cmd->add_option("--metric", o.metric,
                  "Distance metric: l2 or cosine for hidden, jsd or l2 for attention");
  cmd->add_flag("--mart-exclude-diagonal", [&p](std::int64_t) { p.mart.include_diagonal = false; },
                "Leave the diagonal out of Mart's within-block means");
  cmd->add_option("--attnspan-size-power", p.attnspan.size_power,
                  "Exponent of the block-size normalization in AttnSpan's split cost")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--uniform-catalan", p.baseline.uniform_catalan,
                "Random baseline draws uniformly over all bracketings");
}

void add_random(CLI::App* cmd, Options& o) {
  cmd->add_option("--seeds,--replicates", o.spec.random.replicates, "Replicate count (seed, seed+1, ...)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--low", o.spec.random.low, "Lower bound of uniform draws");
  cmd->add_option("--high", o.spec.random.high, "Upper bound of uniform draws");
  cmd->add_flag("--paired-seeds", o.spec.paired_seeds, "Use the same draws for L and L'");
  cmd->add_option("--attention-kind", o.attention_kind,
                  "Normalization of random matrices: full or prefix (default per algorithm)")
      ->check(CLI::IsMember({"full", "prefix"}));
  cmd->add_option("--hidden-dim", o.spec.hidden_dim, "Width of random hidden vectors")
      ->check(CLI::PositiveNumber);
}

// Resolve string-valued options that depend on other choices.
void finish(Options& o) {
  PipelineConfig& p = o.spec.pipeline;
  if (o.attention_kind) o.spec.matrix_kind = kKinds.at(*o.attention_kind);
  if (o.metric.empty()) return;
  if (p.feature == FeatureDef::hidden) {
    if (o.metric == "l2") {
      p.hidden_metric = HiddenMetric::l2;
    } else if (o.metric == "cosine") {
      p.hidden_metric = HiddenMetric::cosine;
    } else {
      throw InputError("--metric " + o.metric + " does not apply to hidden states (l2, cosine)");
    }
  } else if (o.metric == "jsd") {
    p.attention_metric = AttentionMetric::jsd;
  } else if (o.metric == "l2") {
    p.attention_metric = AttentionMetric::l2;
  } else {
    throw InputError("--metric " + o.metric + " does not apply to attention (jsd, l2)");
  }
}

Corpus load_corpus(const std::string& path, const Options& o) {
  ReadResult r = read_bracketed_file(path, ReadOptions{o.keep_punct});
  if (r.skipped > 0) {
    std::cerr << path << ": skipped " << r.skipped << " trees with no words left\n";
  }
  return std::move(r.corpus);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

void emit_report(const Options& o, const cli::RunManifest& manifest, const json& body,
                 const std::string& tsv) {
  json doc = {{"manifest", manifest.to_json()}, {"report", body}};
  const std::string text = doc.dump(2) + "\n";
  if (!o.out.empty()) open_out(o.out) << text;
  if (o.emit == "json") {
    std::cout << text;
  } else {
    std::cout << tsv << "\n";
  }
}

void emit_gap(const Options& o, cli::RunManifest manifest, const GapReport& report) {
  json body = to_json(report);
  body["reference"] = reference_for(report);
  emit_report(o, manifest, body, tsv_row(report));
}

cli::RunManifest manifest_for(const Options& o, const std::vector<std::string>& command,
                              std::vector<std::filesystem::path> inputs) {
  cli::RunManifest m;
  m.command = command;
  m.config = to_json(o.spec);
  m.seed = o.spec.random.seed;
  m.inputs = std::move(inputs);
  return m;
}

// ---------------------------------------------------------------------------

void cmd_reverse_treebank(const Options& o) {
  const Corpus corpus = load_corpus(o.in, o);
  std::ofstream out = open_out(o.out);
  write_bracketed(out, mirror_corpus(corpus));
}

void cmd_parse(const Options& o) {
  const ExperimentSpec& spec = o.spec;
  const PipelineConfig& cfg = spec.pipeline;
  std::vector<Prediction> predictions;
  if (o.random || is_baseline(cfg.algorithm)) {
    if (o.treebank.empty()) throw InputError("--treebank is required without --features");
    const Corpus corpus = load_corpus(o.treebank, o);
    if (o.random && cfg.feature != FeatureDef::none) {
      predictions = parse_random_features(corpus, spec, spec.random.seed, Side::original);
    } else {
      predictions = parse_random_inputs(corpus, spec, spec.random.seed, Side::original);
    }
  } else {
    if (o.features.empty()) {
      throw InputError("--algo " + to_string(cfg.algorithm) + " needs --features or --random");
    }
    check_compatible(cfg);
    std::vector<FeatureRecord> records = read_feature_file(o.features);
    if (!o.treebank.empty()) records = align_records(records, load_corpus(o.treebank, o));
    predictions = parse_records(records, cfg, spec.tiebreak, spec.random.seed, spec.threads);
  }
  std::ofstream out = open_out(o.out);
  write_predictions(out, predictions);
}

void cmd_gap(const Options& o, const std::vector<std::string>& command) {
  const Corpus gold_l = load_corpus(o.gold_l, o);
  const Corpus gold_lp = o.gold_lprime.empty() ? mirror_corpus(gold_l) : load_corpus(o.gold_lprime, o);
  const auto pred_l = read_predictions_file(o.pred_l);
  const auto pred_lp = read_predictions_file(o.pred_lprime);
  GapReport report = branching_gap(pred_l, gold_l, pred_lp, gold_lp, o.spec.eval);
  std::vector<std::filesystem::path> inputs{o.pred_l, o.gold_l, o.pred_lprime};
  if (!o.gold_lprime.empty()) inputs.emplace_back(o.gold_lprime);
  cli::RunManifest m = manifest_for(o, command, inputs);
  m.config = {{"eval",
               {{"level", o.spec.eval.level == F1Level::corpus ? "corpus" : "sentence"},
                {"include_whole", o.spec.eval.include_whole}}}};
  emit_gap(o, m, report);
}

void cmd_random_bias(const Options& o, const std::vector<std::string>& command) {
  const Corpus l = load_corpus(o.treebank, o);
  std::optional<Corpus> lp;
  std::vector<std::filesystem::path> inputs{o.treebank};
  if (!o.treebank_lprime.empty()) {
    lp = load_corpus(o.treebank_lprime, o);
    inputs.emplace_back(o.treebank_lprime);
  }
  const Corpus* lprime = lp ? &*lp : nullptr;
  const GapReport report = o.spec.protocol == Protocol::random_parser
                               ? run_random_parser_bias(o.spec, l, lprime)
                               : run_random_feature_bias(o.spec, l, lprime);
  emit_gap(o, manifest_for(o, command, inputs), report);
}

void cmd_lm_audit(const Options& o, const std::vector<std::string>& command) {
  const Corpus gold_l = load_corpus(o.treebank, o);
  const Corpus gold_lp =
      o.treebank_lprime.empty() ? mirror_corpus(gold_l) : load_corpus(o.treebank_lprime, o);
  const auto feats_l = read_feature_file(o.features);
  const auto feats_lp = read_feature_file(o.features_lprime);
  std::vector<std::filesystem::path> inputs{o.treebank, o.features, o.features_lprime};
  if (!o.treebank_lprime.empty()) inputs.emplace_back(o.treebank_lprime);
  emit_gap(o, manifest_for(o, command, inputs), run_lm_audit(o.spec, gold_l, gold_lp, feats_l, feats_lp));
}

void cmd_tune(const Options& o, const std::vector<std::string>& command) {
  check_compatible(o.spec.pipeline);
  const Corpus validation = load_corpus(o.treebank, o);
  const auto features = read_feature_file(o.features);
  const auto grid = make_grid(o.spec.pipeline, o.layers, o.heads, o.metrics);
  const TuneResult result = tune(grid, validation, features, o.spec.tiebreak, o.spec.random.seed,
                                 o.spec.eval, o.spec.threads);
  std::ostringstream tsv;
  for (std::size_t r = 0; r < result.table.size(); ++r) {
    const TuneRow& row = result.table[r];
    tsv << (r == result.best_index ? "best" : "-") << '\t' << describe(row.config) << '\t'
        << row.result.f1;
    if (r + 1 < result.table.size()) tsv << '\n';
  }
  emit_report(o, manifest_for(o, command, {o.treebank, o.features}), to_json(result), tsv.str());
}

void cmd_generate_sample(const Options& o) {
  std::ofstream out = open_out(o.out);
  out << generate_sample_treebank(o.sample);
}

void cmd_reference_results(const Options& o) {
  const std::string text = reference_results().dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    open_out(o.out) << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Branching-gap experiments for syntax extraction pipelines", "bgap"};
  app.set_version_flag("--version", std::string(cli::kVersion));
  app.require_subcommand(1);
  Options o;
  std::function<void()> action;
  const std::vector<std::string> command = cli::recorded_command(argc, argv);

  auto* reverse = app.add_subcommand("reverse-treebank", "Write the word-order-reversed treebank");
  reverse->add_option("--in", o.in, "Bracketed treebank")->required()->check(CLI::ExistingFile);
  reverse->add_option("--out", o.out, "Mirrored treebank")->required();
  add_reading(reverse, o);
  reverse->callback([&] { action = [&] { cmd_reverse_treebank(o); }; });

  auto* parse = app.add_subcommand("parse", "Parse sentences into unlabeled binary trees");
  add_pipeline(parse, o, true);
  parse->add_option("--features", o.features, "Feature JSONL file")->check(CLI::ExistingFile);
  parse->add_option("--treebank", o.treebank, "Treebank supplying ids and tokens")
      ->check(CLI::ExistingFile);
  parse->add_flag("--random", o.random, "Draw random inputs instead of reading features");
  parse->add_option("--out", o.out, "Predictions JSONL")->required();
  add_tiebreak(parse, o);
  add_reading(parse, o);
  add_threads(parse, o);
  parse->add_option("--low", o.spec.random.low, "Lower bound of uniform draws");
  parse->add_option("--high", o.spec.random.high, "Upper bound of uniform draws");
  parse->add_option("--attention-kind", o.attention_kind, "Normalization of random matrices")
      ->check(CLI::IsMember({"full", "prefix"}));
  parse->add_option("--hidden-dim", o.spec.hidden_dim, "Width of random hidden vectors")
      ->check(CLI::PositiveNumber);
  parse->callback([&] { action = [&] { finish(o); cmd_parse(o); }; });

  auto* gap = app.add_subcommand("gap", "Branching gap from predictions on L and L'");
  gap->add_option("--pred-l", o.pred_l, "Predictions on L")->required()->check(CLI::ExistingFile);
  gap->add_option("--gold-l", o.gold_l, "Gold treebank for L")->required()->check(CLI::ExistingFile);
  gap->add_option("--pred-lprime", o.pred_lprime, "Predictions on L'")
      ->required()
      ->check(CLI::ExistingFile);
  gap->add_option("--gold-lprime", o.gold_lprime, "Gold treebank for L' (default: mirror of L)")
      ->check(CLI::ExistingFile);
  add_eval(gap, o);
  add_reading(gap, o);
  add_output(gap, o);
  gap->callback([&] { action = [&] { cmd_gap(o, command); }; });

  auto* rpb = app.add_subcommand("random-parser-bias", "Random parser inputs on L and L'");
  auto* rfb = app.add_subcommand("random-feature-bias", "Randomized feature definitions through Dist");
  for (CLI::App* cmd : {rpb, rfb}) {
    cmd->add_option("--treebank", o.treebank, "Gold treebank for L")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--treebank-lprime", o.treebank_lprime, "Gold treebank for L' (default: mirror)")
        ->check(CLI::ExistingFile);
    add_pipeline(cmd, o, cmd == rpb);
    add_tiebreak(cmd, o);
    add_random(cmd, o);
    add_eval(cmd, o);
    add_reading(cmd, o);
    add_output(cmd, o);
    add_threads(cmd, o);
  }
  rpb->callback([&] {
    o.spec.protocol = Protocol::random_parser;
    action = [&] { finish(o); cmd_random_bias(o, command); };
  });
  rfb->callback([&] {
    o.spec.protocol = Protocol::random_feature;
    o.spec.pipeline.algorithm = Algorithm::dist;
    action = [&] { finish(o); cmd_random_bias(o, command); };
  });

  auto* audit = app.add_subcommand("lm-audit", "Hidden + Dist over model features for L and L'");
  audit->add_option("--treebank,--gold-l", o.treebank, "Gold treebank for L")
      ->required()
      ->check(CLI::ExistingFile);
  audit->add_option("--treebank-lprime,--gold-lprime", o.treebank_lprime,
                    "Gold treebank for L' (default: mirror)")
      ->check(CLI::ExistingFile);
  audit->add_option("--features-l", o.features, "Feature JSONL for L")
      ->required()
      ->check(CLI::ExistingFile);
  audit->add_option("--features-lprime", o.features_lprime, "Feature JSONL for L'")
      ->required()
      ->check(CLI::ExistingFile);
  audit->add_option("--layer", o.spec.pipeline.layer, "Hidden layer");
  audit->add_option("--metric", o.metric, "l2 or cosine")->check(CLI::IsMember({"l2", "cosine"}));
  add_tiebreak(audit, o);
  add_eval(audit, o);
  add_reading(audit, o);
  add_output(audit, o);
  add_threads(audit, o);
  audit->callback([&] {
    o.spec.protocol = Protocol::lm_audit;
    o.spec.pipeline.algorithm = Algorithm::dist;
    o.spec.pipeline.feature = FeatureDef::hidden;
    o.spec.random.replicates = 1;
    action = [&] { finish(o); cmd_lm_audit(o, command); };
  });

  auto* tune_cmd = app.add_subcommand("tune", "Grid search over layers, heads and metrics");
  tune_cmd->add_option("--treebank", o.treebank, "Validation treebank")
      ->required()
      ->check(CLI::ExistingFile);
  tune_cmd->add_option("--features", o.features, "Validation feature JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  add_pipeline(tune_cmd, o, true);
  tune_cmd->add_option("--layers", o.layers, "Layers to try")->delimiter(',');
  tune_cmd->add_option("--heads", o.heads, "Heads to try")->delimiter(',');
  tune_cmd->add_option("--metrics", o.metrics, "Metrics to try")->delimiter(',');
  add_tiebreak(tune_cmd, o);
  add_eval(tune_cmd, o);
  add_reading(tune_cmd, o);
  add_output(tune_cmd, o);
  add_threads(tune_cmd, o);
  tune_cmd->callback([&] { action = [&] { finish(o); cmd_tune(o, command); }; });

  auto* sample = app.add_subcommand("generate-sample", "Write the synthetic sample treebank");
  sample->add_option("--sentences", o.sample.sentences, "Number of trees")->check(CLI::PositiveNumber);
  sample->add_option("--seed", o.sample.seed, "Generator seed");
  sample->add_option("--min-words", o.sample.min_words, "Shortest sentence, punctuation excluded");
  sample->add_option("--max-words", o.sample.max_words, "Longest sentence, punctuation excluded");
  sample->add_option("--out", o.out, "Output path")->required();
  sample->callback([&] { action = [&] { cmd_generate_sample(o); }; });

  auto* refs = app.add_subcommand("reference-results", "Print the published full-scale numbers");
  refs->add_option("--out", o.out, "Output path (default: standard output)");
  refs->callback([&] { action = [&] { cmd_reference_results(o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    action();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
