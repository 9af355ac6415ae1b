#include "bgap/report.hpp"

#include <cstdio>

namespace bgap {

using nlohmann::json;

json to_json(const F1Result& r) {
  return {{"level", r.level == F1Level::corpus ? "corpus" : "sentence"},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"matched", r.matched},
          {"predicted", r.predicted},
          {"gold", r.gold},
          {"sentences", r.sentences}};
}

json to_json(const GapReport& report) {
  json seeds = json::array();
  for (const SeedResult& s : report.per_seed) {
    seeds.push_back({{"seed", s.seed}, {"f1_L", s.original.f1}, {"f1_Lprime", s.reversed.f1},
                     {"gap", s.gap}});
  }
  return {{"protocol", report.protocol},
          {"algorithm", report.algorithm},
          {"feature", report.feature},
          {"tiebreak", report.tiebreak},
          {"metric_L", to_json(report.metric_l)},
          {"metric_Lprime", to_json(report.metric_lprime)},
          {"gap", report.gap},
          {"gap_sd", report.gap_sd},
          {"replicates", report.per_seed.size()},
          {"per_seed", std::move(seeds)}};
}

json to_json(const PipelineConfig& c) {
  return {{"algorithm", to_string(c.algorithm)},
          {"feature", to_string(c.feature)},
          {"layer", c.layer},
          {"head", c.head},
          {"merge", to_string(c.merge)},
          {"hidden_metric", to_string(c.hidden_metric)},
          {"attention_metric", to_string(c.attention_metric)},
          {"mart_include_diagonal", c.mart.include_diagonal},
          {"attnspan_size_power", c.attnspan.size_power},
          {"uniform_catalan", c.baseline.uniform_catalan}};
}

json to_json(const ExperimentSpec& spec) {
  return {{"protocol", to_string(spec.protocol)},
          {"pipeline", to_json(spec.pipeline)},
          {"tiebreak", to_string(spec.tiebreak)},
          {"random",
           {{"distribution", "uniform"},
            {"low", spec.random.low},
            {"high", spec.random.high},
            {"seed", spec.random.seed},
            {"replicates", spec.random.replicates}}},
          {"eval",
           {{"level", spec.eval.level == F1Level::corpus ? "corpus" : "sentence"},
            {"include_whole", spec.eval.include_whole}}},
          {"matrix_kind", to_string(resolved_matrix_kind(spec))},
          {"hidden_dim", spec.hidden_dim},
          {"paired_seeds", spec.paired_seeds}};
}

json to_json(const TuneResult& result) {
  json rows = json::array();
  for (const TuneRow& row : result.table) {
    rows.push_back({{"pipeline", describe(row.config)},
                    {"config", to_json(row.config)},
                    {"result", to_json(row.result)}});
  }
  return {{"best_index", result.best_index},
          {"best", describe(result.best().config)},
          {"best_f1", result.best().result.f1},
          {"table", std::move(rows)}};
}

std::string tsv_row(const GapReport& r) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, "%.4f\t%.4f\t%.4f\t%zu\t%.4f", r.metric_l.f1,
                r.metric_lprime.f1, r.gap, r.per_seed.size(), r.gap_sd);
  return r.protocol + "\t" + r.algorithm + "\t" + r.feature + "\t" + buffer;
}

const json& reference_results() {
  static const json table = [] {
    auto row = [](double l, double lp, double gap) {
      return json{{"L", l}, {"Lprime", lp}, {"gap", gap}};
    };
    json t;
    t["note"] =
        "Corpus-level F1 at full scale with trained models and licensed treebanks; "
        "not reproducible from the bundled sample.";
    t["pipelines"] = {
        {"bert+attnspan", row(27.81, 29.60, -1.79)}, {"gpt2+attnspan", row(27.90, 23.49, 4.41)},
        {"bert+dist", row(24.93, 25.23, -0.30)},     {"gpt2+dist", row(31.09, 36.29, -5.20)},
        {"bert+mart", row(35.82, 19.52, 16.30)},     {"gpt2+mart", row(32.39, 21.99, 10.40)}};
    t["random-parser"] = {
        {"attnspan", {{"EN", row(21.37, 21.45, -0.08)}, {"ZH", row(17.15, 16.98, 0.17)}, {"DE", row(17.79, 17.78, 0.01)}}},
        {"dist", {{"EN", row(18.30, 18.27, 0.03)}, {"ZH", row(15.28, 15.76, -0.48)}, {"DE", row(17.01, 16.94, -0.07)}}},
        {"mart", {{"EN", row(26.11, 15.41, 10.70)}, {"ZH", row(19.90, 9.51, 10.39)}, {"DE", row(8.95, 17.07, -8.12)}}},
        {"random", {{"EN", row(18.31, 18.37, -0.06)}, {"ZH", row(15.33, 15.03, 0.30)}, {"DE", row(16.99, 16.98, 0.01)}}},
        {"right-b", {{"EN", row(35.82, 10.40, 25.42)}, {"ZH", row(19.77, 8.11, 11.66)}, {"DE", row(7.99, 16.54, -8.55)}}}};
    t["random-feature"] = {
        {"hidden", {{"EN", row(18.39, 18.29, -0.10)}, {"ZH", row(15.32, 15.30, 0.02)}, {"DE", row(16.88, 17.10, 0.28)}}},
        {"prefix-attn", {{"EN", row(20.44, 13.17, 7.27)}, {"ZH", row(16.78, 12.66, 4.12)}, {"DE", row(14.93, 18.83, -3.90)}}},
        {"full-attn", {{"EN", row(18.33, 18.38, -0.05)}, {"ZH", row(15.12, 15.04, 0.08)}, {"DE", row(16.84, 16.79, 0.05)}}}};
    t["lm-audit"] = {{"bert", row(24.93, 25.23, -0.30)},
                     {"gpt2", row(23.85, 26.09, -2.24)},
                     {"lstm", row(28.72, 26.22, 2.50)},
                     {"random", row(18.31, 18.37, -0.06)}};
    return t;
  }();
  return table;
}

json reference_for(const GapReport& report) {
  const json& t = reference_results();
  if (report.protocol == "random-parser" && t["random-parser"].contains(report.algorithm)) {
    return t["random-parser"][report.algorithm];
  }
  if (report.protocol == "random-feature" && t["random-feature"].contains(report.feature)) {
    return t["random-feature"][report.feature];
  }
  if (report.protocol == "lm-audit") return t["lm-audit"];
  return nullptr;
}

}  // namespace bgap
