#pragma once

#include <string>

#include "json.hpp"

#include "bgap/eval.hpp"
#include "bgap/experiments.hpp"

namespace bgap {

nlohmann::json to_json(const F1Result& result);
nlohmann::json to_json(const GapReport& report);
nlohmann::json to_json(const PipelineConfig& config);
nlohmann::json to_json(const ExperimentSpec& spec);
nlohmann::json to_json(const TuneResult& result);

/// protocol, algorithm, feature, f1_L, f1_Lprime, gap, seeds, sd
std::string tsv_row(const GapReport& report);

/// Published full-scale numbers (English, German, Chinese) for annotating
/// reports. They need trained checkpoints and licensed treebanks, so they are
/// context rather than targets.
const nlohmann::json& reference_results();

/// Matching reference rows for a report, or null.
nlohmann::json reference_for(const GapReport& report);

}  // namespace bgap
