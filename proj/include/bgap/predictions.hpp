#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bgap/treebank.hpp"

namespace bgap {

/// A predicted tree for one sentence.
struct Prediction {
  std::string id;
  std::vector<std::string> tokens;
  Tree tree;

  bool operator==(const Prediction&) const = default;
};

/// JSON Lines, one `{"id": ..., "tree": "(a (b c))"}` object per sentence.
void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions);
std::vector<Prediction> read_predictions(std::istream& in);
std::vector<Prediction> read_predictions_file(const std::filesystem::path& path);

}  // namespace bgap
