#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace bgap {

/// Synthetic English-like treebank with right-branching-skewed gold trees.
struct SampleOptions {
  std::size_t sentences = 2000;
  std::uint64_t seed = 2020;
  /// Word limits, counted without punctuation.
  std::size_t min_words = 4;
  std::size_t max_words = 30;
};

/// Labeled bracketed text, one tree per line, preceded by a `#` header.
std::string generate_sample_treebank(const SampleOptions& options = {});

}  // namespace bgap
