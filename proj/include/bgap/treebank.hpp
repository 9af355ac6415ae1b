#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bgap/errors.hpp"

namespace bgap {

/// Unlabeled, ordered constituency tree over word indices.
///
/// A leaf holds the 0-based index of its word; an internal node holds two or
/// more children that cover adjacent, contiguous intervals. Token text lives
/// next to the tree (see Sentence), so mirroring and span extraction stay
/// purely structural.
class Tree {
 public:
  Tree() = default;

  static Tree leaf(std::size_t index);

  /// Throws std::invalid_argument unless there are at least two children
  /// covering consecutive intervals.
  static Tree node(std::vector<Tree> children);

  bool is_leaf() const noexcept { return children_.empty(); }
  /// Word index of a leaf (first covered index for internal nodes).
  std::size_t index() const noexcept { return first_; }
  const std::vector<Tree>& children() const noexcept { return children_; }

  std::size_t first() const noexcept { return first_; }
  std::size_t last() const noexcept { return last_; }
  std::size_t leaf_count() const noexcept { return last_ - first_ + 1; }
  std::size_t internal_count() const noexcept;

  bool operator==(const Tree&) const = default;

 private:
  std::vector<Tree> children_;
  std::size_t first_ = 0;
  std::size_t last_ = 0;
};

/// Inclusive 0-based word interval with end > start.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  auto operator<=>(const Span&) const = default;
};

/// Sorted, duplicate-free set of multi-word spans.
class SpanSet {
 public:
  SpanSet() = default;
  SpanSet(std::vector<Span> spans, bool includes_whole);

  bool includes_whole() const noexcept { return includes_whole_; }
  bool contains(Span s) const noexcept;
  std::size_t size() const noexcept { return spans_.size(); }
  bool empty() const noexcept { return spans_.empty(); }
  auto begin() const noexcept { return spans_.begin(); }
  auto end() const noexcept { return spans_.end(); }
  const std::vector<Span>& values() const noexcept { return spans_; }

  /// |this ∩ other|.
  std::size_t overlap(const SpanSet& other) const noexcept;

  bool operator==(const SpanSet&) const = default;

 private:
  std::vector<Span> spans_;
  bool includes_whole_ = false;
};

/// One sentence of a treebank: tokens plus the gold tree over them.
struct Sentence {
  std::string id;
  std::vector<std::string> tokens;
  Tree gold;

  bool operator==(const Sentence&) const = default;
};

using Corpus = std::vector<Sentence>;

struct ReadOptions {
  /// Keep punctuation leaves instead of stripping them.
  bool keep_punct = false;
};

struct ReadResult {
  Corpus corpus;
  /// Trees dropped because nothing was left after preprocessing.
  std::size_t skipped = 0;
};

/// Read labeled bracketed trees (PTB style). Labels are discarded, traces
/// (-NONE-) and, by default, punctuation are removed, and unary chains are
/// collapsed. Sentence ids are the 1-based ordinal of the tree in the input.
/// Throws ParseError on unbalanced parentheses.
ReadResult read_bracketed(std::istream& in, const ReadOptions& options = {});
ReadResult read_bracketed_file(const std::filesystem::path& path,
                               const ReadOptions& options = {});

/// Canonical labeled form: internal nodes "(X ...)", leaves as bare tokens,
/// single-word sentences as "(X w)". Re-reading yields the same tree.
std::string to_bracketed(const Tree& tree, const std::vector<std::string>& tokens);
void write_bracketed(std::ostream& out, const Corpus& corpus);

/// Unlabeled form used for predictions: "(a (b c))"; a single word is bare.
std::string to_unlabeled(const Tree& tree, const std::vector<std::string>& tokens);

/// Parse the unlabeled form; every atom is a leaf and `tokens` is replaced by
/// the leaf words. Unary brackets are collapsed. Malformed text throws
/// InputError quoting the text.
Tree parse_unlabeled(std::string_view text, std::vector<std::string>& tokens);

/// Punctuation test on surface form: non-empty and made only of ASCII
/// punctuation characters.
bool is_punct_token(std::string_view token) noexcept;
/// Punctuation test on a PTB part-of-speech tag.
bool is_punct_tag(std::string_view tag) noexcept;

/// Reverse child order recursively; leaf i becomes n-1-i.
Tree mirror_tree(const Tree& tree);
Sentence mirror_sentence(const Sentence& sentence);
/// The reversed language: same ids, reversed tokens, mirrored gold.
Corpus mirror_corpus(const Corpus& corpus);

/// One span per internal node; the whole-sentence span only when requested.
SpanSet spans(const Tree& tree, bool include_whole = false);

/// Check the Sentence invariants (leaf count equals token count, leaves
/// 0..n-1, no unary nodes, non-empty tokens); throws InputError naming the id.
void validate(const Sentence& sentence);

}  // namespace bgap
