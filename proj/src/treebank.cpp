#include "bgap/treebank.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace bgap {

// ---------------------------------------------------------------------------
// Tree / SpanSet

Tree Tree::leaf(std::size_t index) {
  Tree t;
  t.first_ = index;
  t.last_ = index;
  return t;
}

Tree Tree::node(std::vector<Tree> children) {
  if (children.size() < 2) {
    throw std::invalid_argument("internal node needs at least two children");
  }
  for (std::size_t k = 0; k + 1 < children.size(); ++k) {
    if (children[k].last_ + 1 != children[k + 1].first_) {
      throw std::invalid_argument("children do not cover consecutive intervals");
    }
  }
  Tree t;
  t.first_ = children.front().first_;
  t.last_ = children.back().last_;
  t.children_ = std::move(children);
  return t;
}

std::size_t Tree::internal_count() const noexcept {
  if (is_leaf()) return 0;
  std::size_t count = 1;
  for (const Tree& c : children_) count += c.internal_count();
  return count;
}

SpanSet::SpanSet(std::vector<Span> spans, bool includes_whole)
    : spans_(std::move(spans)), includes_whole_(includes_whole) {
  std::sort(spans_.begin(), spans_.end());
  spans_.erase(std::unique(spans_.begin(), spans_.end()), spans_.end());
}

bool SpanSet::contains(Span s) const noexcept {
  return std::binary_search(spans_.begin(), spans_.end(), s);
}

std::size_t SpanSet::overlap(const SpanSet& other) const noexcept {
  std::size_t count = 0;
  auto a = spans_.begin();
  auto b = other.spans_.begin();
  while (a != spans_.end() && b != other.spans_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++count;
      ++a;
      ++b;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Punctuation

bool is_punct_token(std::string_view token) noexcept {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(),
                     [](unsigned char c) { return std::ispunct(c) != 0; });
}

bool is_punct_tag(std::string_view tag) noexcept {
  // PTB, CTB (PU) and STTS/SPMRL ($( $, $.) punctuation tags.
  static constexpr std::array<std::string_view, 13> kTags = {
      "''", "``", ".", ":", ",", "-LRB-", "-RRB-", "#", "$", "PU", "$(", "$,", "$."};
  return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

// ---------------------------------------------------------------------------
// Reading

namespace {

// Raw s-expression node. `atom` nodes are words; others carry an optional label.
struct Raw {
  std::string text;
  bool atom = false;
  bool has_label = false;
  std::vector<Raw> kids;
};

// Word-level tree before index assignment.
struct Proto {
  std::string word;
  std::vector<Proto> kids;
};

class Lexer {
 public:
  explicit Lexer(std::istream& in) : in_(in) {}

  enum class Kind { open, close, atom, end };
  struct Token {
    Kind kind;
    std::string text;
    std::size_t line;
  };

  Token next() {
    for (;;) {
      while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
      if (pos_ < line_.size()) break;
      if (!std::getline(in_, line_)) return {Kind::end, {}, line_no_};
      ++line_no_;
      pos_ = 0;
      const auto first = line_.find_first_not_of(" \t\r");
      if (first != std::string::npos && line_[first] == '#') line_.clear();
    }
    const char c = line_[pos_];
    if (c == '(') {
      ++pos_;
      return {Kind::open, "(", line_no_};
    }
    if (c == ')') {
      ++pos_;
      return {Kind::close, ")", line_no_};
    }
    const std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != '(' && line_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
    return {Kind::atom, line_.substr(start, pos_ - start), line_no_};
  }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

// Reads one top-level labeled tree; nullopt at end of input.
std::optional<Raw> read_raw(Lexer& lexer) {
  std::vector<Raw> stack;
  std::size_t open_line = 0;
  for (;;) {
    Lexer::Token tok = lexer.next();
    switch (tok.kind) {
      case Lexer::Kind::end:
        if (stack.empty()) return std::nullopt;
        throw ParseError("unbalanced parentheses: bracket opened here is never closed", open_line);
      case Lexer::Kind::open:
        if (stack.empty()) open_line = tok.line;
        stack.emplace_back();
        break;
      case Lexer::Kind::close: {
        if (stack.empty()) throw ParseError("unbalanced parentheses: unexpected ')'", tok.line);
        Raw done = std::move(stack.back());
        stack.pop_back();
        if (stack.empty()) return done;
        stack.back().kids.push_back(std::move(done));
        break;
      }
      case Lexer::Kind::atom: {
        if (stack.empty()) throw ParseError("text outside brackets: '" + tok.text + "'", tok.line);
        Raw& top = stack.back();
        if (!top.has_label && top.kids.empty()) {
          top.text = std::move(tok.text);
          top.has_label = true;
        } else {
          Raw word;
          word.text = std::move(tok.text);
          word.atom = true;
          top.kids.push_back(std::move(word));
        }
        break;
      }
    }
  }
}

std::optional<Proto> collapse(std::vector<Proto> kids) {
  if (kids.empty()) return std::nullopt;
  if (kids.size() == 1) return std::move(kids.front());
  Proto p;
  p.kids = std::move(kids);
  return p;
}

std::optional<Proto> preprocess(const Raw& raw, const ReadOptions& options) {
  if (raw.atom) {
    if (!options.keep_punct && is_punct_token(raw.text)) return std::nullopt;
    return Proto{raw.text, {}};
  }
  const bool preterminal = raw.has_label && raw.kids.size() == 1 && raw.kids.front().atom;
  if (preterminal) {
    if (raw.text == "-NONE-") return std::nullopt;
    if (!options.keep_punct && is_punct_tag(raw.text)) return std::nullopt;
    return Proto{raw.kids.front().text, {}};
  }
  std::vector<Proto> kids;
  for (const Raw& k : raw.kids) {
    if (auto p = preprocess(k, options)) kids.push_back(std::move(*p));
  }
  return collapse(std::move(kids));
}

Tree index_tree(const Proto& p, std::vector<std::string>& tokens) {
  if (p.kids.empty()) {
    tokens.push_back(p.word);
    return Tree::leaf(tokens.size() - 1);
  }
  std::vector<Tree> kids;
  kids.reserve(p.kids.size());
  for (const Proto& k : p.kids) kids.push_back(index_tree(k, tokens));
  return Tree::node(std::move(kids));
}

void check_token(const std::string& token) {
  if (token.empty()) throw InputError("empty token cannot be written");
  for (unsigned char c : token) {
    if (c == '(' || c == ')' || std::isspace(c)) {
      throw InputError("token '" + token + "' contains brackets or whitespace");
    }
  }
}

void append_tree(std::string& out, const Tree& t, const std::vector<std::string>& tokens,
                 bool labeled) {
  if (t.is_leaf()) {
    const std::string& token = tokens.at(t.index());
    check_token(token);
    out += token;
    return;
  }
  out += labeled ? "(X" : "(";
  bool first = !labeled;
  for (const Tree& c : t.children()) {
    if (!first) out += ' ';
    first = false;
    append_tree(out, c, tokens, labeled);
  }
  out += ')';
}

Tree mirror_within(const Tree& t, std::size_t axis) {
  if (t.is_leaf()) return Tree::leaf(axis - t.index());
  std::vector<Tree> kids;
  kids.reserve(t.children().size());
  for (auto it = t.children().rbegin(); it != t.children().rend(); ++it) {
    kids.push_back(mirror_within(*it, axis));
  }
  return Tree::node(std::move(kids));
}

void collect_spans(const Tree& t, std::vector<Span>& out) {
  if (t.is_leaf()) return;
  out.push_back({t.first(), t.last()});
  for (const Tree& c : t.children()) collect_spans(c, out);
}

}  // namespace

ReadResult read_bracketed(std::istream& in, const ReadOptions& options) {
  ReadResult result;
  Lexer lexer(in);
  std::size_t ordinal = 0;
  while (auto raw = read_raw(lexer)) {
    ++ordinal;
    auto proto = preprocess(*raw, options);
    if (!proto) {
      ++result.skipped;
      continue;
    }
    Sentence s;
    s.id = std::to_string(ordinal);
    s.gold = index_tree(*proto, s.tokens);
    result.corpus.push_back(std::move(s));
  }
  return result;
}

ReadResult read_bracketed_file(const std::filesystem::path& path, const ReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open treebank '" + path.string() + "'");
  try {
    return read_bracketed(in, options);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path.string());
  }
}

std::string to_bracketed(const Tree& tree, const std::vector<std::string>& tokens) {
  std::string out;
  if (tree.is_leaf()) {
    out = "(X ";
    append_tree(out, tree, tokens, true);
    out += ')';
    return out;
  }
  append_tree(out, tree, tokens, true);
  return out;
}

void write_bracketed(std::ostream& out, const Corpus& corpus) {
  for (const Sentence& s : corpus) out << to_bracketed(s.gold, s.tokens) << '\n';
}

std::string to_unlabeled(const Tree& tree, const std::vector<std::string>& tokens) {
  std::string out;
  append_tree(out, tree, tokens, false);
  return out;
}

Tree parse_unlabeled(std::string_view text, std::vector<std::string>& tokens) {
  std::vector<std::vector<Proto>> stack;
  std::optional<Proto> root;
  std::size_t pos = 0;
  auto finish = [&](Proto p) {
    if (root) throw InputError("unlabeled tree has more than one root: '" + std::string(text) + "'");
    root = std::move(p);
  };
  while (pos < text.size()) {
    const char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else if (c == '(') {
      stack.emplace_back();
      ++pos;
    } else if (c == ')') {
      if (stack.empty()) throw InputError("unbalanced ')' in '" + std::string(text) + "'");
      auto kids = std::move(stack.back());
      stack.pop_back();
      auto p = collapse(std::move(kids));
      if (!p) throw InputError("empty brackets in '" + std::string(text) + "'");
      if (stack.empty()) {
        finish(std::move(*p));
      } else {
        stack.back().push_back(std::move(*p));
      }
      ++pos;
    } else {
      const std::size_t start = pos;
      while (pos < text.size() && text[pos] != '(' && text[pos] != ')' &&
             !std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      }
      Proto word{std::string(text.substr(start, pos - start)), {}};
      if (stack.empty()) {
        finish(std::move(word));
      } else {
        stack.back().push_back(std::move(word));
      }
    }
  }
  if (!stack.empty()) throw InputError("unbalanced '(' in '" + std::string(text) + "'");
  if (!root) throw InputError("empty unlabeled tree");
  tokens.clear();
  return index_tree(*root, tokens);
}

// ---------------------------------------------------------------------------
// Mirroring and spans

Tree mirror_tree(const Tree& tree) { return mirror_within(tree, tree.first() + tree.last()); }

Sentence mirror_sentence(const Sentence& sentence) {
  Sentence m;
  m.id = sentence.id;
  m.tokens.assign(sentence.tokens.rbegin(), sentence.tokens.rend());
  m.gold = mirror_tree(sentence.gold);
  return m;
}

Corpus mirror_corpus(const Corpus& corpus) {
  Corpus out;
  out.reserve(corpus.size());
  for (const Sentence& s : corpus) out.push_back(mirror_sentence(s));
  return out;
}

SpanSet spans(const Tree& tree, bool include_whole) {
  std::vector<Span> out;
  collect_spans(tree, out);
  if (!include_whole) {
    std::erase(out, Span{tree.first(), tree.last()});
  }
  return SpanSet(std::move(out), include_whole);
}

void validate(const Sentence& sentence) {
  const std::size_t n = sentence.tokens.size();
  if (n == 0) throw InputError("sentence " + sentence.id + ": no tokens");
  for (const auto& t : sentence.tokens) {
    if (t.empty()) throw InputError("sentence " + sentence.id + ": empty token");
  }
  if (sentence.gold.first() != 0 || sentence.gold.leaf_count() != n) {
    throw InputError("sentence " + sentence.id + ": tree covers " +
                     std::to_string(sentence.gold.leaf_count()) + " words but there are " +
                     std::to_string(n) + " tokens");
  }
}

}  // namespace bgap
