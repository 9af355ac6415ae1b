#include "bgap/sample.hpp"

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "bgap/errors.hpp"
#include "bgap/random.hpp"

namespace bgap {

namespace {

struct Node {
  std::string label;
  std::string word;  // set for preterminals
  std::vector<Node> kids;
};

constexpr std::array<std::string_view, 6> kDet = {"the", "a", "this", "every", "some", "that"};
constexpr std::array<std::string_view, 20> kNoun = {
    "dog",    "report", "market", "city",  "teacher", "company", "river", "plan",  "child", "price",
    "letter", "garden", "court",  "storm", "farmer",  "engine",  "bank",  "story", "road",  "friend"};
constexpr std::array<std::string_view, 10> kPlural = {"dogs",  "reports", "markets", "cities",
                                                      "plans", "prices",  "letters", "storms",
                                                      "banks", "stories"};
constexpr std::array<std::string_view, 12> kAdj = {"old",   "new",  "small", "quiet",
                                                   "large", "red",  "early", "strange",
                                                   "happy", "dark", "local", "final"};
constexpr std::array<std::string_view, 10> kProper = {"Anna", "Boris", "Paris",   "Chen",  "Maria",
                                                      "Oslo", "Kenji", "Lagos", "Ruth",  "Delhi"};
constexpr std::array<std::string_view, 5> kPronoun = {"she", "he", "they", "we", "it"};
constexpr std::array<std::string_view, 16> kVerb = {
    "saw",  "found", "sold", "bought",  "wrote",   "built",  "liked", "moved",
    "took", "made",  "kept", "visited", "watched", "opened", "left",  "heard"};
constexpr std::array<std::string_view, 10> kBase = {"see",  "find", "sell", "buy",  "write",
                                                    "build", "move", "take", "make", "visit"};
constexpr std::array<std::string_view, 8> kPrep = {"in", "on", "near", "with", "from", "under", "after", "for"};
constexpr std::array<std::string_view, 4> kModal = {"will", "could", "must", "might"};
constexpr std::array<std::string_view, 6> kAdv = {"very", "quite", "rather", "too", "so", "really"};
constexpr std::array<std::string_view, 3> kComp = {"that", "because", "while"};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  Node sentence() {
    Node s = clause(0, /*top=*/true);
    s.kids.push_back(leaf(".", "."));
    return s;
  }

 private:
  template <std::size_t N>
  Node pick(const char* tag, const std::array<std::string_view, N>& words) {
    return leaf(tag, std::string(words[rng_.below(N)]));
  }

  static Node leaf(std::string tag, std::string word) { return Node{std::move(tag), std::move(word), {}}; }
  static Node phrase(std::string label, std::vector<Node> kids) {
    return Node{std::move(label), {}, std::move(kids)};
  }

  bool chance(double p) { return rng_.uniform01() < p; }

  Node clause(int depth, bool top) {
    if (top && chance(0.12)) {
      return phrase("S", {pp(depth + 1), leaf(",", ","), np(depth + 1), vp(depth + 1)});
    }
    return phrase("S", {np(depth + 1), vp(depth + 1)});
  }

  Node np(int depth) {
    const double r = rng_.uniform01();
    if (depth < 4 && r < 0.12) return phrase("NP", {np(depth + 1), pp(depth + 1)});
    if (depth < 3 && r < 0.17) {
      return phrase("NP", {np(depth + 1), phrase("SBAR", {leaf("WDT", "which"), vp(depth + 1)})});
    }
    if (r < 0.50) return phrase("NP", {pick("DT", kDet), pick("NN", kNoun)});
    if (r < 0.68) return phrase("NP", {pick("DT", kDet), adjp(), pick("NN", kNoun)});
    if (r < 0.76) return phrase("NP", {pick("JJ", kAdj), pick("NNS", kPlural)});
    if (r < 0.86) return phrase("NP", {pick("NNP", kProper)});
    if (r < 0.93) return phrase("NP", {pick("PRP", kPronoun)});
    return phrase("NP", {pick("DT", kDet), pick("NN", kNoun), pick("NN", kNoun)});
  }

  Node adjp() {
    if (chance(0.25)) return phrase("ADJP", {pick("RB", kAdv), pick("JJ", kAdj)});
    return pick("JJ", kAdj);
  }

  Node pp(int depth) { return phrase("PP", {pick("IN", kPrep), np(depth + 1)}); }

  Node vp(int depth, bool base = false) {
    const char* vtag = base ? "VB" : "VBD";
    auto verb = [&] { return base ? pick(vtag, kBase) : pick(vtag, kVerb); };
    const double r = rng_.uniform01();
    if (depth < 4 && !base && r < 0.10) return phrase("VP", {pick("MD", kModal), vp(depth + 1, true)});
    if (depth < 3 && r < 0.20) {
      return phrase("VP", {verb(), phrase("SBAR", {pick("IN", kComp), clause(depth + 1, false)})});
    }
    if (depth < 3 && r < 0.27) {
      return phrase("VP", {verb(), phrase("S", {phrase("VP", {leaf("TO", "to"), vp(depth + 1, true)})})});
    }
    if (r < 0.55) return phrase("VP", {verb(), np(depth + 1)});
    if (r < 0.72) return phrase("VP", {verb(), np(depth + 1), pp(depth + 1)});
    if (r < 0.84) return phrase("VP", {verb(), pp(depth + 1)});
    if (r < 0.93) return phrase("VP", {verb(), phrase("ADJP", {pick("RB", kAdv), pick("JJ", kAdj)})});
    return phrase("VP", {verb()});
  }

  Rng rng_;
};

std::size_t word_count(const Node& n) {
  if (!n.word.empty()) return n.label == "." || n.label == "," ? 0 : 1;
  std::size_t total = 0;
  for (const Node& k : n.kids) total += word_count(k);
  return total;
}

void write(std::string& out, const Node& n) {
  out += '(';
  out += n.label;
  if (!n.word.empty()) {
    out += ' ';
    out += n.word;
  }
  for (const Node& k : n.kids) {
    out += ' ';
    write(out, k);
  }
  out += ')';
}

}  // namespace

std::string generate_sample_treebank(const SampleOptions& options) {
  if (options.min_words < 1 || options.min_words > options.max_words) {
    throw InputError("sample word limits must satisfy 1 <= min <= max");
  }
  Generator gen(options.seed);
  std::string out = "# Synthetic sample treebank (seed " + std::to_string(options.seed) + ", " +
                    std::to_string(options.sentences) + " sentences).\n";
  for (std::size_t made = 0; made < options.sentences;) {
    Node s = gen.sentence();
    const std::size_t words = word_count(s);
    if (words < options.min_words || words > options.max_words) continue;
    out += "(ROOT ";
    write(out, s);
    out += ")\n";
    ++made;
  }
  return out;
}

}  // namespace bgap
