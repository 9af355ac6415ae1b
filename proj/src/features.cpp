#include "bgap/features.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "bgap/random.hpp"

namespace bgap {

using nlohmann::json;

void RandomSpec::validate() const {
  if (!(low < high)) {
    throw InputError("random range needs low < high (got " + std::to_string(low) + ", " +
                     std::to_string(high) + ")");
  }
  if (replicates < 1) throw InputError("replicate count must be at least 1");
}

Eigen::VectorXd random_scoreseq(std::size_t n, const RandomSpec& spec, std::uint64_t stream) {
  Rng rng(mix_seed(spec.seed, stream));
  Eigen::VectorXd out(n > 0 ? n - 1 : 0);
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = rng.uniform(spec.low, spec.high);
  return out;
}

Eigen::MatrixXd random_attention(std::size_t n, AttentionKind kind, const RandomSpec& spec,
                                 std::uint64_t stream) {
  Rng rng(mix_seed(spec.seed, stream));
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd logits = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const Eigen::Index width = kind == AttentionKind::prefix ? i + 1 : size;
    for (Eigen::Index j = 0; j < width; ++j) logits(i, j) = rng.uniform(spec.low, spec.high);
  }
  return masked_softmax(logits, kind);
}

Eigen::MatrixXd random_hidden(std::size_t n, std::size_t dim, const RandomSpec& spec,
                              std::uint64_t stream) {
  Rng rng(mix_seed(spec.seed, stream));
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = rng.uniform(spec.low, spec.high);
  }
  return out;
}

namespace {

std::string available_heads(const FeatureRecord& record) {
  std::string keys;
  for (const auto& [key, _] : record.attention) {
    if (!keys.empty()) keys += ", ";
    keys += std::to_string(key.layer) + "." + std::to_string(key.head);
  }
  return keys.empty() ? "none" : keys;
}

}  // namespace

Eigen::MatrixXd attn_matrix(const FeatureRecord& record, int layer, int head, HeadMerge merge) {
  auto missing = [&](const std::string& what) {
    return InputError("sentence " + record.id + ": no attention for " + what +
                      " (available: " + available_heads(record) + ")");
  };
  if (merge == HeadMerge::single) {
    auto it = record.attention.find({layer, head});
    if (it == record.attention.end()) {
      throw missing("head " + std::to_string(layer) + "." + std::to_string(head));
    }
    return it->second;
  }
  Eigen::MatrixXd sum;
  int count = 0;
  for (const auto& [key, matrix] : record.attention) {
    if (merge == HeadMerge::head_mean && key.layer != layer) continue;
    if (count == 0) {
      sum = matrix;
    } else {
      sum += matrix;
    }
    ++count;
  }
  if (count == 0) {
    throw missing(merge == HeadMerge::head_mean ? "layer " + std::to_string(layer)
                                                : std::string("any layer"));
  }
  return sum / count;
}

void validate(const FeatureRecord& record) {
  const auto n = static_cast<Eigen::Index>(record.tokens.size());
  const std::string where = "sentence " + record.id + ": ";
  if (n == 0) throw InputError(where + "no tokens");
  for (const auto& [layer, h] : record.hidden) {
    if (h.rows() != n || h.cols() < 1) {
      throw InputError(where + "hidden layer " + std::to_string(layer) + " has " +
                       std::to_string(h.rows()) + " rows for " + std::to_string(n) + " tokens");
    }
    if (!h.allFinite()) throw InputError(where + "hidden layer " + std::to_string(layer) + " is not finite");
  }
  for (const auto& [key, a] : record.attention) {
    const std::string name = "attention " + std::to_string(key.layer) + "." + std::to_string(key.head);
    if (a.rows() != n || a.cols() != n) {
      throw InputError(where + name + " is " + std::to_string(a.rows()) + "x" +
                       std::to_string(a.cols()) + " for " + std::to_string(n) + " tokens");
    }
    if (!a.allFinite() || (a.array() < 0.0).any()) {
      throw InputError(where + name + " has negative or non-finite entries");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (record.attention_kind == AttentionKind::prefix) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
          if (a(i, j) != 0.0) {
            throw InputError(where + name + " is prefix attention but (" + std::to_string(i) + "," +
                             std::to_string(j) + ") is above the diagonal and non-zero");
          }
        }
      }
      const double sum = a.row(i).sum();
      if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
        throw InputError(where + name + " row " + std::to_string(i) + " sums to " +
                         std::to_string(sum));
      }
    }
  }
}

namespace {

Eigen::MatrixXd matrix_from_json(const json& rows, const std::string& what) {
  if (!rows.is_array()) throw InputError(what + " is not an array of rows");
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r > 0 && rows[0].is_array() ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) {
      throw InputError(what + " row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index j = 0; j < c; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) throw InputError(what + " has a non-numeric entry");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

int parse_int(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw InputError("bad " + what + " key '" + text + "'");
  return value;
}

FeatureRecord record_from_json(const json& obj) {
  if (!obj.is_object()) throw InputError("feature line is not a JSON object");
  FeatureRecord rec;
  if (!obj.contains("id") || !obj["id"].is_string()) throw InputError("feature line lacks a string id");
  rec.id = obj["id"].get<std::string>();
  const std::string where = "sentence " + rec.id + ": ";
  if (!obj.contains("tokens") || !obj["tokens"].is_array()) {
    throw InputError(where + "missing token list");
  }
  for (const json& t : obj["tokens"]) {
    if (!t.is_string()) throw InputError(where + "non-string token");
    rec.tokens.push_back(t.get<std::string>());
  }
  if (obj.contains("attention_kind")) {
    const std::string kind = obj["attention_kind"].get<std::string>();
    if (kind == "full") {
      rec.attention_kind = AttentionKind::full;
    } else if (kind == "prefix") {
      rec.attention_kind = AttentionKind::prefix;
    } else {
      throw InputError(where + "attention_kind must be full or prefix, got '" + kind + "'");
    }
  } else if (obj.contains("attention")) {
    throw InputError(where + "attention present without attention_kind");
  }
  if (obj.contains("hidden")) {
    for (const auto& [key, rows] : obj["hidden"].items()) {
      rec.hidden[parse_int(key, "hidden layer")] = matrix_from_json(rows, where + "hidden " + key);
    }
  }
  if (obj.contains("attention")) {
    for (const auto& [key, rows] : obj["attention"].items()) {
      const auto dot = key.find('.');
      if (dot == std::string::npos) throw InputError(where + "attention key '" + key + "' is not <layer>.<head>");
      HeadKey hk{parse_int(key.substr(0, dot), "attention layer"),
                 parse_int(key.substr(dot + 1), "attention head")};
      rec.attention[hk] = matrix_from_json(rows, where + "attention " + key);
    }
  }
  validate(rec);
  return rec;
}

}  // namespace

std::vector<FeatureRecord> read_feature_records(std::istream& in) {
  std::vector<FeatureRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    try {
      out.push_back(record_from_json(obj));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

std::vector<FeatureRecord> read_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open feature file '" + path.string() + "'");
  try {
    return read_feature_records(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path.string());
  }
}

void write_feature_record(std::ostream& out, const FeatureRecord& record) {
  json obj;
  obj["id"] = record.id;
  obj["tokens"] = record.tokens;
  if (!record.hidden.empty()) {
    json hidden = json::object();
    for (const auto& [layer, h] : record.hidden) hidden[std::to_string(layer)] = matrix_to_json(h);
    obj["hidden"] = std::move(hidden);
  }
  if (!record.attention.empty()) {
    json attention = json::object();
    for (const auto& [key, a] : record.attention) {
      attention[std::to_string(key.layer) + "." + std::to_string(key.head)] = matrix_to_json(a);
    }
    obj["attention"] = std::move(attention);
  }
  obj["attention_kind"] = to_string(record.attention_kind);
  out << obj.dump() << '\n';
}

std::string to_string(AttentionKind kind) { return kind == AttentionKind::full ? "full" : "prefix"; }
std::string to_string(HiddenMetric metric) { return metric == HiddenMetric::l2 ? "l2" : "cosine"; }
std::string to_string(AttentionMetric metric) { return metric == AttentionMetric::jsd ? "jsd" : "l2"; }
std::string to_string(HeadMerge merge) {
  switch (merge) {
    case HeadMerge::single:
      return "single";
    case HeadMerge::head_mean:
      return "head-mean";
    case HeadMerge::layer_head_mean:
      return "layer-head-mean";
  }
  return "single";
}

}  // namespace bgap
