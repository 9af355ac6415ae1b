#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bgap/errors.hpp"

namespace bgap {

enum class AttentionKind { full, prefix };
enum class HiddenMetric { l2, cosine };
enum class AttentionMetric { jsd, l2 };
enum class HeadMerge { single, head_mean, layer_head_mean };

/// Row sums of stored attention must be within this of 1.
inline constexpr double kRowSumTolerance = 1e-6;
/// Looser check applied when attention rows are turned into distances.
inline constexpr double kMetricRowTolerance = 1e-4;

struct HeadKey {
  int layer = 0;
  int head = 0;

  auto operator<=>(const HeadKey&) const = default;
};

/// Word-level model features for one sentence.
struct FeatureRecord {
  std::string id;
  std::vector<std::string> tokens;
  std::map<int, Eigen::MatrixXd> hidden;          // layer -> n x d
  std::map<HeadKey, Eigen::MatrixXd> attention;   // (layer, head) -> n x n
  AttentionKind attention_kind = AttentionKind::full;
};

/// n-1 split scores between adjacent words.
struct ScoreSeq {
  std::string id;
  Eigen::VectorXd values;
};

/// n x n scores (attention or impact).
struct ScoreMatrix {
  std::string id;
  Eigen::MatrixXd values;
};

/// Uniform draw parameters; replicates are consumed by the experiment runner.
struct RandomSpec {
  double low = -1.0;
  double high = 1.0;
  std::uint64_t seed = 0;
  int replicates = 10;

  /// Throws InputError unless low < high and replicates >= 1.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Random surrogates. Each is a pure function of (spec, shape, stream); the
// stream is normally a per-sentence seed from sentence_seed().

Eigen::VectorXd random_scoreseq(std::size_t n, const RandomSpec& spec, std::uint64_t stream);

/// Uniform logits on permitted cells (all cells, or j <= i for prefix), then
/// a row-wise softmax over the permitted cells. Forbidden cells are exactly 0.
Eigen::MatrixXd random_attention(std::size_t n, AttentionKind kind, const RandomSpec& spec,
                                 std::uint64_t stream);

Eigen::MatrixXd random_hidden(std::size_t n, std::size_t dim, const RandomSpec& spec,
                              std::uint64_t stream);

// ---------------------------------------------------------------------------
// Dense helpers

template <typename Derived>
using DenseOf = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Derived>
using VectorOf = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;

/// Row-wise softmax restricted to the support of `kind`, with max subtraction.
template <typename Derived>
DenseOf<Derived> masked_softmax(const Eigen::MatrixBase<Derived>& logits, AttentionKind kind) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = logits.rows();
  DenseOf<Derived> out = DenseOf<Derived>::Zero(n, logits.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index width = kind == AttentionKind::prefix ? i + 1 : logits.cols();
    auto row = logits.row(i).head(width);
    const Scalar peak = row.maxCoeff();
    auto shifted = (row.array() - peak).exp();
    out.row(i).head(width) = shifted / shifted.sum();
  }
  return out;
}

/// Reverse both axes: the score matrix of the mirrored sentence.
template <typename Derived>
auto matrix_reverse(const Eigen::MatrixBase<Derived>& m) {
  return m.reverse();
}

/// Base-2 Jensen-Shannon divergence of two probability vectors, in [0, 1].
template <typename A, typename B>
typename A::Scalar jensen_shannon(const Eigen::MatrixBase<A>& p, const Eigen::MatrixBase<B>& q) {
  using Scalar = typename A::Scalar;
  Scalar total = 0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const Scalar pk = p(k);
    const Scalar qk = q(k);
    const Scalar mid = (pk + qk) / 2;
    if (pk > 0) total += pk * std::log2(pk / mid);
    if (qk > 0) total += qk * std::log2(qk / mid);
  }
  return std::max(Scalar(0), total / 2);
}

/// value_i = metric(row_i, row_{i+1}). L2 is the Euclidean distance; cosine is
/// 1 - cos(angle). A zero row under cosine is an InputError naming the row.
template <typename Derived>
VectorOf<Derived> dist_from_hidden(const Eigen::MatrixBase<Derived>& hidden, HiddenMetric metric) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = hidden.rows();
  VectorOf<Derived> out(n > 0 ? n - 1 : 0);
  if (metric == HiddenMetric::cosine) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (hidden.row(i).norm() == Scalar(0)) {
        throw InputError("hidden row " + std::to_string(i) + " has zero norm; cosine undefined");
      }
    }
  }
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const auto a = hidden.row(i);
    const auto b = hidden.row(i + 1);
    if (metric == HiddenMetric::l2) {
      out(i) = (a - b).norm();
    } else {
      out(i) = Scalar(1) - a.dot(b) / (a.norm() * b.norm());
    }
  }
  return out;
}

/// value_i = metric(row_i, row_{i+1}) over full-length rows, so prefix rows
/// are compared zero-padded. Rows must be probability vectors.
template <typename Derived>
VectorOf<Derived> dist_from_attention(const Eigen::MatrixBase<Derived>& attention,
                                      AttentionMetric metric) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = attention.rows();
  if (attention.cols() != n) throw InputError("attention matrix is not square");
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar sum = attention.row(i).sum();
    if (!(std::abs(sum - Scalar(1)) <= Scalar(kMetricRowTolerance)) ||
        (attention.row(i).array() < Scalar(0)).any()) {
      throw InputError("attention row " + std::to_string(i) +
                       " is not a probability vector (sum " + std::to_string(double(sum)) + ")");
    }
  }
  VectorOf<Derived> out(n > 0 ? n - 1 : 0);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const auto p = attention.row(i).transpose();
    const auto q = attention.row(i + 1).transpose();
    out(i) = metric == AttentionMetric::jsd ? jensen_shannon(p, q) : (p - q).norm();
  }
  return out;
}

/// Select one head or average a group of heads. Missing keys raise an
/// InputError that lists what the record does have.
Eigen::MatrixXd attn_matrix(const FeatureRecord& record, int layer, int head, HeadMerge merge);

// ---------------------------------------------------------------------------
// JSON Lines ingestion

/// Check shapes, finiteness, row sums and prefix triangularity.
void validate(const FeatureRecord& record);

std::vector<FeatureRecord> read_feature_records(std::istream& in);
std::vector<FeatureRecord> read_feature_file(const std::filesystem::path& path);
void write_feature_record(std::ostream& out, const FeatureRecord& record);

std::string to_string(AttentionKind kind);
std::string to_string(HiddenMetric metric);
std::string to_string(AttentionMetric metric);
std::string to_string(HeadMerge merge);

}  // namespace bgap
