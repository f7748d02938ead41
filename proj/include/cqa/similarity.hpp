#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqa/textproc.hpp"

namespace cqa {

enum class Measure : std::uint8_t { dtw, vs };

std::string_view to_string(Measure m);

struct Distance {
  double value = 0.0;
  Measure measure = Measure::dtw;

  friend bool operator==(const Distance&, const Distance&) = default;
};

/// Word-level dynamic time warping with character Levenshtein as the local
/// cost:
///
///     f(i, j) = lev(a_i, b_j) + min(f(i-1, j), f(i, j-1), f(i-1, j-1))
///
/// with f(0, 0) = 0 and every other border cell infinite. Returns f(m, n).
/// Throws std::invalid_argument on an empty sequence (the result would be
/// infinite).
double dtw_distance(const TokenSeq& a, const TokenSeq& b);

// Sorted (dimension, weight) pairs; zero weights are dropped.
using SparseVector = std::vector<std::pair<std::size_t, double>>;

/// Unigram tf-idf space: tf is the raw in-document count, idf = ln(N / df).
class VectorSpaceModel {
 public:
  VectorSpaceModel() = default;
  VectorSpaceModel(std::map<std::string, std::size_t> vocabulary, std::vector<double> idf, std::size_t document_count);

  // Throws std::invalid_argument on an empty document list.
  static VectorSpaceModel fit(std::span<const TokenSeq> documents);

  // Out-of-vocabulary tokens are ignored.
  SparseVector vectorize(const TokenSeq& seq) const;

  std::size_t dimension() const { return idf_.size(); }
  std::size_t document_count() const { return document_count_; }
  const std::map<std::string, std::size_t>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  double idf(std::string_view token) const;

  friend bool operator==(const VectorSpaceModel&, const VectorSpaceModel&) = default;

 private:
  std::map<std::string, std::size_t> vocabulary_;
  std::vector<double> idf_;
  std::size_t document_count_ = 0;
};

double euclidean_distance(const SparseVector& a, const SparseVector& b);

double vs_distance(const VectorSpaceModel& model, const TokenSeq& a, const TokenSeq& b);

// Scales the distance by `weight` when the two texts share a treatment
// concept. Throws std::invalid_argument unless 0 < weight <= 1.
Distance apply_concept_weight(Distance d, bool shares, double weight);

}  // namespace cqa
