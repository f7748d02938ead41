#include "cqa/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace cqa {

std::string_view to_string(Measure m) { return m == Measure::dtw ? "DTW" : "VS"; }

double dtw_distance(const TokenSeq& a, const TokenSeq& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("undefined DTW on empty sequence");
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = b.size();
  std::vector<double> prev(n + 1, inf);
  std::vector<double> cur(n + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = inf;
    for (std::size_t j = 1; j <= n; ++j) {
      const double best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = static_cast<double>(levenshtein(a[i - 1], b[j - 1])) + best;
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

VectorSpaceModel::VectorSpaceModel(std::map<std::string, std::size_t> vocabulary, std::vector<double> idf,
                                   std::size_t document_count)
    : vocabulary_(std::move(vocabulary)), idf_(std::move(idf)), document_count_(document_count) {
  if (vocabulary_.size() != idf_.size()) throw std::invalid_argument("vocabulary and idf sizes differ");
  std::vector<bool> used(idf_.size(), false);
  for (const auto& [tok, dim] : vocabulary_) {
    if (dim >= idf_.size() || used[dim]) throw std::invalid_argument("vocabulary dimensions must be contiguous from 0");
    used[dim] = true;
  }
}

VectorSpaceModel VectorSpaceModel::fit(std::span<const TokenSeq> documents) {
  if (documents.empty()) throw std::invalid_argument("cannot fit a vector-space model on zero documents");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    std::set<std::string> uniq(doc.begin(), doc.end());
    for (const auto& t : uniq) ++df[t];
  }
  std::map<std::string, std::size_t> vocabulary;
  std::vector<double> idf;
  idf.reserve(df.size());
  const auto n = static_cast<double>(documents.size());
  for (const auto& [tok, count] : df) {
    vocabulary.emplace(tok, idf.size());
    idf.push_back(std::log(n / static_cast<double>(count)));
  }
  return VectorSpaceModel(std::move(vocabulary), std::move(idf), documents.size());
}

double VectorSpaceModel::idf(std::string_view token) const {
  auto it = vocabulary_.find(std::string(token));
  return it == vocabulary_.end() ? 0.0 : idf_[it->second];
}

SparseVector VectorSpaceModel::vectorize(const TokenSeq& seq) const {
  std::map<std::size_t, double> counts;
  for (const auto& t : seq) {
    if (auto it = vocabulary_.find(t); it != vocabulary_.end()) counts[it->second] += 1.0;
  }
  SparseVector out;
  out.reserve(counts.size());
  for (const auto& [dim, tf] : counts) {
    const double w = tf * idf_[dim];
    if (w != 0.0) out.emplace_back(dim, w);
  }
  return out;
}

double euclidean_distance(const SparseVector& a, const SparseVector& b) {
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    double d = 0.0;
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      d = a[i++].second;
    } else if (i == a.size() || b[j].first < a[i].first) {
      d = b[j++].second;
    } else {
      d = a[i++].second - b[j++].second;
    }
    sum += d * d;
  }
  return std::sqrt(sum);
}

double vs_distance(const VectorSpaceModel& model, const TokenSeq& a, const TokenSeq& b) {
  return euclidean_distance(model.vectorize(a), model.vectorize(b));
}

Distance apply_concept_weight(Distance d, bool shares, double weight) {
  if (!(weight > 0.0 && weight <= 1.0)) throw std::invalid_argument("concept weight must lie in (0, 1]");
  if (shares) d.value *= weight;
  return d;
}

}  // namespace cqa
