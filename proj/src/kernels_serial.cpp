#include "cqa/kernels.hpp"

namespace cqa::kernels::serial {

std::vector<double> dtw_row(const TokenSeq& query, std::span<const TokenSeq* const> targets) {
  std::vector<double> out(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) out[i] = dtw_distance(query, *targets[i]);
  return out;
}

std::vector<double> vs_row(const VectorSpaceModel& model, const TokenSeq& query,
                           std::span<const TokenSeq* const> targets) {
  const SparseVector q = model.vectorize(query);
  std::vector<double> out(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) out[i] = euclidean_distance(q, model.vectorize(*targets[i]));
  return out;
}

std::vector<FeatureVector> featurize_all(std::span<const Triplet> triplets, const CandidateIndex& index,
                                         const StopList& stops) {
  std::vector<FeatureVector> out(triplets.size());
  for (std::size_t i = 0; i < triplets.size(); ++i) out[i] = featurize(triplets[i], index, stops);
  return out;
}

std::vector<double> predict_all(const RankModel& model, std::span<const FeatureVector> rows) {
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = model.predict_proba(rows[i]);
  return out;
}

}  // namespace cqa::kernels::serial
