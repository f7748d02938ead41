#pragma once

// Data-parallel inner loops of the engine. Every kernel exists twice: an
// OpenMP version used by the pipeline and a plain serial version kept as the
// reference the parallel one is tested against. Both write each output slot
// from exactly one iteration, so results are identical bit for bit.

#include <span>
#include <vector>

#include "cqa/features.hpp"
#include "cqa/learn.hpp"
#include "cqa/pipeline.hpp"
#include "cqa/similarity.hpp"
#include "cqa/textproc.hpp"

namespace cqa::kernels {

namespace serial {

std::vector<double> dtw_row(const TokenSeq& query, std::span<const TokenSeq* const> targets);
std::vector<double> vs_row(const VectorSpaceModel& model, const TokenSeq& query,
                           std::span<const TokenSeq* const> targets);
std::vector<FeatureVector> featurize_all(std::span<const Triplet> triplets, const CandidateIndex& index,
                                         const StopList& stops);
std::vector<double> predict_all(const RankModel& model, std::span<const FeatureVector> rows);

}  // namespace serial

namespace parallel {

std::vector<double> dtw_row(const TokenSeq& query, std::span<const TokenSeq* const> targets);
std::vector<double> vs_row(const VectorSpaceModel& model, const TokenSeq& query,
                           std::span<const TokenSeq* const> targets);
std::vector<FeatureVector> featurize_all(std::span<const Triplet> triplets, const CandidateIndex& index,
                                         const StopList& stops);
std::vector<double> predict_all(const RankModel& model, std::span<const FeatureVector> rows);

}  // namespace parallel

inline std::vector<double> dtw_row(Execution e, const TokenSeq& query, std::span<const TokenSeq* const> targets) {
  return e == Execution::parallel ? parallel::dtw_row(query, targets) : serial::dtw_row(query, targets);
}

inline std::vector<double> vs_row(Execution e, const VectorSpaceModel& model, const TokenSeq& query,
                                  std::span<const TokenSeq* const> targets) {
  return e == Execution::parallel ? parallel::vs_row(model, query, targets) : serial::vs_row(model, query, targets);
}

inline std::vector<FeatureVector> featurize_all(Execution e, std::span<const Triplet> triplets,
                                                const CandidateIndex& index, const StopList& stops) {
  return e == Execution::parallel ? parallel::featurize_all(triplets, index, stops)
                                  : serial::featurize_all(triplets, index, stops);
}

inline std::vector<double> predict_all(Execution e, const RankModel& model, std::span<const FeatureVector> rows) {
  return e == Execution::parallel ? parallel::predict_all(model, rows) : serial::predict_all(model, rows);
}

}  // namespace cqa::kernels
