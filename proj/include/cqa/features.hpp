#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqa/corpus.hpp"
#include "cqa/lexicon.hpp"
#include "cqa/similarity.hpp"
#include "cqa/textproc.hpp"

namespace cqa {

struct CandidateIndex;
struct Triplet;

enum class Feature : std::size_t {
  len_qp,               // f1  tokens in Q_p
  len_qt,               // f2  tokens in Q_t
  stops_qp,             // f3
  stops_qt,             // f4
  vs_qp_qt,             // f5  VS(Q_p, Q_t)
  vs_diff,              // f6  |VS(Q_p, A_t) - VS(Q_t, A_t)|
  dtw_qp_qt,            // f7  DTW(Q_p, Q_t)
  dtw_diff,             // f8  |DTW(Q_p, A_t) - DTW(Q_t, A_t)|
  overlap_sp_st,        // f9  |S_P n S_T|
  overlap_sp_sa,        // f10 |S_P n S_A|
  overlap_sets_differ,  // f11 (S_P n S_T) != (S_P n S_A)
  setdiff_sp_st,        // f12 |S_P ^ S_T|
  setdiff_sp_sa,        // f13 |S_P ^ S_A|
};

inline constexpr std::size_t kFeatureCount = 13;

// "f1".."f13"
std::string feature_name(std::size_t index);

struct FeatureVector {
  std::array<double, kFeatureCount> values{};

  double& operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
  double operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Everything a triplet's features depend on, with the texts already
/// tokenized and their concepts recognized.
struct FeatureInputs {
  const TokenSeq& qp;
  const TokenSeq& qt;
  const TokenSeq& at;
  const ConceptSet& sp;
  const ConceptSet& st;
  const ConceptSet& sa;
  const VectorSpaceModel& model;
  const StopList& stops;
};

FeatureVector compute_features(const FeatureInputs& in);

// Uses the archive question's class model for the tf-idf distances.
FeatureVector featurize(const Triplet& t, const CandidateIndex& index, const StopList& stops);

/// Label entropy reduction (bits) from conditioning on the binned feature.
/// Columns with at most `bins` distinct values are binned by value; others
/// are split into `bins` equal-frequency bins (equal values share a bin).
/// Throws std::invalid_argument on length mismatch or empty input.
double information_gain(std::span<const double> values, std::span<const Label> labels, std::size_t bins = 10);

double entropy_bits(std::size_t positives, std::size_t total);

// Bin id per value as used by information_gain.
std::vector<std::size_t> equal_frequency_bins(std::span<const double> values, std::size_t bins);

struct FeatureGain {
  std::size_t feature = 0;
  double gain = 0.0;
};

// All 13 features, sorted by descending gain (feature index breaks ties).
std::vector<FeatureGain> rank_features(std::span<const FeatureVector> rows, std::span<const Label> labels,
                                       std::size_t bins = 10);

/// One row of the feature matrix export. `label` is empty for unlabeled rows;
/// `group` is the prospective question id used for fold assignment.
struct FeatureRow {
  FeatureVector x;
  std::optional<Label> label;
  std::string group;

  friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

// CSV: header `f1,...,f13,label,qp_id`.
void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows);
std::vector<FeatureRow> read_feature_csv(std::istream& in);

}  // namespace cqa
