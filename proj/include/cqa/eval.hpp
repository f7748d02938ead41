#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cqa/corpus.hpp"
#include "cqa/features.hpp"
#include "cqa/learn.hpp"
#include "cqa/pipeline.hpp"

namespace cqa {

struct ScoredTriplet {
  Label gold = Label::invalid;
  double probability = 0.0;
};

// All candidate triplets of one prospective question.
struct QuestionGroup {
  std::string question_id;
  std::vector<ScoredTriplet> triplets;

  bool has_valid() const;
};

// Correct = a gold-valid triplet scores >= threshold, or, for a question with
// no gold-valid triplet, every triplet scores below it.
bool group_correct(const QuestionGroup& group, double threshold);
double overall_accuracy(std::span<const QuestionGroup> groups, double threshold);

// Mean reciprocal rank of the best-ranked gold-valid triplet. Every group must
// contain one; throws std::invalid_argument otherwise.
double mrr(std::span<const QuestionGroup> groups);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Prf prf(std::span<const Label> pred, std::span<const Label> gold);

// F1-maximizing cutoff over {0, midpoints of consecutive distinct scores, 1};
// ties go to the smallest threshold.
double select_threshold(std::span<const double> probs, std::span<const Label> gold);

// Seeded partition of [0, group_count) into k folds whose sizes differ by at
// most one. Throws TrainingError when group_count < k or k < 2.
std::vector<std::vector<std::size_t>> kfold(std::size_t group_count, std::size_t k, std::uint64_t seed);

struct Metrics {
  double overall_accuracy = 0.0;
  double mrr = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

enum class TrainingMode : std::uint8_t { supervised, em };

std::string_view to_string(TrainingMode mode);

struct CrossValidationConfig {
  ClassifierKind kind = ClassifierKind::nnet_l2;
  TrainingMode mode = TrainingMode::supervised;
  Hyperparameters hyper;
  EmOptions em;
  std::size_t folds = 10;
  std::size_t runs = 1;
  std::uint64_t seed = 42;
  Execution execution = Execution::parallel;
};

struct FoldMetrics {
  std::size_t run = 0;
  std::size_t fold = 0;
  Metrics metrics;
};

struct MetricReport {
  ClassifierKind kind = ClassifierKind::nnet_l2;
  TrainingMode mode = TrainingMode::supervised;
  std::size_t iterations = 0;
  Metrics mean;
  Metrics stddev;
  std::vector<Metrics> per_run;
  std::vector<FoldMetrics> per_fold;
};

/// k-fold cross-validation over question groups, repeated `runs` times with
/// derived seeds. Each fold trains on the other folds (plus every unlabeled
/// row in EM mode), picks its threshold on its own training rows, and scores
/// the held-out groups. A run's metrics pool all held-out predictions.
/// (run, fold) jobs are independent and run in parallel when requested.
MetricReport cross_validate(std::span<const FeatureRow> labeled, std::span<const FeatureVector> unlabeled,
                            const CrossValidationConfig& config);

struct TTest {
  double t = 0.0;
  double critical = 0.0;
  std::size_t df = 0;
  bool significant = false;
};

// Paired two-sided t-test. Throws std::invalid_argument on length < 2,
// mismatch, or zero-variance differences ("degenerate comparison").
TTest paired_ttest(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

// Two-sided Student-t critical value for `df` degrees of freedom.
double t_critical(std::size_t df, double alpha);

std::string report_json(std::span<const MetricReport> reports);
// Rows are metrics, columns are (classifier, mode) pairs.
std::string report_table(std::span<const MetricReport> reports);

}  // namespace cqa
