#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cqa/corpus.hpp"
#include "cqa/features.hpp"

namespace cqa {

enum class ClassifierKind : std::uint8_t { log, nnet, nnet_l2, svm };

std::string_view to_string(ClassifierKind kind);  // "LOG", "NNET", "NNET_L2", "SVM"
std::optional<ClassifierKind> parse_classifier(std::string_view name);  // case-insensitive

using FeatureMask = std::bitset<kFeatureCount>;

struct Hyperparameters {
  double learning_rate = 0.1;
  double lr_decay = 0.0;  // rate at epoch e: learning_rate / (1 + lr_decay * e)
  std::size_t epochs = 200;
  std::size_t batch_size = 32;  // 0 = full batch
  double l2 = 1e-3;             // on weights only, never biases
  std::size_t hidden = 8;       // NNET / NNET_L2 hidden width
  double tolerance = 0.0;       // stop once the full-data gradient norm drops below
  FeatureMask mask = FeatureMask{}.set();

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

/// Per-feature z-scoring learned from labeled training rows. Zero-variance
/// columns get scale 1. Columns outside the mask are zeroed, which is the
/// same as dropping them.
struct Standardization {
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> scale{};

  static Standardization fit(std::span<const FeatureVector> rows);
  std::array<double, kFeatureCount> apply(const FeatureVector& x, const FeatureMask& mask) const;

  friend bool operator==(const Standardization&, const Standardization&) = default;
};

struct LabeledRow {
  FeatureVector x;
  Label y = Label::invalid;
};

struct LabeledSet {
  std::vector<LabeledRow> rows;
  Standardization standardization;

  // Computes the standardization from `rows`.
  static LabeledSet from_rows(std::vector<LabeledRow> rows);

  std::size_t positives() const;
};

struct Calibration {
  double a = 1.0;
  double b = 0.0;

  friend bool operator==(const Calibration&, const Calibration&) = default;
};

class RankModel {
 public:
  ClassifierKind kind = ClassifierKind::log;
  std::vector<double> parameters;
  std::optional<Calibration> calibration;
  double threshold = 0.5;
  std::uint64_t seed = 0;
  Standardization standardization;
  Hyperparameters hyper;

  // Raw score before the output sigmoid (SVM: the margin).
  double decision(const FeatureVector& x) const;
  double predict_proba(const FeatureVector& x) const;
  Label predict(const FeatureVector& x) const { return predict_proba(x) >= threshold ? Label::valid : Label::invalid; }

  friend bool operator==(const RankModel&, const RankModel&) = default;
};

// Number of trainable parameters for the kind (d inputs, h hidden units).
std::size_t parameter_count(ClassifierKind kind, std::size_t inputs, std::size_t hidden);

/// Dense standardized design matrix with 0/1 targets.
struct Batch {
  std::vector<double> x;  // row-major, rows * cols
  std::vector<double> y;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const double> row(std::size_t i) const { return {x.data() + i * cols, cols}; }
};

namespace objectives {

/// Mean loss over the batch plus (l2 / 2) * ||weights||^2; writes the
/// gradient into `grad` (sized like `params`).
///
/// LOG: cross-entropy of sigmoid(w.x + b).
/// NNET: one sigmoid hidden layer, cross-entropy output.
/// NNET_L2: same network, squared error (p - y)^2 against 0/1 targets.
/// SVM: hinge max(0, 1 - s * (w.x + b)) with s = +-1.
double loss_and_gradient(ClassifierKind kind, std::size_t hidden, std::span<const double> params, const Batch& batch,
                         double l2, std::span<double> grad);

// Pre-sigmoid output (the margin for SVM).
double score(ClassifierKind kind, std::size_t hidden, std::span<const double> params, std::span<const double> x);

// Forward pass: sigmoid output for LOG/NNET/NNET_L2, the margin for SVM.
double forward(ClassifierKind kind, std::size_t hidden, std::span<const double> params, std::span<const double> x);

/// Mean negative log-likelihood of labels under sigmoid(a * d + b).
double calibration_nll(double a, double b, std::span<const double> decisions, std::span<const double> targets,
                       double* grad_a, double* grad_b);

}  // namespace objectives

// Throws TrainingError("degenerate training set") unless both labels occur.
RankModel train_supervised(const LabeledSet& data, ClassifierKind kind, const Hyperparameters& hyper,
                           std::uint64_t seed);

struct EmOptions {
  std::size_t iterations = 1;
  std::optional<std::size_t> subset_size;  // default: the whole unlabeled pool
};

/// Self-training EM: fit on labeled rows, then repeatedly hard-label the
/// unlabeled pool at the current threshold, draw a fresh uniform subset, and
/// refit on labeled rows plus the estimated rows. Every refit uses the same
/// training seed; subsets come from a separate derived stream.
RankModel train_em(const LabeledSet& labeled, std::span<const FeatureVector> unlabeled, ClassifierKind kind,
                   const Hyperparameters& hyper, const EmOptions& em, std::uint64_t seed);

// Maximum-likelihood sigmoid over decision values. Throws TrainingError on a
// single-class label set.
Calibration fit_calibration(std::span<const double> decisions, std::span<const Label> labels);

void write_model(std::ostream& out, const RankModel& model);
RankModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const RankModel& model);
RankModel load_model(const std::filesystem::path& path);

}  // namespace cqa
