#include "cqa/learn.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "cqa/error.hpp"
#include "cqa/eval.hpp"
#include "cqa/random.hpp"

namespace cqa {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

bool is_network(ClassifierKind kind) { return kind == ClassifierKind::nnet || kind == ClassifierKind::nnet_l2; }

constexpr double kThresholdFloor = 1e-9;

void validate(const Hyperparameters& h, ClassifierKind kind) {
  if (!(h.learning_rate > 0.0)) throw TrainingError("learning rate must be positive");
  if (h.lr_decay < 0.0) throw TrainingError("learning-rate decay must be non-negative");
  if (h.epochs == 0) throw TrainingError("epochs must be positive");
  if (h.l2 < 0.0) throw TrainingError("l2 must be non-negative");
  if (is_network(kind) && h.hidden == 0) throw TrainingError("hidden width must be positive");
}

Batch make_batch(std::span<const LabeledRow> rows, const Standardization& std_, const FeatureMask& mask) {
  Batch b;
  b.rows = rows.size();
  b.cols = kFeatureCount;
  b.x.reserve(rows.size() * kFeatureCount);
  b.y.reserve(rows.size());
  for (const auto& r : rows) {
    const auto z = std_.apply(r.x, mask);
    b.x.insert(b.x.end(), z.begin(), z.end());
    b.y.push_back(r.y == Label::valid ? 1.0 : 0.0);
  }
  return b;
}

std::vector<double> initial_parameters(ClassifierKind kind, std::size_t hidden, std::uint64_t seed) {
  const std::size_t d = kFeatureCount;
  std::vector<double> p(parameter_count(kind, d, hidden), 0.0);
  if (!is_network(kind)) return p;
  Rng rng(derive_seed(seed, 1));
  const double r1 = 1.0 / std::sqrt(static_cast<double>(d));
  const double r2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (std::size_t q = 0; q < hidden * d; ++q) p[q] = rng.uniform(-r1, r1);
  double* w2 = p.data() + hidden * d + hidden;
  for (std::size_t k = 0; k < hidden; ++k) w2[k] = rng.uniform(-r2, r2);
  return p;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> sgd(const Batch& data, ClassifierKind kind, const Hyperparameters& hyper, std::uint64_t seed) {
  std::vector<double> params = initial_parameters(kind, hyper.hidden, seed);
  std::vector<double> grad(params.size());
  Rng order_rng(derive_seed(seed, 2));

  const std::size_t n = data.rows;
  const bool full = hyper.batch_size == 0 || hyper.batch_size >= n;
  const std::size_t bs = full ? n : hyper.batch_size;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  Batch mini;
  mini.cols = data.cols;
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    const double lr = hyper.learning_rate / (1.0 + hyper.lr_decay * static_cast<double>(epoch));
    if (full) {
      objectives::loss_and_gradient(kind, hyper.hidden, params, data, hyper.l2, grad);
      if (hyper.tolerance > 0.0 && norm(grad) < hyper.tolerance) break;
      for (std::size_t q = 0; q < params.size(); ++q) params[q] -= lr * grad[q];
      continue;
    }
    order_rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += bs) {
      const std::size_t end = std::min(n, start + bs);
      mini.rows = end - start;
      mini.x.clear();
      mini.y.clear();
      for (std::size_t r = start; r < end; ++r) {
        const auto row = data.row(order[r]);
        mini.x.insert(mini.x.end(), row.begin(), row.end());
        mini.y.push_back(data.y[order[r]]);
      }
      objectives::loss_and_gradient(kind, hyper.hidden, params, mini, hyper.l2, grad);
      for (std::size_t q = 0; q < params.size(); ++q) params[q] -= lr * grad[q];
    }
    if (hyper.tolerance > 0.0) {
      objectives::loss_and_gradient(kind, hyper.hidden, params, data, hyper.l2, grad);
      if (norm(grad) < hyper.tolerance) break;
    }
  }
  return params;
}

// Fits parameters on `train`, then calibration (SVM) and the F1-maximizing
// threshold on `reference`, the labeled rows.
RankModel fit_model(std::span<const LabeledRow> train, std::span<const LabeledRow> reference,
                    const Standardization& standardization, ClassifierKind kind, const Hyperparameters& hyper,
                    std::uint64_t seed) {
  RankModel model;
  model.kind = kind;
  model.seed = seed;
  model.hyper = hyper;
  model.standardization = standardization;
  model.parameters = sgd(make_batch(train, standardization, hyper.mask), kind, hyper, seed);

  std::vector<Label> gold;
  gold.reserve(reference.size());
  for (const auto& r : reference) gold.push_back(r.y);
  if (kind == ClassifierKind::svm) {
    std::vector<double> decisions;
    decisions.reserve(reference.size());
    for (const auto& r : reference) decisions.push_back(model.decision(r.x));
    model.calibration = fit_calibration(decisions, gold);
  }
  std::vector<double> probs;
  probs.reserve(reference.size());
  for (const auto& r : reference) probs.push_back(model.predict_proba(r.x));
  model.threshold = std::clamp(select_threshold(probs, gold), kThresholdFloor, 1.0 - kThresholdFloor);
  return model;
}

void require_both_classes(const LabeledSet& data) {
  const std::size_t pos = data.positives();
  if (pos == 0 || pos == data.rows.size()) throw TrainingError("degenerate training set");
}

}  // namespace

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::log: return "LOG";
    case ClassifierKind::nnet: return "NNET";
    case ClassifierKind::nnet_l2: return "NNET_L2";
    case ClassifierKind::svm: return "SVM";
  }
  return "?";
}

std::optional<ClassifierKind> parse_classifier(std::string_view name) {
  std::string lowered = to_lower_ascii(name);
  if (lowered == "log") return ClassifierKind::log;
  if (lowered == "nnet") return ClassifierKind::nnet;
  if (lowered == "nnet_l2") return ClassifierKind::nnet_l2;
  if (lowered == "svm") return ClassifierKind::svm;
  return std::nullopt;
}

Standardization Standardization::fit(std::span<const FeatureVector> rows) {
  Standardization s;
  s.scale.fill(1.0);
  if (rows.empty()) return s;
  const auto n = static_cast<double>(rows.size());
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    double mean = 0.0;
    for (const auto& r : rows) mean += r[f];
    mean /= n;
    double var = 0.0;
    for (const auto& r : rows) var += (r[f] - mean) * (r[f] - mean);
    const double sd = std::sqrt(var / n);
    s.mean[f] = mean;
    s.scale[f] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

std::array<double, kFeatureCount> Standardization::apply(const FeatureVector& x, const FeatureMask& mask) const {
  std::array<double, kFeatureCount> z{};
  for (std::size_t f = 0; f < kFeatureCount; ++f) z[f] = mask[f] ? (x[f] - mean[f]) / scale[f] : 0.0;
  return z;
}

LabeledSet LabeledSet::from_rows(std::vector<LabeledRow> rows) {
  std::vector<FeatureVector> xs;
  xs.reserve(rows.size());
  for (const auto& r : rows) xs.push_back(r.x);
  LabeledSet set;
  set.standardization = Standardization::fit(xs);
  set.rows = std::move(rows);
  return set;
}

std::size_t LabeledSet::positives() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const LabeledRow& r) { return r.y == Label::valid; }));
}

double RankModel::decision(const FeatureVector& x) const {
  const auto z = standardization.apply(x, hyper.mask);
  return objectives::score(kind, hyper.hidden, parameters, z);
}

double RankModel::predict_proba(const FeatureVector& x) const {
  const double z = decision(x);
  if (kind == ClassifierKind::svm) {
    const Calibration c = calibration.value_or(Calibration{});
    return sigmoid(c.a * z + c.b);
  }
  return sigmoid(z);
}

RankModel train_supervised(const LabeledSet& data, ClassifierKind kind, const Hyperparameters& hyper,
                           std::uint64_t seed) {
  require_both_classes(data);
  validate(hyper, kind);
  return fit_model(data.rows, data.rows, data.standardization, kind, hyper, seed);
}

RankModel train_em(const LabeledSet& labeled, std::span<const FeatureVector> unlabeled, ClassifierKind kind,
                   const Hyperparameters& hyper, const EmOptions& em, std::uint64_t seed) {
  if (em.iterations == 0) throw TrainingError("EM needs at least one iteration");
  const std::size_t subset = em.subset_size.value_or(unlabeled.size());
  if (subset > unlabeled.size()) throw TrainingError("EM subset size exceeds the unlabeled pool");

  RankModel model = train_supervised(labeled, kind, hyper, seed);
  if (unlabeled.empty()) {
    std::clog << "note: empty unlabeled pool; EM reduces to supervised training\n";
    return model;
  }

  Rng sampler(derive_seed(seed, 0xE3));
  std::vector<LabeledRow> rows;
  for (std::size_t it = 0; it < em.iterations; ++it) {
    const auto picked = sampler.sample_without_replacement(unlabeled.size(), subset);
    rows.assign(labeled.rows.begin(), labeled.rows.end());
    rows.reserve(labeled.rows.size() + subset);
    for (const std::size_t i : picked) rows.push_back({unlabeled[i], model.predict(unlabeled[i])});
    model = fit_model(rows, labeled.rows, labeled.standardization, kind, hyper, seed);
  }
  return model;
}

Calibration fit_calibration(std::span<const double> decisions, std::span<const Label> labels) {
  if (decisions.size() != labels.size()) throw std::invalid_argument("decisions and labels differ in length");
  const std::size_t n = decisions.size();
  std::size_t pos = 0;
  for (const auto l : labels) pos += l == Label::valid ? 1 : 0;
  if (pos == 0 || pos == n) throw TrainingError("calibration needs both classes");

  // Optimize over standardized decisions for conditioning, then map back.
  double mean = 0.0;
  for (double d : decisions) mean += d;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double d : decisions) var += (d - mean) * (d - mean);
  const double sd = std::sqrt(var / static_cast<double>(n)) > 1e-12 ? std::sqrt(var / static_cast<double>(n)) : 1.0;

  std::vector<double> z(n);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = (decisions[i] - mean) / sd;
    t[i] = labels[i] == Label::valid ? 1.0 : 0.0;
  }

  const double base = static_cast<double>(pos) / static_cast<double>(n);
  double a = 0.0;
  double b = std::log(base / (1.0 - base));
  double ga = 0.0;
  double gb = 0.0;
  double f = objectives::calibration_nll(a, b, z, t, &ga, &gb);
  for (int step = 0; step < 10000; ++step) {
    const double gnorm2 = ga * ga + gb * gb;
    if (std::sqrt(gnorm2) < 1e-8) break;
    double eta = 1.0;
    double na = 0.0;
    double nb = 0.0;
    double nf = 0.0;
    double nga = 0.0;
    double ngb = 0.0;
    while (true) {
      na = a - eta * ga;
      nb = b - eta * gb;
      nf = objectives::calibration_nll(na, nb, z, t, &nga, &ngb);
      if (nf <= f - 0.5 * eta * gnorm2 || eta < 1e-12) break;
      eta *= 0.5;
    }
    if (nf > f) break;
    a = na;
    b = nb;
    f = nf;
    ga = nga;
    gb = ngb;
  }
  return {a / sd, b - a * mean / sd};
}

}  // namespace cqa
