#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cqa/error.hpp"
#include "cqa/learn.hpp"
#include "cqa/random.hpp"
#include "oracles.hpp"

using namespace cqa;

namespace {

constexpr ClassifierKind kKinds[] = {ClassifierKind::log, ClassifierKind::nnet, ClassifierKind::nnet_l2,
                                     ClassifierKind::svm};

// Valid rows sit at +shift on f1, invalid at -shift; other features are noise.
std::vector<LabeledRow> toy(std::size_t n, double shift, std::uint64_t seed, double valid_rate = 0.5) {
  Rng rng(seed);
  std::vector<LabeledRow> rows(n);
  for (auto& r : rows) {
    r.y = rng.uniform() < valid_rate ? Label::valid : Label::invalid;
    for (std::size_t f = 0; f < kFeatureCount; ++f) r.x[f] = rng.normal();
    r.x[0] += r.y == Label::valid ? shift : -shift;
  }
  rows[0].y = Label::valid;
  rows[1].y = Label::invalid;
  return rows;
}

std::vector<std::size_t> argsort(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return idx;
}

}  // namespace

TEST_CASE("classifier names") {
  for (auto k : kKinds) CHECK(parse_classifier(to_string(k)) == k);
  CHECK(parse_classifier("nnet_L2") == ClassifierKind::nnet_l2);
  CHECK_FALSE(parse_classifier("tree"));
  CHECK(parameter_count(ClassifierKind::log, 13, 8) == 14);
  CHECK(parameter_count(ClassifierKind::nnet, 13, 8) == 8 * 13 + 8 + 8 + 1);
}

TEST_CASE("zero LOG model is indifferent") {
  RankModel m;
  m.kind = ClassifierKind::log;
  m.parameters.assign(kFeatureCount + 1, 0.0);
  m.standardization.scale.fill(1.0);
  FeatureVector x;
  x[3] = 42;
  CHECK(m.predict_proba(x) == 0.5);
}

TEST_CASE("separable toy set") {
  const auto set = LabeledSet::from_rows(toy(200, 6.0, 1));
  Hyperparameters h;
  h.epochs = 300;
  for (auto kind : kKinds) {
    CAPTURE(to_string(kind));
    const auto m = train_supervised(set, kind, h, 7);
    std::size_t correct = 0;
    for (const auto& r : set.rows) correct += m.predict(r.x) == r.y;
    if (kind == ClassifierKind::log) CHECK(correct == set.rows.size());
    CHECK(correct >= set.rows.size() * 98 / 100);
    FeatureVector deep;
    deep[0] = 12.0;
    CHECK(m.predict_proba(deep) > 0.9);
  }
}

TEST_CASE("random labels give the majority rate") {
  auto rows = toy(4000, 0.0, 2, 0.3);
  const std::vector<LabeledRow> train(rows.begin(), rows.begin() + 2000);
  const std::vector<LabeledRow> test(rows.begin() + 2000, rows.end());
  const auto m = train_supervised(LabeledSet::from_rows(train), ClassifierKind::log, {}, 5);
  std::size_t correct = 0;
  std::size_t negatives = 0;
  for (const auto& r : test) {
    correct += (m.predict_proba(r.x) >= 0.5 ? Label::valid : Label::invalid) == r.y;
    negatives += r.y == Label::invalid;
  }
  const double acc = static_cast<double>(correct) / static_cast<double>(test.size());
  const double majority = static_cast<double>(negatives) / static_cast<double>(test.size());
  CHECK(std::abs(acc - majority) <= 0.05);
}

TEST_CASE("duplicating the data leaves LOG unchanged") {
  const auto rows = toy(60, 1.0, 3);
  auto doubled = rows;
  doubled.insert(doubled.end(), rows.begin(), rows.end());
  Hyperparameters h;
  h.batch_size = 0;
  h.epochs = 20000;
  h.learning_rate = 0.5;
  h.tolerance = 1e-10;
  const auto a = train_supervised(LabeledSet::from_rows(rows), ClassifierKind::log, h, 1);
  const auto b = train_supervised(LabeledSet::from_rows(doubled), ClassifierKind::log, h, 1);
  for (std::size_t i = 0; i < a.parameters.size(); ++i) CHECK(a.parameters[i] == doctest::Approx(b.parameters[i]).epsilon(1e-6));
}

TEST_CASE("training is deterministic and probabilities are bounded") {
  const auto set = LabeledSet::from_rows(toy(120, 1.0, 4));
  Rng rng(9);
  for (auto kind : kKinds) {
    const auto a = train_supervised(set, kind, {}, 11);
    const auto b = train_supervised(set, kind, {}, 11);
    CHECK(a == b);
    CHECK(a.threshold > 0.0);
    CHECK(a.threshold < 1.0);
    for (int i = 0; i < 200; ++i) {
      FeatureVector x;
      for (std::size_t f = 0; f < kFeatureCount; ++f) x[f] = 50.0 * rng.normal();
      const double p = a.predict_proba(x);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("degenerate training set") {
  auto rows = toy(10, 1.0, 5);
  for (auto& r : rows) r.y = Label::invalid;
  CHECK_THROWS_WITH_AS(train_supervised(LabeledSet::from_rows(rows), ClassifierKind::log, {}, 1),
                       "degenerate training set", TrainingError);
}

TEST_CASE("SVM probabilities are monotone in the decision value") {
  const auto set = LabeledSet::from_rows(toy(150, 1.0, 6));
  const auto m = train_supervised(set, ClassifierKind::svm, {}, 2);
  REQUIRE(m.calibration);
  std::vector<std::pair<double, double>> dp;
  for (const auto& r : set.rows) dp.emplace_back(m.decision(r.x), m.predict_proba(r.x));
  std::sort(dp.begin(), dp.end());
  for (std::size_t i = 1; i < dp.size(); ++i) CHECK(dp[i - 1].second <= dp[i].second);
}

TEST_CASE("calibration fits") {
  std::vector<double> d;
  std::vector<Label> y;
  for (int i = 0; i < 20; ++i) {
    d.push_back(i < 10 ? -1.0 - 0.1 * i : 1.0 + 0.1 * i);
    y.push_back(i < 10 ? Label::invalid : Label::valid);
  }
  auto c = fit_calibration(d, y);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double p = 1.0 / (1.0 + std::exp(-(c.a * d[i] + c.b)));
    if (y[i] == Label::valid) CHECK(p >= 0.9);
    else CHECK(p <= 0.1);
  }

  // Symmetric decisions with opposite labels.
  const std::vector<double> sym{-2, -1, 1, 2, -2, 1};
  const auto ys = std::vector<Label>{Label::invalid, Label::valid, Label::invalid, Label::valid, Label::valid,
                                     Label::invalid};
  // Mirror every point so the data are exactly symmetric under d -> -d, y -> 1-y.
  std::vector<double> sd;
  std::vector<Label> sy;
  for (std::size_t i = 0; i < sym.size(); ++i) {
    sd.push_back(sym[i]);
    sy.push_back(ys[i]);
    sd.push_back(-sym[i]);
    sy.push_back(ys[i] == Label::valid ? Label::invalid : Label::valid);
  }
  CHECK(std::abs(fit_calibration(sd, sy).b) < 1e-6);

  // Labels independent of decisions: slope near 0, output near the base rate.
  Rng rng(12);
  std::vector<double> nd;
  std::vector<Label> ny;
  std::size_t pos = 0;
  for (int i = 0; i < 5000; ++i) {
    nd.push_back(rng.normal());
    ny.push_back(rng.uniform() < 0.25 ? Label::valid : Label::invalid);
    pos += ny.back() == Label::valid;
  }
  c = fit_calibration(nd, ny);
  CHECK(std::abs(c.a) < 0.1);
  CHECK(1.0 / (1.0 + std::exp(-c.b)) == doctest::Approx(static_cast<double>(pos) / 5000.0).epsilon(0.02));

  CHECK_THROWS_AS(fit_calibration(nd, std::vector<Label>(nd.size(), Label::valid)), TrainingError);
}

TEST_CASE("LOG ranking is invariant to affine column rescaling") {
  auto rows = toy(150, 1.0, 13);
  auto scaled = rows;
  for (auto& r : scaled) r.x[0] = 3.0 * r.x[0] + 7.0;
  Hyperparameters h;
  h.batch_size = 0;
  const auto a = train_supervised(LabeledSet::from_rows(rows), ClassifierKind::log, h, 1);
  const auto b = train_supervised(LabeledSet::from_rows(scaled), ClassifierKind::log, h, 1);
  std::vector<double> pa, pb;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    pa.push_back(a.predict_proba(rows[i].x));
    pb.push_back(b.predict_proba(scaled[i].x));
  }
  CHECK(argsort(pa) == argsort(pb));
}

TEST_CASE("EM degenerate cases") {
  const auto set = LabeledSet::from_rows(toy(60, 1.0, 14));
  std::vector<FeatureVector> pool;
  for (const auto& r : toy(300, 1.0, 15)) pool.push_back(r.x);
  const auto sup = train_supervised(set, ClassifierKind::nnet_l2, {}, 3);
  CHECK(train_em(set, pool, ClassifierKind::nnet_l2, {}, {1, 0}, 3) == sup);
  CHECK(train_em(set, {}, ClassifierKind::nnet_l2, {}, {1, std::nullopt}, 3) == sup);
  CHECK_THROWS_AS(train_em(set, pool, ClassifierKind::nnet_l2, {}, {1, 301}, 3), TrainingError);

  const auto em = train_em(set, pool, ClassifierKind::nnet_l2, {}, {3, 100}, 3);
  CHECK(em == train_em(set, pool, ClassifierKind::nnet_l2, {}, {3, 100}, 3));
  CHECK_FALSE(em == sup);
}

TEST_CASE("model files round-trip exactly") {
  const auto set = LabeledSet::from_rows(toy(80, 1.0, 16));
  for (auto kind : kKinds) {
    Hyperparameters h;
    h.mask.reset(4);
    const auto m = train_supervised(set, kind, h, 21);
    std::stringstream buf;
    write_model(buf, m);
    CHECK(read_model(buf) == m);
  }
  std::stringstream bad("{\"format\":\"cqa-model\",\"version\":2}");
  CHECK_THROWS_AS(read_model(bad), InputError);
}

TEST_CASE("analytic gradients match finite differences") {
  Rng rng(17);
  for (auto kind : kKinds) {
    CAPTURE(to_string(kind));
    const std::size_t hidden = 4;
    Batch b;
    b.rows = 12;
    b.cols = kFeatureCount;
    for (std::size_t i = 0; i < b.rows * b.cols; ++i) b.x.push_back(rng.normal());
    for (std::size_t i = 0; i < b.rows; ++i) b.y.push_back(static_cast<double>(i % 2));
    std::vector<double> p(parameter_count(kind, kFeatureCount, hidden));
    for (auto& v : p) v = rng.normal() * 0.5;
    std::vector<double> g(p.size());
    objectives::loss_and_gradient(kind, hidden, p, b, 0.01, g);
    std::vector<double> scratch(p.size());
    const auto numeric = oracle::numeric_gradient(
        [&](std::span<const double> q) { return objectives::loss_and_gradient(kind, hidden, q, b, 0.01, scratch); },
        p);
    CHECK(oracle::relative_error(g, numeric) < 1e-5);
  }
}
