#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "cqa/features.hpp"
#include "cqa/random.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "table1.hpp"

using namespace cqa;

namespace {

std::vector<Label> labels_of(std::initializer_list<int> v) {
  std::vector<Label> out;
  for (int x : v) out.push_back(x ? Label::valid : Label::invalid);
  return out;
}

struct Table1 {
  ConceptLexicon lex = ConceptLexicon::load(CQA_TEST_DATA "/table1_lexicon.tsv");
  TokenSeq qp = tokenize(table1::kQp);
  TokenSeq qt = tokenize(table1::kQt);
  TokenSeq at = tokenize(table1::kAt);
  ConceptSet sp = recognize(qp, lex);
  ConceptSet st = recognize(qt, lex);
  ConceptSet sa = recognize(at, lex);
  VectorSpaceModel model = VectorSpaceModel::fit(std::vector<TokenSeq>{qp, qt});

  FeatureVector features() const { return compute_features({qp, qt, at, sp, st, sa, model, fixture::stops()}); }
};

}  // namespace

TEST_CASE("worked example features") {
  const Table1 ex;
  const auto f = ex.features();
  CHECK(f[Feature::len_qp] == 5);
  CHECK(f[Feature::len_qt] == 12);
  CHECK(f[Feature::stops_qp] == 1);
  CHECK(f[Feature::stops_qt] == 5);
  CHECK(f[Feature::dtw_qp_qt] == 78);
  CHECK(f[Feature::overlap_sp_st] == 3);
  CHECK(f[Feature::overlap_sp_sa] == 3);
  CHECK(f[Feature::overlap_sets_differ] == 0);
  CHECK(f[Feature::setdiff_sp_st] == 4);
  CHECK(f[Feature::setdiff_sp_sa] == 5);
  CHECK(feature_name(0) == "f1");
  CHECK(feature_name(12) == "f13");
}

TEST_CASE("identical question and own answer zero the distance features") {
  const Table1 ex;
  const auto f = compute_features({ex.qt, ex.qt, ex.at, ex.st, ex.st, ex.sa, ex.model, fixture::stops()});
  CHECK(f[Feature::vs_qp_qt] == 0);
  CHECK(f[Feature::vs_diff] == 0);
  CHECK(f[Feature::dtw_qp_qt] == 0);
  CHECK(f[Feature::dtw_diff] == 0);
}

TEST_CASE("lexicon growth never lowers overlap counts") {
  Table1 ex;
  const auto before = ex.features();
  ex.lex.add("associated", {"functional concept"});
  ex.lex.add("medication", {"pharmacologic substance"}, "pharmaceutical preparation");
  ex.sp = recognize(ex.qp, ex.lex);
  ex.st = recognize(ex.qt, ex.lex);
  ex.sa = recognize(ex.at, ex.lex);
  const auto after = ex.features();
  CHECK(after[Feature::overlap_sp_st] >= before[Feature::overlap_sp_st]);
  CHECK(after[Feature::overlap_sp_sa] >= before[Feature::overlap_sp_sa]);
}

TEST_CASE("information gain examples") {
  const std::vector<double> perfect{1, 1, 0, 0};
  CHECK(information_gain(perfect, labels_of({1, 1, 0, 0})) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> constant{3, 3, 3, 3};
  CHECK(information_gain(constant, labels_of({1, 0, 1, 0})) == 0.0);
  const std::vector<double> split{1, 1, 1, 0};
  CHECK(information_gain(split, labels_of({1, 1, 0, 0})) == doctest::Approx(0.3113).epsilon(1e-4));
  CHECK(information_gain(split, labels_of({1, 1, 1, 0})) == doctest::Approx(0.8113).epsilon(1e-4));
  CHECK(entropy_bits(1, 4) == doctest::Approx(0.8113).epsilon(1e-4));
  CHECK_THROWS_AS(information_gain(split, labels_of({1, 0})), std::invalid_argument);
}

TEST_CASE("information gain properties") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 5 + rng.index(40);
    std::vector<double> x(n);
    std::vector<Label> y(n);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = trial % 2 ? std::round(rng.uniform(0, 4)) : rng.normal();
      y[i] = rng.uniform() < 0.3 ? Label::valid : Label::invalid;
      pos += y[i] == Label::valid;
    }
    const double g = information_gain(x, y);
    CHECK(g >= 0.0);
    CHECK(g <= entropy_bits(pos, n) + 1e-12);
    CHECK(g == doctest::Approx(oracle::mutual_information(oracle::bin_column(x, 10), y)).epsilon(1e-9));

    // Joint permutation leaves the gain unchanged.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<double> px(n);
    std::vector<Label> py(n);
    for (std::size_t i = 0; i < n; ++i) {
      px[i] = x[order[i]];
      py[i] = y[order[i]];
    }
    CHECK(information_gain(px, py) == doctest::Approx(g).epsilon(1e-12));
  }
}

TEST_CASE("equal-frequency bins keep ties together") {
  const std::vector<double> v{5, 1, 2, 2, 2, 3, 4, 6, 7, 8, 9, 10};
  const auto b = equal_frequency_bins(v, 4);
  CHECK(b[2] == b[3]);
  CHECK(b[3] == b[4]);
  CHECK(b[1] <= b[2]);
  CHECK(b.back() == 3);
}

TEST_CASE("rank_features orders by gain") {
  std::vector<FeatureVector> rows(8);
  std::vector<Label> y;
  for (std::size_t i = 0; i < 8; ++i) {
    y.push_back(i < 4 ? Label::valid : Label::invalid);
    rows[i][Feature::overlap_sp_sa] = i < 4 ? 1 : 0;  // perfect
    rows[i][Feature::len_qp] = i % 2;                 // useless
  }
  const auto ranked = rank_features(rows, y);
  REQUIRE(ranked.size() == kFeatureCount);
  CHECK(ranked.front().feature == static_cast<std::size_t>(Feature::overlap_sp_sa));
  CHECK(ranked.front().gain == doctest::Approx(1.0));
  for (std::size_t i = 1; i < ranked.size(); ++i) CHECK(ranked[i - 1].gain >= ranked[i].gain);
}

TEST_CASE("feature csv round-trips") {
  std::vector<FeatureRow> rows(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) rows[i].x[f] = 0.1 * static_cast<double>(i * 13 + f) + 1e-17;
  }
  rows[0].label = Label::valid;
  rows[0].group = "q,1";
  rows[1].label = Label::invalid;
  rows[1].group = "q2";
  std::stringstream buf;
  write_feature_csv(buf, rows);
  CHECK(buf.str().rfind("f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11,f12,f13,label,qp_id\n", 0) == 0);
  CHECK(read_feature_csv(buf) == rows);
}
