#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cqa/random.hpp"
#include "cqa/similarity.hpp"
#include "oracles.hpp"
#include "table1.hpp"

using namespace cqa;

namespace {

TokenSeq words(std::initializer_list<const char*> w) {
  TokenSeq s;
  for (const char* x : w) s.tokens.emplace_back(x);
  return s;
}

TokenSeq random_seq(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> vocab{"a", "ab", "abc", "b", "ba", "cab", "dab", "bad"};
  TokenSeq s;
  const auto len = 1 + rng.index(max_len);
  for (std::size_t i = 0; i < len; ++i) s.tokens.push_back(vocab[rng.index(vocab.size())]);
  return s;
}

}  // namespace

TEST_CASE("dtw examples") {
  CHECK(dtw_distance(words({"cat", "sat"}), words({"cat", "mat"})) == 1.0);
  CHECK(dtw_distance(words({"a"}), words({"a", "a", "a"})) == 0.0);
  CHECK_THROWS_WITH_AS(dtw_distance(TokenSeq{}, words({"a"})), "undefined DTW on empty sequence",
                       std::invalid_argument);
  // Literal recurrence on the worked example (see the decisions ledger).
  CHECK(dtw_distance(tokenize(table1::kQp), tokenize(table1::kQt)) == 78.0);
}

TEST_CASE("dtw matches path enumeration") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_seq(rng, 5);
    const auto b = random_seq(rng, 5);
    const double d = dtw_distance(a, b);
    CHECK(d == oracle::dtw_enumerate(a, b));
    CHECK(d == dtw_distance(b, a));
    CHECK(dtw_distance(a, a) == 0.0);
  }
}

TEST_CASE("tf-idf space") {
  const std::vector<TokenSeq> docs{words({"x", "y"}), words({"y"})};
  const auto m = VectorSpaceModel::fit(docs);
  CHECK(m.document_count() == 2);
  CHECK(m.idf("x") == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(m.idf("y") == 0.0);
  // "x" once vs nothing: ln 2.
  CHECK(vs_distance(m, words({"x"}), words({"zzz"})) == doctest::Approx(0.6931).epsilon(1e-4));
  // Twice vs once, raw counts.
  CHECK(vs_distance(m, words({"x", "x"}), words({"x"})) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(VectorSpaceModel::fit(std::span<const TokenSeq>{}), std::invalid_argument);

  const std::vector<TokenSeq> two{words({"x"}), words({"y"})};
  CHECK(vs_distance(VectorSpaceModel::fit(two), words({"x"}), words({"y"})) == doctest::Approx(0.9803).epsilon(1e-4));
  const std::vector<TokenSeq> one{words({"x", "y"})};
  CHECK(VectorSpaceModel::fit(one).idf("x") == 0.0);

  const std::vector<TokenSeq> three{words({"p"}), words({"q"}), words({"p", "q"})};
  const auto m3 = VectorSpaceModel::fit(three);
  // p and q each have idf ln(3/2).
  CHECK(vs_distance(m3, words({"p"}), words({"q"})) ==
        doctest::Approx(std::sqrt(2.0) * std::log(1.5)).epsilon(1e-12));
}

TEST_CASE("vs distance is a metric on model vectors") {
  Rng rng(8);
  std::vector<TokenSeq> docs;
  for (int i = 0; i < 20; ++i) docs.push_back(random_seq(rng, 6));
  const auto m = VectorSpaceModel::fit(docs);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_seq(rng, 6);
    const auto b = random_seq(rng, 6);
    const auto c = random_seq(rng, 6);
    const double ab = vs_distance(m, a, b);
    CHECK(ab >= 0.0);
    CHECK(ab == doctest::Approx(vs_distance(m, b, a)));
    CHECK(vs_distance(m, a, a) == 0.0);
    CHECK(vs_distance(m, a, c) <= ab + vs_distance(m, b, c) + 1e-12);
  }
}

TEST_CASE("concept weighting") {
  const Distance d{10.0, Measure::dtw};
  CHECK(apply_concept_weight(d, true, 0.5).value == 5.0);
  CHECK(apply_concept_weight(d, false, 0.5).value == 10.0);
  CHECK(apply_concept_weight(d, true, 1.0).value == 10.0);
  CHECK(apply_concept_weight(d, true, 0.5).measure == Measure::dtw);
  CHECK(apply_concept_weight({0.0, Measure::vs}, true, 0.5).value == 0.0);
  CHECK_THROWS_AS(apply_concept_weight(d, true, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(apply_concept_weight(d, true, 1.5), std::invalid_argument);
}
