#include <doctest.h>

#include <set>

#include "cqa/error.hpp"
#include "cqa/learn.hpp"
#include "cqa/pipeline.hpp"
#include "fixtures.hpp"

using namespace cqa;

namespace {

// LOG model whose probability falls with the DTW distance to the archive
// question.
RankModel closeness_model() {
  RankModel m;
  m.kind = ClassifierKind::log;
  m.parameters.assign(kFeatureCount + 1, 0.0);
  m.parameters[static_cast<std::size_t>(Feature::dtw_qp_qt)] = -1.0;
  m.parameters[kFeatureCount] = 2.0;
  m.standardization.scale.fill(1.0);
  m.threshold = 0.5;
  return m;
}

}  // namespace

TEST_CASE("index buckets only resolved threads") {
  const auto index = fixture::small_index();
  CHECK(index.threads.size() == 4);
  CHECK(index.bucket(QuestionClass::yes_no).size() == 2);
  CHECK(index.bucket(QuestionClass::why).size() == 1);
  CHECK_FALSE(index.threads[*index.find_thread("d")].in_archive());
  CHECK(index.model(QuestionClass::yes_no).has_value());
  CHECK_FALSE(index.model(QuestionClass::who).has_value());
  // Second answer by likes among the non-best.
  CHECK(index.threads[*index.find_thread("b")].second->answer.text == "try a support group");
}

TEST_CASE("no resolvable threads") {
  const std::vector<QAThread> corpus{fixture::thread("x", "is it ok?", {{"maybe", 0, false}})};
  CHECK_THROWS_WITH_AS(build_index(corpus, fixture::lexicon(), fixture::triggers()), "no resolvable threads",
                       InputError);
}

TEST_CASE("two archive questions with two answers give eight candidates") {
  const auto index = fixture::small_index();
  const auto found = extract_candidates(fixture::ask(index, "is librium safe for insomnia?"), index);
  REQUIRE(found.size() == 8);
  for (std::size_t i = 0; i < 4; ++i) CHECK(found[i].distance.measure == Measure::dtw);
  for (std::size_t i = 4; i < 8; ++i) CHECK(found[i].distance.measure == Measure::vs);
  for (std::size_t i = 1; i < 4; ++i) CHECK(found[i - 1].distance.value <= found[i].distance.value);
  // Each archive question contributes its best then its second answer.
  CHECK(found[0].answer_rank == 1);
  CHECK(found[1].answer_rank == 2);
  CHECK(found[0].archive == found[1].archive);
}

TEST_CASE("concept weighting pulls drug-sharing questions closer") {
  const auto index = fixture::small_index();
  const auto qp = fixture::ask(index, "is librium safe for insomnia?");
  const auto weighted = extract_candidates(qp, index, {.weight = 0.5});
  const auto plain = extract_candidates(qp, index, {.weight = 1.0});
  const auto a = *index.find_thread("a");
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    if (weighted[i].archive.thread != a) continue;
    for (const auto& p : plain) {
      if (p.archive == weighted[i].archive && p.distance.measure == weighted[i].distance.measure) {
        CHECK(weighted[i].distance.value == doctest::Approx(0.5 * p.distance.value));
      }
    }
  }
}

TEST_CASE("a question never retrieves its own thread") {
  const auto index = fixture::small_index();
  const auto& own = index.threads[*index.find_thread("a")].questions.front();
  for (const auto& t : extract_candidates(own, index)) CHECK(index.threads[t.archive.thread].id != "a");
}

TEST_CASE("empty bucket gives no candidates") {
  const auto index = fixture::small_index();
  CHECK(extract_candidates(fixture::ask(index, "who should i call?"), index).empty());
}

TEST_CASE("answer ranks the matching archive answer first") {
  const auto index = fixture::small_index();
  const auto model = closeness_model();
  const auto result = answer("is librium good for anxiety?", "", index, model, fixture::stops());
  REQUIRE_FALSE(result.no_valid_answer());
  CHECK(result.answers.front().thread_id == "a");
  CHECK(result.answers.front().answer_rank == 1);
  CHECK(result.answers.front().text == "librium helped my anxiety a lot");
  for (const auto& a : result.answers) CHECK(a.probability <= result.answers.front().probability);

  CHECK(answer("who should i call?", "", index, model, fixture::stops()).no_valid_answer());
  CHECK_THROWS_WITH_AS(answer("", "  ", index, model, fixture::stops()), "empty question", InputError);
}

TEST_CASE("labeled triplets resolve against the index") {
  const auto index = fixture::small_index();
  const auto t = make_labeled_triplet({"d", "a", 2, Label::valid}, index);
  CHECK(t.label == Label::valid);
  CHECK(index.answer(t.archive, t.answer_rank).answer.text == "ask your doctor first");
  CHECK(key_of(t, index) == TripletKey{"d", 0, "a", 0, 2});

  CHECK_THROWS_WITH_AS(make_labeled_triplet({"d", "zz", 1, Label::valid}, index), doctest::Contains("zz"),
                       TrainingError);
  CHECK_THROWS_WITH_AS(make_labeled_triplet({"qq", "a", 1, Label::valid}, index), doctest::Contains("qq"),
                       TrainingError);
  CHECK_THROWS_AS(make_labeled_triplet({"d", "c", 2, Label::valid}, index), TrainingError);  // no second answer
}

TEST_CASE("candidate pool has unique keys") {
  const auto index = fixture::small_index();
  const auto pool = candidate_pool(index);
  std::set<TripletKey> keys;
  for (const auto& t : pool) CHECK(keys.insert(key_of(t, index)).second);
  CHECK_FALSE(pool.empty());
  CHECK(candidate_json(pool.front(), index).find("\"measure\"") != std::string::npos);
}
