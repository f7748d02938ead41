#include <doctest.h>

#include "cqa/kernels.hpp"
#include "cqa/learn.hpp"
#include "cqa/synthetic.hpp"
#include "fixtures.hpp"

using namespace cqa;

namespace {

struct Setup {
  synthetic::DrugCorpus corpus = synthetic::make_drug_corpus(80, 17);
  CandidateIndex index = build_index(corpus.threads, corpus.lexicon, fixture::triggers());
};

const Setup& setup() {
  static const Setup s;
  return s;
}

}  // namespace

TEST_CASE("distance rows agree across execution modes") {
  const auto& index = setup().index;
  std::vector<const TokenSeq*> targets;
  std::vector<TokenSeq> owned;
  for (const auto& t : index.threads) targets.push_back(&t.questions.front().question.tokens);
  const auto& query = index.threads.front().questions.front().question.tokens;
  CHECK(kernels::serial::dtw_row(query, targets) == kernels::parallel::dtw_row(query, targets));

  const auto& model = *index.model(QuestionClass::yes_no);
  CHECK(kernels::serial::vs_row(model, query, targets) == kernels::parallel::vs_row(model, query, targets));
}

TEST_CASE("batch featurization and prediction agree across execution modes") {
  const auto& index = setup().index;
  const auto pool = candidate_pool(index, {.execution = Execution::serial});
  CHECK(pool == candidate_pool(index, {.execution = Execution::parallel}));
  const auto xs = kernels::serial::featurize_all(pool, index, fixture::stops());
  CHECK(xs == kernels::parallel::featurize_all(pool, index, fixture::stops()));
  for (std::size_t i = 0; i < pool.size(); i += 17) CHECK(xs[i] == featurize(pool[i], index, fixture::stops()));

  std::vector<LabeledRow> rows;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    rows.push_back({xs[i], synthetic::drug_gold(pool[i], index, setup().corpus)});
  }
  const auto model = train_supervised(LabeledSet::from_rows(rows), ClassifierKind::nnet, {}, 3);
  CHECK(kernels::serial::predict_all(model, xs) == kernels::parallel::predict_all(model, xs));
}
