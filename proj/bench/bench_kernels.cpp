// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "cqa/eval.hpp"
#include "cqa/kernels.hpp"
#include "cqa/pipeline.hpp"
#include "cqa/random.hpp"
#include "cqa/synthetic.hpp"

namespace {

using cqa::Execution;

const std::vector<std::string>& words() {
  static const std::vector<std::string> w{"is",      "librium", "good", "for",    "anxiety", "after", "quitting",
                                          "alcohol", "drinking", "help", "sleep", "doctor",  "take",  "withdrawal"};
  return w;
}

std::vector<cqa::TokenSeq> random_questions(std::size_t n, std::uint64_t seed) {
  cqa::Rng rng(seed);
  std::vector<cqa::TokenSeq> out(n);
  for (auto& q : out) {
    const auto len = 4 + rng.index(12);
    for (std::size_t i = 0; i < len; ++i) q.tokens.push_back(words()[rng.index(words().size())]);
  }
  return out;
}

void BM_DtwRow(benchmark::State& state) {
  const auto exec = static_cast<Execution>(state.range(0));
  const auto targets = random_questions(static_cast<std::size_t>(state.range(1)), 7);
  const auto query = random_questions(1, 8).front();
  std::vector<const cqa::TokenSeq*> ptrs;
  for (const auto& t : targets) ptrs.push_back(&t);
  for (auto _ : state) benchmark::DoNotOptimize(cqa::kernels::dtw_row(exec, query, ptrs));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

struct DrugSetup {
  cqa::CandidateIndex index;
  std::vector<cqa::Triplet> pool;
  cqa::StopList stops = cqa::StopList::load(CQA_DATA_DIR "/stopwords.txt");

  DrugSetup() {
    const auto corpus = cqa::synthetic::make_drug_corpus(300, 3);
    index = cqa::build_index(corpus.threads, corpus.lexicon, cqa::TriggerTable::load(CQA_DATA_DIR "/triggers.tsv"));
    pool = cqa::candidate_pool(index, {.execution = Execution::serial});
  }
};

const DrugSetup& drug_setup() {
  static const DrugSetup s;
  return s;
}

void BM_FeaturizeAll(benchmark::State& state) {
  const auto exec = static_cast<Execution>(state.range(0));
  const auto& s = drug_setup();
  for (auto _ : state) benchmark::DoNotOptimize(cqa::kernels::featurize_all(exec, s.pool, s.index, s.stops));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.pool.size()));
}

void BM_CrossValidate(benchmark::State& state) {
  const auto fx = cqa::synthetic::make_cluster_fixture();
  cqa::CrossValidationConfig cfg;
  cfg.mode = cqa::TrainingMode::em;
  cfg.runs = 4;
  cfg.execution = static_cast<Execution>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cqa::cross_validate(fx.labeled, fx.unlabeled, cfg));
}

constexpr auto kSerial = static_cast<std::int64_t>(Execution::serial);
constexpr auto kParallel = static_cast<std::int64_t>(Execution::parallel);

BENCHMARK(BM_DtwRow)->ArgNames({"parallel", "targets"})->ArgsProduct({{kSerial, kParallel}, {256, 4096}});
BENCHMARK(BM_FeaturizeAll)->ArgName("parallel")->Arg(kSerial)->Arg(kParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossValidate)->ArgName("parallel")->Arg(kSerial)->Arg(kParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
