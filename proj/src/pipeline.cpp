#include "cqa/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "cqa/error.hpp"
#include "cqa/features.hpp"
#include "cqa/kernels.hpp"
#include "cqa/learn.hpp"
#include "json.hpp"

namespace cqa {

const ArchiveAnswer& CandidateIndex::answer(ArchiveRef ref, int answer_rank) const {
  const auto& t = threads.at(ref.thread);
  const auto& slot = answer_rank == 1 ? t.best : t.second;
  if (answer_rank < 1 || answer_rank > 2 || !slot) {
    throw std::out_of_range("thread " + t.id + " has no answer of rank " + std::to_string(answer_rank));
  }
  return *slot;
}

std::optional<std::size_t> CandidateIndex::find_thread(const std::string& id) const {
  for (std::size_t i = 0; i < threads.size(); ++i) {
    if (threads[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t CandidateIndex::subquestion_count() const {
  std::size_t n = 0;
  for (const auto& b : buckets) n += b.size();
  return n;
}

namespace {

ArchiveAnswer archive_answer(const Answer& a, const ConceptLexicon& lexicon) {
  ArchiveAnswer out{a, tokenize(a.text), {}};
  out.concepts = recognize(out.tokens, lexicon);
  return out;
}

}  // namespace

CandidateIndex build_index(const std::vector<QAThread>& corpus, const ConceptLexicon& lexicon,
                           const TriggerTable& triggers, const TypeSet& treatment_types) {
  CandidateIndex index;
  index.triggers = triggers;
  index.lexicon = lexicon;
  index.treatment_types = treatment_types;

  bool any_resolved = false;
  for (const auto& thread : corpus) {
    IndexedThread indexed{thread.id, {}, std::nullopt, std::nullopt};
    for (auto& sq : extract_subquestions(thread.title, thread.description, triggers, thread.id)) {
      ConceptSet concepts = recognize(sq.tokens, lexicon);
      indexed.questions.push_back({std::move(sq), std::move(concepts)});
    }

    // Answers without a single token cannot be aligned or vectorized; they
    // never become candidates.
    QAThread usable = thread;
    std::erase_if(usable.answers, [](const Answer& a) { return tokenize(a.text).empty(); });
    if (is_resolved(usable)) {
      const ResolvedPair pair = select_answers(usable);
      indexed.best = archive_answer(pair.best_answer, lexicon);
      if (pair.second_answer) indexed.second = archive_answer(*pair.second_answer, lexicon);
      any_resolved = true;
    }

    const std::size_t t = index.threads.size();
    if (indexed.in_archive()) {
      for (std::size_t q = 0; q < indexed.questions.size(); ++q) {
        index.buckets[static_cast<std::size_t>(indexed.questions[q].question.cls)].push_back({t, q});
      }
    }
    index.threads.push_back(std::move(indexed));
  }
  if (!any_resolved) throw InputError("no resolvable threads");

  for (std::size_t c = 0; c < kQuestionClassCount; ++c) {
    if (index.buckets[c].empty()) continue;
    std::vector<TokenSeq> docs;
    docs.reserve(index.buckets[c].size());
    for (const auto& ref : index.buckets[c]) docs.push_back(index.question(ref).question.tokens);
    index.models[c] = VectorSpaceModel::fit(docs);
  }
  return index;
}

IndexedQuestion prepare_question(SubQuestion question, const CandidateIndex& index) {
  ConceptSet concepts = recognize(question.tokens, index.lexicon);
  return {std::move(question), std::move(concepts)};
}

std::vector<Triplet> extract_candidates(const IndexedQuestion& qp, const CandidateIndex& index,
                                        const CandidateOptions& options) {
  if (!(options.weight > 0.0 && options.weight <= 1.0)) throw std::invalid_argument("concept weight must lie in (0, 1]");

  std::vector<ArchiveRef> refs;
  for (const auto& ref : index.bucket(qp.question.cls)) {
    const bool own_thread = !qp.question.source_thread.empty() && index.threads[ref.thread].id == qp.question.source_thread;
    if (!own_thread) refs.push_back(ref);
  }
  if (refs.empty()) return {};

  std::vector<const TokenSeq*> targets;
  targets.reserve(refs.size());
  for (const auto& ref : refs) targets.push_back(&index.question(ref).question.tokens);

  std::vector<char> shares(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    shares[i] = shares_treatment_concept(qp.concepts, index.question(refs[i]).concepts, index.treatment_types);
  }

  const auto& model = index.model(qp.question.cls);
  std::vector<Triplet> out;
  for (const Measure measure : {Measure::dtw, Measure::vs}) {
    std::vector<double> raw = measure == Measure::dtw
                                  ? kernels::dtw_row(options.execution, qp.question.tokens, targets)
                                  : kernels::vs_row(options.execution, *model, qp.question.tokens, targets);
    std::vector<Distance> dist(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
      dist[i] = apply_concept_weight({raw[i], measure}, shares[i] != 0, options.weight);
    }
    std::vector<std::size_t> order(refs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (dist[x].value != dist[y].value) return dist[x].value < dist[y].value;
      const auto& ix = index.threads[refs[x].thread].id;
      const auto& iy = index.threads[refs[y].thread].id;
      if (ix != iy) return ix < iy;
      return refs[x].question < refs[y].question;
    });
    const std::size_t keep = std::min(options.per_measure, order.size());
    for (std::size_t r = 0; r < keep; ++r) {
      const std::size_t i = order[r];
      const auto& thread = index.threads[refs[i].thread];
      out.push_back({qp, refs[i], 1, dist[i], std::nullopt, std::nullopt, 0});
      if (thread.second) out.push_back({qp, refs[i], 2, dist[i], std::nullopt, std::nullopt, 0});
    }
  }
  return out;
}

AnswerResult answer(std::string_view title, std::string_view description, const CandidateIndex& index,
                    const RankModel& model, const StopList& stops, const CandidateOptions& options) {
  if (tokenize(title).empty() && tokenize(description).empty()) throw InputError("empty question");

  std::vector<Triplet> pool;
  for (auto& sq : extract_subquestions(title, description, index.triggers)) {
    auto found = extract_candidates(prepare_question(std::move(sq), index), index, options);
    pool.insert(pool.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  const auto features = kernels::featurize_all(options.execution, pool, index, stops);
  const auto probs = kernels::predict_all(options.execution, model, features);

  // Pool across sub-questions and measures, one entry per archive answer.
  std::map<std::pair<std::size_t, int>, double> best;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    pool[i].score = probs[i];
    const auto key = std::pair{pool[i].archive.thread, pool[i].answer_rank};
    auto [it, inserted] = best.try_emplace(key, probs[i]);
    if (!inserted) it->second = std::max(it->second, probs[i]);
  }

  AnswerResult result;
  for (const auto& [key, p] : best) {
    if (p < model.threshold) continue;
    const auto& thread = index.threads[key.first];
    result.answers.push_back({thread.id, key.second, index.answer({key.first, 0}, key.second).answer.text, p});
  }
  std::stable_sort(result.answers.begin(), result.answers.end(), [](const RankedAnswer& a, const RankedAnswer& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    if (a.thread_id != b.thread_id) return a.thread_id < b.thread_id;
    return a.answer_rank < b.answer_rank;
  });
  return result;
}

TripletKey key_of(const Triplet& t, const CandidateIndex& index) {
  return {t.qp.question.source_thread, t.qp_sub, index.threads.at(t.archive.thread).id, t.archive.question,
          t.answer_rank};
}

Triplet make_labeled_triplet(const LabelRecord& record, const CandidateIndex& index, double weight) {
  const auto qp_thread = index.find_thread(record.qp_id);
  if (!qp_thread) throw TrainingError("labels reference unknown thread id \"" + record.qp_id + "\"");
  const auto qt_thread = index.find_thread(record.qt_id);
  if (!qt_thread) throw TrainingError("labels reference unknown thread id \"" + record.qt_id + "\"");
  if (record.qp_id == record.qt_id) throw TrainingError("label pairs thread \"" + record.qp_id + "\" with itself");

  const auto& pt = index.threads[*qp_thread];
  const auto& tt = index.threads[*qt_thread];
  if (record.qp_sub >= pt.questions.size()) {
    throw TrainingError("thread \"" + record.qp_id + "\" has no sub-question " + std::to_string(record.qp_sub));
  }
  if (record.qt_sub >= tt.questions.size()) {
    throw TrainingError("thread \"" + record.qt_id + "\" has no sub-question " + std::to_string(record.qt_sub));
  }
  if (!tt.in_archive()) throw TrainingError("thread \"" + record.qt_id + "\" is not in the answer archive");
  if (record.answer_rank == 2 && !tt.second) {
    throw TrainingError("thread \"" + record.qt_id + "\" has no second answer");
  }

  const ArchiveRef ref{*qt_thread, record.qt_sub};
  const IndexedQuestion& qp = pt.questions[record.qp_sub];
  const IndexedQuestion& qt = index.question(ref);
  const Distance d = apply_concept_weight({dtw_distance(qp.question.tokens, qt.question.tokens), Measure::dtw},
                                          shares_treatment_concept(qp.concepts, qt.concepts, index.treatment_types),
                                          weight);
  return {qp, ref, record.answer_rank, d, record.label, std::nullopt, record.qp_sub};
}

std::vector<Triplet> candidate_pool(const CandidateIndex& index, const CandidateOptions& options) {
  std::vector<Triplet> pool;
  std::set<TripletKey> seen;
  for (const auto& thread : index.threads) {
    for (std::size_t q = 0; q < thread.questions.size(); ++q) {
      for (auto& t : extract_candidates(thread.questions[q], index, options)) {
        t.qp_sub = q;
        if (seen.insert(key_of(t, index)).second) pool.push_back(std::move(t));
      }
    }
  }
  return pool;
}

std::string candidate_json(const Triplet& t, const CandidateIndex& index) {
  const auto& qt = index.question(t.archive);
  const auto& at = index.answer(t.archive, t.answer_rank);
  nlohmann::ordered_json obj = {
      {"qp_id", t.qp.question.source_thread},
      {"qp_sub", t.qp_sub},
      {"qp_text", t.qp.question.text},
      {"class", to_string(t.qp.question.cls)},
      {"qt_id", index.threads[t.archive.thread].id},
      {"qt_sub", t.archive.question},
      {"qt_text", qt.question.text},
      {"answer_rank", t.answer_rank},
      {"answer_text", at.answer.text},
      {"measure", to_string(t.distance.measure)},
      {"distance", t.distance.value},
  };
  return obj.dump();
}

}  // namespace cqa
