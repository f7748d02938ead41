#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqa/corpus.hpp"
#include "cqa/lexicon.hpp"
#include "cqa/question.hpp"
#include "cqa/similarity.hpp"

namespace cqa {

enum class Execution { serial, parallel };

struct ArchiveAnswer {
  Answer answer;
  TokenSeq tokens;
  ConceptSet concepts;

  friend bool operator==(const ArchiveAnswer&, const ArchiveAnswer&) = default;
};

struct IndexedQuestion {
  SubQuestion question;
  ConceptSet concepts;

  friend bool operator==(const IndexedQuestion&, const IndexedQuestion&) = default;
};

/// A corpus thread after question extraction. Unresolved threads keep their
/// sub-questions (they can still be asked) but carry no answers and never
/// enter a class bucket.
struct IndexedThread {
  std::string id;
  std::vector<IndexedQuestion> questions;
  std::optional<ArchiveAnswer> best;
  std::optional<ArchiveAnswer> second;

  bool in_archive() const { return best.has_value(); }

  friend bool operator==(const IndexedThread&, const IndexedThread&) = default;
};

struct ArchiveRef {
  std::size_t thread = 0;
  std::size_t question = 0;

  friend auto operator<=>(const ArchiveRef&, const ArchiveRef&) = default;
};

struct CandidateIndex {
  std::vector<IndexedThread> threads;
  std::array<std::vector<ArchiveRef>, kQuestionClassCount> buckets;
  std::array<std::optional<VectorSpaceModel>, kQuestionClassCount> models;
  TriggerTable triggers;
  ConceptLexicon lexicon;
  TypeSet treatment_types = default_treatment_types();

  const std::vector<ArchiveRef>& bucket(QuestionClass c) const { return buckets[static_cast<std::size_t>(c)]; }
  const std::optional<VectorSpaceModel>& model(QuestionClass c) const { return models[static_cast<std::size_t>(c)]; }

  const IndexedQuestion& question(ArchiveRef ref) const { return threads.at(ref.thread).questions.at(ref.question); }
  // answer_rank 1 = best, 2 = second; throws std::out_of_range when absent.
  const ArchiveAnswer& answer(ArchiveRef ref, int answer_rank) const;

  std::optional<std::size_t> find_thread(const std::string& id) const;
  std::size_t subquestion_count() const;

  friend bool operator==(const CandidateIndex& a, const CandidateIndex& b) {
    return a.threads == b.threads && a.buckets == b.buckets && a.models == b.models && a.triggers == b.triggers &&
           a.lexicon == b.lexicon && a.treatment_types == b.treatment_types;
  }
};

/// The classification unit: prospective question, archive question and one
/// of the archive question's answers, reached through one distance measure.
struct Triplet {
  IndexedQuestion qp;
  ArchiveRef archive;
  int answer_rank = 1;
  Distance distance;
  std::optional<Label> label;
  std::optional<double> score;
  std::size_t qp_sub = 0;  // position of qp within its own thread, if any

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Throws InputError when the corpus has no resolvable thread.
CandidateIndex build_index(const std::vector<QAThread>& corpus, const ConceptLexicon& lexicon,
                           const TriggerTable& triggers, const TypeSet& treatment_types = default_treatment_types());

IndexedQuestion prepare_question(SubQuestion question, const CandidateIndex& index);

struct CandidateOptions {
  double weight = 0.5;
  std::size_t per_measure = 2;  // closest archive questions kept per measure
  Execution execution = Execution::parallel;
};

/// Nearest archive questions in qp's class bucket under each measure
/// (concept-weighted), expanded into one triplet per available answer.
/// Order: DTW block then VS block, each by ascending distance, ties broken by
/// thread id. At most 2 * per_measure * 2 triplets.
std::vector<Triplet> extract_candidates(const IndexedQuestion& qp, const CandidateIndex& index,
                                        const CandidateOptions& options = {});

struct RankedAnswer {
  std::string thread_id;
  int answer_rank = 1;
  std::string text;
  double probability = 0.0;
};

struct AnswerResult {
  std::vector<RankedAnswer> answers;
  bool no_valid_answer() const { return answers.empty(); }
};

class RankModel;

// Runs the whole query path for a new question.
AnswerResult answer(std::string_view title, std::string_view description, const CandidateIndex& index,
                    const RankModel& model, const StopList& stops, const CandidateOptions& options = {});

struct TripletKey {
  std::string qp_id;
  std::size_t qp_sub = 0;
  std::string qt_id;
  std::size_t qt_sub = 0;
  int answer_rank = 1;

  friend auto operator<=>(const TripletKey&, const TripletKey&) = default;
};

TripletKey key_of(const Triplet& t, const CandidateIndex& index);

// Resolves an annotation row against the index. Throws TrainingError naming
// the offending id when a thread, sub-question or answer does not exist.
Triplet make_labeled_triplet(const LabelRecord& record, const CandidateIndex& index, double weight = 0.5);

/// Candidates for every thread's sub-questions used as prospective questions,
/// deduplicated by TripletKey (first occurrence kept).
std::vector<Triplet> candidate_pool(const CandidateIndex& index, const CandidateOptions& options = {});

// JSON-lines candidate dump consumed by annotators.
std::string candidate_json(const Triplet& t, const CandidateIndex& index);

}  // namespace cqa
