// Small hand-built corpora shared by pipeline-level tests.
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "cqa/corpus.hpp"
#include "cqa/lexicon.hpp"
#include "cqa/pipeline.hpp"
#include "cqa/question.hpp"
#include "cqa/textproc.hpp"

namespace fixture {

inline const cqa::TriggerTable& triggers() {
  static const cqa::TriggerTable t = cqa::TriggerTable::load(CQA_DATA_DIR "/triggers.tsv");
  return t;
}

inline const cqa::StopList& stops() {
  static const cqa::StopList s = cqa::StopList::load(CQA_DATA_DIR "/stopwords.txt");
  return s;
}

inline cqa::ConceptLexicon lexicon() {
  std::istringstream in(
      "librium\tpharmacologic substance\nnaltrexone\tpharmacologic substance\nalcohol\torganic chemical\n"
      "anxiety\tsign or symptom\ninsomnia\tsign or symptom\n");
  return cqa::ConceptLexicon::parse(in);
}

inline cqa::QAThread thread(std::string id, std::string title, std::vector<cqa::Answer> answers) {
  return {std::move(id), std::move(title), "", std::move(answers)};
}

/// Two Yes-No archive questions with two answers each, one why-question with
/// a single answer, and an unresolved Yes-No thread.
inline std::vector<cqa::QAThread> small_corpus() {
  return {
      thread("a", "is librium good for anxiety?",
             {{"librium helped my anxiety a lot", 2, true}, {"ask your doctor first", 5, false}}),
      thread("b", "is naltrexone good for cravings?",
             {{"naltrexone cut my cravings", 1, true}, {"try a support group", 4, false}, {"no idea", 0, false}}),
      thread("c", "why do i shake after drinking alcohol?", {{"that is withdrawal, see a doctor", 3, true}}),
      thread("d", "is it normal to sweat at night?", {{"it happens to me too", 1, false}}),
  };
}

inline cqa::CandidateIndex small_index() { return cqa::build_index(small_corpus(), lexicon(), triggers()); }

inline cqa::IndexedQuestion ask(const cqa::CandidateIndex& index, const std::string& text) {
  return cqa::prepare_question(cqa::extract_subquestions(text, "", index.triggers).front(), index);
}

}  // namespace fixture
