#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cqa/textproc.hpp"

namespace cqa {

using TypeSet = std::set<std::string>;

struct LexiconEntry {
  std::string concept_name;  // canonical concept; equals the term unless given
  TypeSet types;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

/// Term -> semantic-type dictionary used for concept recognition.
///
/// File format, one entry per line:
///
///     term<TAB>type[;type...][<TAB>concept]
///
/// Terms are tokenized with the canonical tokenizer, so matching is case and
/// edge-punctuation insensitive. The optional third column maps several
/// surface terms ("medication", "drug") onto one concept. `@type<TAB>name`
/// lines extend the semantic-type vocabulary.
class ConceptLexicon {
 public:
  static constexpr std::size_t kMaxTermTokens = 5;

  ConceptLexicon();

  static ConceptLexicon parse(std::istream& in);
  static ConceptLexicon load(const std::filesystem::path& path);

  void add(std::string_view term, const TypeSet& types, std::string_view concept_name = {});
  void declare_type(std::string_view type);

  const LexiconEntry* find(const std::string& normalized_term) const;
  const std::map<std::string, LexiconEntry>& entries() const { return entries_; }
  const TypeSet& vocabulary() const { return vocabulary_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const ConceptLexicon&, const ConceptLexicon&) = default;

 private:
  std::map<std::string, LexiconEntry> entries_;
  TypeSet vocabulary_;
};

// Inverse of ConceptLexicon::parse.
void write_lexicon(std::ostream& out, const ConceptLexicon& lexicon);

// Semantic types shipped in the default vocabulary.
const TypeSet& default_semantic_types();

// Types that mark a treatment concept for distance reweighting.
const TypeSet& default_treatment_types();

struct ConceptSpan {
  std::size_t begin = 0;  // token offsets into concept_tokens(seq)
  std::size_t end = 0;
  std::string concept_name;

  friend bool operator==(const ConceptSpan&, const ConceptSpan&) = default;
};

struct ConceptSet {
  std::set<std::string> terms;
  std::map<std::string, TypeSet> types_by_term;
  std::vector<ConceptSpan> spans;

  std::size_t size() const { return terms.size(); }
  bool contains(const std::string& term) const { return terms.contains(term); }

  friend bool operator==(const ConceptSet&, const ConceptSet&) = default;
};

// Recognition runs over the token sequence with internal '/' treated as a
// separator ("chlordiazepoxide/librium" -> two tokens).
TokenSeq concept_tokens(const TokenSeq& seq);

// Greedy left-to-right longest match over n-grams (n <= 5); spans never
// overlap.
ConceptSet recognize(const TokenSeq& seq, const ConceptLexicon& lexicon);

bool shares_treatment_concept(const ConceptSet& a, const ConceptSet& b,
                              const TypeSet& treatment_types = default_treatment_types());

std::set<std::string> intersection(const ConceptSet& a, const ConceptSet& b);
std::size_t symmetric_difference_size(const ConceptSet& a, const ConceptSet& b);

}  // namespace cqa
