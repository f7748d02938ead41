#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cqa/textproc.hpp"

namespace cqa {

enum class QuestionClass : std::uint8_t {
  yes_no,
  what_quantity,
  how_frequent,
  when,
  why,
  how,
  where,
  who,
  whose,
  whom,
  what,
  which,
  others,
};

inline constexpr std::size_t kQuestionClassCount = 13;

inline constexpr std::array<QuestionClass, kQuestionClassCount> kAllQuestionClasses{
    QuestionClass::yes_no, QuestionClass::what_quantity, QuestionClass::how_frequent, QuestionClass::when,
    QuestionClass::why,    QuestionClass::how,           QuestionClass::where,        QuestionClass::who,
    QuestionClass::whose,  QuestionClass::whom,          QuestionClass::what,         QuestionClass::which,
    QuestionClass::others,
};

// Canonical names: "Yes-No", "what-quantity", "how-frequent", "when", ...
std::string_view to_string(QuestionClass c);
std::optional<QuestionClass> parse_question_class(std::string_view name);

struct TriggerEntry {
  QuestionClass cls;
  TokenSeq phrase;

  friend bool operator==(const TriggerEntry&, const TriggerEntry&) = default;
};

/// Keyword rules routing a sentence to one of the question classes.
///
/// Interrogative triggers (every class except Yes-No and others) may match at
/// any token position: the earliest match wins, and among matches starting
/// at the same token the longest phrase wins, so "how often" beats "how".
/// Yes-No entries are auxiliaries, consulted only when no interrogative
/// trigger matched and only at the first token. Everything else is others.
class TriggerTable {
 public:
  TriggerTable() = default;
  explicit TriggerTable(std::vector<TriggerEntry> entries);

  // Lines `class<TAB>phrase`; '#' starts a comment line.
  static TriggerTable parse(std::istream& in);
  static TriggerTable load(const std::filesystem::path& path);

  QuestionClass classify(const TokenSeq& tokens) const;
  QuestionClass classify(std::string_view sentence) const { return classify(tokenize(sentence)); }

  // True when any trigger (auxiliaries included) matches at token 0.
  bool starts_with_trigger(const TokenSeq& tokens) const;

  const std::vector<TriggerEntry>& entries() const { return entries_; }

  friend bool operator==(const TriggerTable&, const TriggerTable&) = default;

 private:
  std::vector<TriggerEntry> entries_;
};

struct SubQuestion {
  std::string text;
  TokenSeq tokens;
  QuestionClass cls = QuestionClass::others;
  std::string source_thread;

  friend bool operator==(const SubQuestion&, const SubQuestion&) = default;
};

/// Splits title and description into sentences (at '.', '?', '!' and
/// newlines) and keeps the question-like ones: those ending in '?' or opening
/// with a trigger. Falls back to the title, class others, when none qualify
/// (or to the first description sentence when the title is blank).
std::vector<SubQuestion> extract_subquestions(std::string_view title, std::string_view description,
                                              const TriggerTable& triggers, std::string_view source_thread = {});

}  // namespace cqa
