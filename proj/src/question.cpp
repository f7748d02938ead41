#include "cqa/question.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <set>

#include "cqa/error.hpp"

namespace cqa {

namespace {

constexpr std::array<std::string_view, kQuestionClassCount> kClassNames{
    "Yes-No", "what-quantity", "how-frequent", "when", "why",   "how",    "where",
    "who",    "whose",         "whom",         "what", "which", "others",
};

bool matches_at(const TokenSeq& tokens, std::size_t pos, const TokenSeq& phrase) {
  if (phrase.empty() || pos + phrase.size() > tokens.size()) return false;
  for (std::size_t k = 0; k < phrase.size(); ++k) {
    if (tokens[pos + k] != phrase[k]) return false;
  }
  return true;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::string current;
  auto flush = [&] {
    auto s = trim(current);
    if (!s.empty()) sentences.push_back(std::move(s));
    current.clear();
  };
  for (char c : text) {
    if (c == '\n' || c == '\r') {
      flush();
    } else {
      current += c;
      if (c == '.' || c == '?' || c == '!') flush();
    }
  }
  flush();
  return sentences;
}

}  // namespace

std::string_view to_string(QuestionClass c) { return kClassNames[static_cast<std::size_t>(c)]; }

std::optional<QuestionClass> parse_question_class(std::string_view name) {
  for (std::size_t i = 0; i < kQuestionClassCount; ++i) {
    if (kClassNames[i] == name) return static_cast<QuestionClass>(i);
  }
  return std::nullopt;
}

TriggerTable::TriggerTable(std::vector<TriggerEntry> entries) : entries_(std::move(entries)) {
  std::set<std::vector<std::string>> seen;
  for (const auto& e : entries_) {
    if (e.cls == QuestionClass::others) throw InputError("trigger table: class \"others\" takes no triggers");
    if (e.phrase.empty()) throw InputError("trigger table: empty trigger phrase");
    if (!seen.insert(e.phrase.tokens).second) {
      throw InputError("trigger table: duplicate trigger \"" + join(e.phrase) + "\"");
    }
  }
}

TriggerTable TriggerTable::parse(std::istream& in) {
  std::vector<TriggerEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InputError("trigger table line " + std::to_string(lineno) + ": expected class<TAB>phrase");
    }
    const auto name = trim(std::string_view(line).substr(0, tab));
    auto cls = parse_question_class(name);
    if (!cls) throw InputError("trigger table line " + std::to_string(lineno) + ": unknown class \"" + name + "\"");
    entries.push_back({*cls, tokenize(std::string_view(line).substr(tab + 1))});
  }
  return TriggerTable(std::move(entries));
}

TriggerTable TriggerTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trigger table " + path.string());
  try {
    return parse(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

QuestionClass TriggerTable::classify(const TokenSeq& tokens) const {
  for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
    const TriggerEntry* best = nullptr;
    for (const auto& e : entries_) {
      if (e.cls == QuestionClass::yes_no) continue;
      if (matches_at(tokens, pos, e.phrase) && (best == nullptr || e.phrase.size() > best->phrase.size())) {
        best = &e;
      }
    }
    if (best != nullptr) return best->cls;
  }
  for (const auto& e : entries_) {
    if (e.cls == QuestionClass::yes_no && matches_at(tokens, 0, e.phrase)) return QuestionClass::yes_no;
  }
  return QuestionClass::others;
}

bool TriggerTable::starts_with_trigger(const TokenSeq& tokens) const {
  for (const auto& e : entries_) {
    if (matches_at(tokens, 0, e.phrase)) return true;
  }
  return false;
}

std::vector<SubQuestion> extract_subquestions(std::string_view title, std::string_view description,
                                              const TriggerTable& triggers, std::string_view source_thread) {
  std::string text(title);
  text += '\n';
  text += description;

  std::vector<SubQuestion> out;
  std::string first_sentence;
  for (auto& sentence : split_sentences(text)) {
    TokenSeq tokens = tokenize(sentence);
    if (tokens.empty()) continue;
    if (first_sentence.empty()) first_sentence = sentence;
    if (sentence.back() == '?' || triggers.starts_with_trigger(tokens)) {
      const QuestionClass cls = triggers.classify(tokens);
      out.push_back({std::move(sentence), std::move(tokens), cls, std::string(source_thread)});
    }
  }
  if (out.empty()) {
    std::string fallback = trim(title);
    if (tokenize(fallback).empty()) fallback = first_sentence;
    TokenSeq tokens = tokenize(fallback);
    if (!tokens.empty()) out.push_back({std::move(fallback), std::move(tokens), QuestionClass::others, std::string(source_thread)});
  }
  return out;
}

}  // namespace cqa
