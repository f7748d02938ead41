#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace cqa {

/// Lowercased word tokens in text order. Tokens are never empty and carry no
/// leading or trailing punctuation; internal punctuation ("drug/alcohol") is
/// kept.
struct TokenSeq {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens[i]; }
  auto begin() const { return tokens.begin(); }
  auto end() const { return tokens.end(); }

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

TokenSeq tokenize(std::string_view text);

// Space-joined tokens; tokenize(join(s)) == s.
std::string join(const TokenSeq& seq);

std::string to_lower_ascii(std::string_view text);

class StopList {
 public:
  // Words every stop list must contain; loading rejects lists missing any.
  static const std::vector<std::string>& required_words();

  static StopList from_words(const std::vector<std::string>& words);
  static StopList parse(std::istream& in);
  static StopList load(const std::filesystem::path& path);

  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

std::size_t count_stopwords(const TokenSeq& seq, const StopList& stops);

/// Unit-cost edit distance over Unicode code points (UTF-8 input; invalid
/// bytes are treated as single characters).
std::size_t levenshtein(std::string_view a, std::string_view b);

std::u32string decode_utf8(std::string_view text);

}  // namespace cqa
