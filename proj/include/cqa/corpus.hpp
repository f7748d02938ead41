#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cqa {

struct Answer {
  std::string text;
  std::int64_t likes = 0;
  bool is_best = false;

  friend bool operator==(const Answer&, const Answer&) = default;
};

/// One community thread as scraped: title, free-text description and the
/// answers in site order.
struct QAThread {
  std::string id;
  std::string title;
  std::string description;
  std::vector<Answer> answers;

  friend bool operator==(const QAThread&, const QAThread&) = default;
};

struct ResolvedPair {
  std::string thread_id;
  Answer best_answer;
  std::optional<Answer> second_answer;

  friend bool operator==(const ResolvedPair&, const ResolvedPair&) = default;
};

enum class Label : std::uint8_t { invalid = 0, valid = 1 };

/// One row of the annotation file: a (prospective, archive, answer) triplet
/// reference plus its gold label. `qp_sub`/`qt_sub` pick the sub-question
/// within each thread and default to the first.
struct LabelRecord {
  std::string qp_id;
  std::string qt_id;
  int answer_rank = 1;
  Label label = Label::invalid;
  std::size_t qp_sub = 0;
  std::size_t qt_sub = 0;

  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

// JSON-lines corpus. Throws InputError naming the line for malformed rows and
// naming the id for duplicates.
std::vector<QAThread> parse_corpus(std::istream& in);
std::vector<QAThread> load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const std::vector<QAThread>& corpus);
void save_corpus(const std::filesystem::path& path, const std::vector<QAThread>& corpus);

bool is_resolved(const QAThread& thread);

// Best answer plus the most-liked remaining answer (first seen wins ties).
// Throws InputError("unresolved thread") when no answer is marked best.
ResolvedPair select_answers(const QAThread& thread);

std::vector<LabelRecord> parse_labels(std::istream& in);
std::vector<LabelRecord> load_labels(const std::filesystem::path& path);
void write_labels(std::ostream& out, const std::vector<LabelRecord>& labels);

std::string_view to_string(Label label);

}  // namespace cqa
