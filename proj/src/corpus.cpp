#include "cqa/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "cqa/error.hpp"
#include "json.hpp"

namespace cqa {

using nlohmann::json;

namespace {

std::string at_line(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

bool is_blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

const json& require(const json& obj, const char* key, json::value_t type, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(at_line(line, std::string("missing \"") + key + "\""));
  if (it->type() != type) throw InputError(at_line(line, std::string("\"") + key + "\" has wrong type"));
  return *it;
}

std::string optional_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) throw InputError(at_line(line, std::string("\"") + key + "\" must be a string"));
  return it->get<std::string>();
}

Answer parse_answer(const json& a, std::size_t line) {
  if (!a.is_object()) throw InputError(at_line(line, "answer must be an object"));
  Answer answer;
  answer.text = require(a, "text", json::value_t::string, line).get<std::string>();
  if (auto it = a.find("likes"); it != a.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw InputError(at_line(line, "\"likes\" must be an integer"));
    answer.likes = it->get<std::int64_t>();
    if (answer.likes < 0) throw InputError(at_line(line, "\"likes\" must be >= 0"));
  }
  if (auto it = a.find("is_best"); it != a.end() && !it->is_null()) {
    if (!it->is_boolean()) throw InputError(at_line(line, "\"is_best\" must be a boolean"));
    answer.is_best = it->get<bool>();
  }
  return answer;
}

QAThread parse_thread(const std::string& text, std::size_t line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(at_line(line, std::string("malformed JSON: ") + e.what()));
  }
  if (!obj.is_object()) throw InputError(at_line(line, "expected a JSON object"));

  QAThread thread;
  thread.id = require(obj, "id", json::value_t::string, line).get<std::string>();
  if (thread.id.empty()) throw InputError(at_line(line, "empty \"id\""));
  thread.title = require(obj, "title", json::value_t::string, line).get<std::string>();
  thread.description = optional_string(obj, "description", line);

  if (auto it = obj.find("answers"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw InputError(at_line(line, "\"answers\" must be an array"));
    for (const auto& a : *it) thread.answers.push_back(parse_answer(a, line));
  }
  std::size_t best = 0;
  for (const auto& a : thread.answers) best += a.is_best ? 1 : 0;
  if (best > 1) throw InputError(at_line(line, "thread \"" + thread.id + "\" marks more than one best answer"));
  return thread;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<QAThread> parse_corpus(std::istream& in) {
  std::vector<QAThread> corpus;
  std::unordered_set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    QAThread thread = parse_thread(text, line);
    if (!seen.insert(thread.id).second) throw InputError(at_line(line, "duplicate id \"" + thread.id + "\""));
    corpus.push_back(std::move(thread));
  }
  return corpus;
}

std::vector<QAThread> load_corpus(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  try {
    return parse_corpus(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_corpus(std::ostream& out, const std::vector<QAThread>& corpus) {
  for (const auto& thread : corpus) {
    json answers = json::array();
    for (const auto& a : thread.answers) {
      answers.push_back({{"text", a.text}, {"likes", a.likes}, {"is_best", a.is_best}});
    }
    json obj = {{"id", thread.id}, {"title", thread.title}, {"description", thread.description}, {"answers", answers}};
    out << obj.dump() << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const std::vector<QAThread>& corpus) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_corpus(out, corpus);
}

bool is_resolved(const QAThread& thread) {
  for (const auto& a : thread.answers) {
    if (a.is_best) return true;
  }
  return false;
}

ResolvedPair select_answers(const QAThread& thread) {
  const Answer* best = nullptr;
  const Answer* second = nullptr;
  for (const auto& a : thread.answers) {
    if (a.is_best) {
      best = &a;
    } else if (second == nullptr || a.likes > second->likes) {
      second = &a;
    }
  }
  if (best == nullptr) throw InputError("unresolved thread: " + thread.id);
  ResolvedPair pair{thread.id, *best, std::nullopt};
  if (second != nullptr) pair.second_answer = *second;
  return pair;
}

std::string_view to_string(Label label) { return label == Label::valid ? "valid" : "invalid"; }

std::vector<LabelRecord> parse_labels(std::istream& in) {
  std::vector<LabelRecord> labels;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError(at_line(line, std::string("malformed JSON: ") + e.what()));
    }
    if (!obj.is_object()) throw InputError(at_line(line, "expected a JSON object"));
    LabelRecord rec;
    rec.qp_id = require(obj, "qp_id", json::value_t::string, line).get<std::string>();
    rec.qt_id = require(obj, "qt_id", json::value_t::string, line).get<std::string>();
    auto rank = obj.find("answer_rank");
    if (rank == obj.end() || !rank->is_number_integer()) throw InputError(at_line(line, "missing integer \"answer_rank\""));
    rec.answer_rank = rank->get<int>();
    if (rec.answer_rank != 1 && rec.answer_rank != 2) throw InputError(at_line(line, "\"answer_rank\" must be 1 or 2"));
    const auto label = require(obj, "label", json::value_t::string, line).get<std::string>();
    if (label == "valid") {
      rec.label = Label::valid;
    } else if (label == "invalid") {
      rec.label = Label::invalid;
    } else {
      throw InputError(at_line(line, "\"label\" must be \"valid\" or \"invalid\""));
    }
    for (auto [key, field] : {std::pair{"qp_sub", &rec.qp_sub}, std::pair{"qt_sub", &rec.qt_sub}}) {
      if (auto it = obj.find(key); it != obj.end()) {
        if (!it->is_number_unsigned()) throw InputError(at_line(line, std::string("\"") + key + "\" must be a non-negative integer"));
        *field = it->get<std::size_t>();
      }
    }
    labels.push_back(std::move(rec));
  }
  return labels;
}

std::vector<LabelRecord> load_labels(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  try {
    return parse_labels(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_labels(std::ostream& out, const std::vector<LabelRecord>& labels) {
  for (const auto& r : labels) {
    json obj = {{"qp_id", r.qp_id},           {"qt_id", r.qt_id},   {"answer_rank", r.answer_rank},
                {"label", to_string(r.label)}, {"qp_sub", r.qp_sub}, {"qt_sub", r.qt_sub}};
    out << obj.dump() << '\n';
  }
}

}  // namespace cqa
