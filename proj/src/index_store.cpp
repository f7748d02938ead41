#include "cqa/index_store.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "cqa/error.hpp"
#include "json.hpp"

namespace cqa {

using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "cqa-index";

json tokens_json(const TokenSeq& seq) { return seq.tokens; }
TokenSeq tokens_from(const json& j) { return TokenSeq{j.get<std::vector<std::string>>()}; }

json concepts_json(const ConceptSet& s) {
  json spans = json::array();
  for (const auto& sp : s.spans) spans.push_back({sp.begin, sp.end, sp.concept_name});
  json types = json::object();
  for (const auto& [term, ts] : s.types_by_term) types[term] = ts;
  return {{"terms", s.terms}, {"types", types}, {"spans", spans}};
}

ConceptSet concepts_from(const json& j) {
  ConceptSet s;
  s.terms = j.at("terms").get<std::set<std::string>>();
  for (const auto& [term, ts] : j.at("types").items()) s.types_by_term[term] = ts.get<TypeSet>();
  for (const auto& sp : j.at("spans")) {
    s.spans.push_back({sp.at(0).get<std::size_t>(), sp.at(1).get<std::size_t>(), sp.at(2).get<std::string>()});
  }
  return s;
}

json answer_json(const ArchiveAnswer& a) {
  return {{"text", a.answer.text},
          {"likes", a.answer.likes},
          {"is_best", a.answer.is_best},
          {"tokens", tokens_json(a.tokens)},
          {"concepts", concepts_json(a.concepts)}};
}

ArchiveAnswer answer_from(const json& j) {
  ArchiveAnswer a;
  a.answer.text = j.at("text").get<std::string>();
  a.answer.likes = j.at("likes").get<std::int64_t>();
  a.answer.is_best = j.at("is_best").get<bool>();
  a.tokens = tokens_from(j.at("tokens"));
  a.concepts = concepts_from(j.at("concepts"));
  return a;
}

QuestionClass class_from(const json& j) {
  auto c = parse_question_class(j.get<std::string>());
  if (!c) throw InputError("unknown question class \"" + j.get<std::string>() + "\"");
  return *c;
}

}  // namespace

void write_index(std::ostream& out, const CandidateIndex& index) {
  json threads = json::array();
  for (const auto& t : index.threads) {
    json questions = json::array();
    for (const auto& q : t.questions) {
      questions.push_back({{"text", q.question.text},
                           {"tokens", tokens_json(q.question.tokens)},
                           {"class", to_string(q.question.cls)},
                           {"source", q.question.source_thread},
                           {"concepts", concepts_json(q.concepts)}});
    }
    json jt = {{"id", t.id}, {"questions", questions}};
    jt["best"] = t.best ? answer_json(*t.best) : json(nullptr);
    jt["second"] = t.second ? answer_json(*t.second) : json(nullptr);
    threads.push_back(std::move(jt));
  }

  json buckets = json::object();
  json models = json::object();
  for (const auto c : kAllQuestionClasses) {
    json refs = json::array();
    for (const auto& r : index.bucket(c)) refs.push_back({r.thread, r.question});
    buckets[std::string(to_string(c))] = refs;
    if (const auto& m = index.model(c)) {
      std::vector<std::string> vocab(m->dimension());
      for (const auto& [tok, dim] : m->vocabulary()) vocab[dim] = tok;
      models[std::string(to_string(c))] = {{"vocabulary", vocab}, {"idf", m->idf()}, {"documents", m->document_count()}};
    }
  }

  json triggers = json::array();
  for (const auto& e : index.triggers.entries()) triggers.push_back({to_string(e.cls), join(e.phrase)});

  json lexicon_entries = json::array();
  for (const auto& [term, entry] : index.lexicon.entries()) {
    lexicon_entries.push_back({term, entry.concept_name, entry.types});
  }

  json doc = {{"format", kFormatTag},
              {"version", kIndexFormatVersion},
              {"threads", threads},
              {"buckets", buckets},
              {"models", models},
              {"triggers", triggers},
              {"lexicon", {{"vocabulary", index.lexicon.vocabulary()}, {"entries", lexicon_entries}}},
              {"treatment_types", index.treatment_types}};
  out << doc.dump() << '\n';
}

CandidateIndex read_index(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed index: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormatTag) throw InputError("not a candidate index file");
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kIndexFormatVersion) {
    throw InputError("unsupported index version " + (doc.contains("version") ? doc["version"].dump() : "<none>") +
                     " (expected " + std::to_string(kIndexFormatVersion) + ")");
  }

  try {
    CandidateIndex index;
    for (const auto& jt : doc.at("threads")) {
      IndexedThread t;
      t.id = jt.at("id").get<std::string>();
      for (const auto& jq : jt.at("questions")) {
        SubQuestion sq{jq.at("text").get<std::string>(), tokens_from(jq.at("tokens")), class_from(jq.at("class")),
                       jq.at("source").get<std::string>()};
        t.questions.push_back({std::move(sq), concepts_from(jq.at("concepts"))});
      }
      if (!jt.at("best").is_null()) t.best = answer_from(jt.at("best"));
      if (!jt.at("second").is_null()) t.second = answer_from(jt.at("second"));
      index.threads.push_back(std::move(t));
    }
    for (const auto c : kAllQuestionClasses) {
      const std::string name(to_string(c));
      auto& bucket = index.buckets[static_cast<std::size_t>(c)];
      for (const auto& r : doc.at("buckets").at(name)) {
        ArchiveRef ref{r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>()};
        if (ref.thread >= index.threads.size() || ref.question >= index.threads[ref.thread].questions.size()) {
          throw InputError("bucket " + name + " references a missing question");
        }
        bucket.push_back(ref);
      }
      if (doc.at("models").contains(name)) {
        const auto& jm = doc["models"][name];
        std::map<std::string, std::size_t> vocab;
        const auto words = jm.at("vocabulary").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < words.size(); ++i) vocab.emplace(words[i], i);
        index.models[static_cast<std::size_t>(c)] =
            VectorSpaceModel(std::move(vocab), jm.at("idf").get<std::vector<double>>(), jm.at("documents").get<std::size_t>());
      }
    }
    std::vector<TriggerEntry> triggers;
    for (const auto& e : doc.at("triggers")) {
      triggers.push_back({class_from(e.at(0)), tokenize(e.at(1).get<std::string>())});
    }
    index.triggers = TriggerTable(std::move(triggers));
    for (const auto& type : doc.at("lexicon").at("vocabulary")) index.lexicon.declare_type(type.get<std::string>());
    for (const auto& e : doc.at("lexicon").at("entries")) {
      index.lexicon.add(e.at(0).get<std::string>(), e.at(2).get<TypeSet>(), e.at(1).get<std::string>());
    }
    index.treatment_types = doc.at("treatment_types").get<TypeSet>();
    return index;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed index: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("malformed index: ") + e.what());
  }
}

void save_index(const std::filesystem::path& path, const CandidateIndex& index) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_index(out, index);
}

CandidateIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open index " + path.string());
  try {
    return read_index(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace cqa
