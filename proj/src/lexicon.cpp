#include "cqa/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <iterator>

#include "cqa/error.hpp"

namespace cqa {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string normalize_term(std::string_view term) { return join(concept_tokens(tokenize(term))); }

}  // namespace

const TypeSet& default_semantic_types() {
  static const TypeSet types{
      "organic chemical",
      "pharmacologic substance",
      "clinical drug",
      "antibiotic",
      "hazardous or poisonous substance",
      "biologically active substance",
      "vitamin",
      "hormone",
      "disease or syndrome",
      "mental or behavioral dysfunction",
      "mental process",
      "sign or symptom",
      "finding",
      "injury or poisoning",
      "pathologic function",
      "therapeutic or preventive procedure",
      "diagnostic procedure",
      "health care activity",
      "body part, organ, or organ component",
      "body substance",
      "food",
      "individual behavior",
      "social behavior",
      "population group",
      "professional or occupational group",
      "qualitative concept",
      "quantitative concept",
      "temporal concept",
      "functional concept",
  };
  return types;
}

const TypeSet& default_treatment_types() {
  static const TypeSet types{"organic chemical", "pharmacologic substance"};
  return types;
}

ConceptLexicon::ConceptLexicon() : vocabulary_(default_semantic_types()) {}

void ConceptLexicon::declare_type(std::string_view type) {
  auto t = to_lower_ascii(trim(type));
  if (t.empty()) throw InputError("lexicon: empty semantic type");
  vocabulary_.insert(std::move(t));
}

void ConceptLexicon::add(std::string_view term, const TypeSet& types, std::string_view concept_name) {
  const std::string key = normalize_term(term);
  if (key.empty()) throw InputError("lexicon: empty term");
  if (concept_tokens(tokenize(key)).size() > kMaxTermTokens) {
    throw InputError("lexicon: term \"" + key + "\" exceeds " + std::to_string(kMaxTermTokens) + " tokens");
  }
  if (types.empty()) throw InputError("lexicon: term \"" + key + "\" has no semantic type");
  std::string concept_key = concept_name.empty() ? key : normalize_term(concept_name);
  if (concept_key.empty()) throw InputError("lexicon: empty concept for \"" + key + "\"");

  TypeSet normalized;
  for (const auto& t : types) {
    auto lowered = to_lower_ascii(trim(t));
    if (!vocabulary_.contains(lowered)) {
      throw InputError("lexicon: term \"" + key + "\" uses undeclared semantic type \"" + lowered + "\"");
    }
    normalized.insert(std::move(lowered));
  }

  auto [it, inserted] = entries_.try_emplace(key, LexiconEntry{concept_key, normalized});
  if (!inserted) {
    if (it->second.concept_name != concept_key) {
      throw InputError("lexicon: term \"" + key + "\" mapped to two concepts");
    }
    it->second.types.insert(normalized.begin(), normalized.end());
  }
}

const LexiconEntry* ConceptLexicon::find(const std::string& normalized_term) const {
  auto it = entries_.find(normalized_term);
  return it == entries_.end() ? nullptr : &it->second;
}

ConceptLexicon ConceptLexicon::parse(std::istream& in) {
  ConceptLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto cols = split(line, '\t');
    try {
      if (trim(cols[0]) == "@type") {
        if (cols.size() != 2) throw InputError("expected @type<TAB>name");
        lex.declare_type(cols[1]);
        continue;
      }
      if (cols.size() < 2 || cols.size() > 3) throw InputError("expected term<TAB>types[<TAB>concept]");
      TypeSet types;
      for (const auto& t : split(cols[1], ';')) {
        if (!trim(t).empty()) types.insert(trim(t));
      }
      lex.add(cols[0], types, cols.size() == 3 ? std::string_view(cols[2]) : std::string_view{});
    } catch (const InputError& e) {
      throw InputError("lexicon line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return lex;
}

ConceptLexicon ConceptLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon " + path.string());
  try {
    return parse(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_lexicon(std::ostream& out, const ConceptLexicon& lexicon) {
  const auto& defaults = default_semantic_types();
  for (const auto& type : lexicon.vocabulary()) {
    if (!defaults.contains(type)) out << "@type\t" << type << '\n';
  }
  for (const auto& [term, entry] : lexicon.entries()) {
    out << term << '\t';
    bool first = true;
    for (const auto& type : entry.types) {
      if (!first) out << ';';
      out << type;
      first = false;
    }
    if (entry.concept_name != term) out << '\t' << entry.concept_name;
    out << '\n';
  }
}

TokenSeq concept_tokens(const TokenSeq& seq) {
  TokenSeq out;
  for (const auto& tok : seq) {
    if (tok.find('/') == std::string::npos) {
      out.tokens.push_back(tok);
      continue;
    }
    for (const auto& piece : split(tok, '/')) {
      for (auto& t : tokenize(piece).tokens) out.tokens.push_back(std::move(t));
    }
  }
  return out;
}

ConceptSet recognize(const TokenSeq& seq, const ConceptLexicon& lexicon) {
  ConceptSet result;
  if (lexicon.empty()) return result;
  const TokenSeq toks = concept_tokens(seq);
  std::size_t i = 0;
  while (i < toks.size()) {
    const std::size_t longest = std::min(ConceptLexicon::kMaxTermTokens, toks.size() - i);
    bool matched = false;
    for (std::size_t n = longest; n >= 1; --n) {
      std::string key = toks[i];
      for (std::size_t k = 1; k < n; ++k) key += ' ' + toks[i + k];
      if (const auto* entry = lexicon.find(key)) {
        result.terms.insert(entry->concept_name);
        result.types_by_term[entry->concept_name].insert(entry->types.begin(), entry->types.end());
        result.spans.push_back({i, i + n, entry->concept_name});
        i += n;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return result;
}

bool shares_treatment_concept(const ConceptSet& a, const ConceptSet& b, const TypeSet& treatment_types) {
  for (const auto& term : a.terms) {
    if (!b.contains(term)) continue;
    auto qualifies = [&](const ConceptSet& s) {
      const auto& types = s.types_by_term.at(term);
      return std::any_of(types.begin(), types.end(), [&](const std::string& t) { return treatment_types.contains(t); });
    };
    if (qualifies(a) || qualifies(b)) return true;
  }
  return false;
}

std::set<std::string> intersection(const ConceptSet& a, const ConceptSet& b) {
  std::set<std::string> out;
  std::set_intersection(a.terms.begin(), a.terms.end(), b.terms.begin(), b.terms.end(), std::inserter(out, out.end()));
  return out;
}

std::size_t symmetric_difference_size(const ConceptSet& a, const ConceptSet& b) {
  return a.size() + b.size() - 2 * intersection(a, b).size();
}

}  // namespace cqa
