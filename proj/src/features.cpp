#include "cqa/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "cqa/error.hpp"
#include "cqa/pipeline.hpp"

namespace cqa {

std::string feature_name(std::size_t index) { return "f" + std::to_string(index + 1); }

FeatureVector compute_features(const FeatureInputs& in) {
  FeatureVector f;
  f[Feature::len_qp] = static_cast<double>(in.qp.size());
  f[Feature::len_qt] = static_cast<double>(in.qt.size());
  f[Feature::stops_qp] = static_cast<double>(count_stopwords(in.qp, in.stops));
  f[Feature::stops_qt] = static_cast<double>(count_stopwords(in.qt, in.stops));

  const SparseVector vp = in.model.vectorize(in.qp);
  const SparseVector vt = in.model.vectorize(in.qt);
  const SparseVector va = in.model.vectorize(in.at);
  f[Feature::vs_qp_qt] = euclidean_distance(vp, vt);
  f[Feature::vs_diff] = std::abs(euclidean_distance(vp, va) - euclidean_distance(vt, va));

  f[Feature::dtw_qp_qt] = dtw_distance(in.qp, in.qt);
  f[Feature::dtw_diff] = std::abs(dtw_distance(in.qp, in.at) - dtw_distance(in.qt, in.at));

  const auto pt = intersection(in.sp, in.st);
  const auto pa = intersection(in.sp, in.sa);
  f[Feature::overlap_sp_st] = static_cast<double>(pt.size());
  f[Feature::overlap_sp_sa] = static_cast<double>(pa.size());
  f[Feature::overlap_sets_differ] = pt != pa ? 1.0 : 0.0;
  f[Feature::setdiff_sp_st] = static_cast<double>(symmetric_difference_size(in.sp, in.st));
  f[Feature::setdiff_sp_sa] = static_cast<double>(symmetric_difference_size(in.sp, in.sa));
  return f;
}

FeatureVector featurize(const Triplet& t, const CandidateIndex& index, const StopList& stops) {
  const auto& qt = index.question(t.archive);
  const auto& at = index.answer(t.archive, t.answer_rank);
  const auto& model = index.model(qt.question.cls);
  if (!model) throw std::logic_error("archive question without a class model");
  return compute_features({t.qp.question.tokens, qt.question.tokens, at.tokens, t.qp.concepts, qt.concepts,
                           at.concepts, *model, stops});
}

double entropy_bits(std::size_t positives, std::size_t total) {
  if (total == 0 || positives == 0 || positives == total) return 0.0;
  const double p = static_cast<double>(positives) / static_cast<double>(total);
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

std::vector<std::size_t> equal_frequency_bins(std::span<const double> values, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("bin count must be positive");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::size_t distinct = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == 0 || values[order[r]] != values[order[r - 1]]) ++distinct;
  }

  std::vector<std::size_t> out(n);
  std::size_t value_rank = 0;
  std::size_t current = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const bool new_value = r == 0 || values[order[r]] != values[order[r - 1]];
    if (new_value) {
      current = distinct <= bins ? value_rank : r * bins / n;
      ++value_rank;
    }
    out[order[r]] = current;
  }
  return out;
}

double information_gain(std::span<const double> values, std::span<const Label> labels, std::size_t bins) {
  if (values.size() != labels.size()) throw std::invalid_argument("values and labels differ in length");
  if (values.empty()) throw std::invalid_argument("information gain of an empty column");
  const std::size_t n = values.size();
  const auto bin = equal_frequency_bins(values, bins);

  std::map<std::size_t, std::pair<std::size_t, std::size_t>> counts;  // bin -> (positives, total)
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = labels[i] == Label::valid;
    positives += pos ? 1 : 0;
    auto& c = counts[bin[i]];
    c.first += pos ? 1 : 0;
    ++c.second;
  }
  double conditional = 0.0;
  for (const auto& [b, c] : counts) {
    conditional += static_cast<double>(c.second) / static_cast<double>(n) * entropy_bits(c.first, c.second);
  }
  return std::max(0.0, entropy_bits(positives, n) - conditional);
}

std::vector<FeatureGain> rank_features(std::span<const FeatureVector> rows, std::span<const Label> labels,
                                       std::size_t bins) {
  std::vector<FeatureGain> gains;
  std::vector<double> column(rows.size());
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i][f];
    gains.push_back({f, information_gain(column, labels, bins)});
  }
  std::stable_sort(gains.begin(), gains.end(), [](const FeatureGain& a, const FeatureGain& b) { return a.gain > b.gain; });
  return gains;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv(const std::string& line, std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw InputError("feature csv line " + std::to_string(lineno) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows) {
  for (std::size_t f = 0; f < kFeatureCount; ++f) out << feature_name(f) << ',';
  out << "label,qp_id\n";
  for (const auto& row : rows) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) out << format_double(row.x[f]) << ',';
    out << (row.label ? std::string(to_string(*row.label)) : std::string()) << ',' << csv_field(row.group) << '\n';
  }
}

std::vector<FeatureRow> read_feature_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw InputError("feature csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line, lineno);
  if (header.size() != kFeatureCount + 2) throw InputError("feature csv: expected 15 header columns");
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    if (header[f] != feature_name(f)) throw InputError("feature csv: header column " + std::to_string(f + 1) + " must be " + feature_name(f));
  }
  if (header[kFeatureCount] != "label" || header[kFeatureCount + 1] != "qp_id") {
    throw InputError("feature csv: header must end with label,qp_id");
  }

  std::vector<FeatureRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line, lineno);
    if (fields.size() != kFeatureCount + 2) {
      throw InputError("feature csv line " + std::to_string(lineno) + ": expected 15 columns");
    }
    FeatureRow row;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      const auto& s = fields[f];
      auto res = std::from_chars(s.data(), s.data() + s.size(), row.x[f]);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw InputError("feature csv line " + std::to_string(lineno) + ": bad number \"" + s + "\"");
      }
    }
    const auto& label = fields[kFeatureCount];
    if (label == "valid") {
      row.label = Label::valid;
    } else if (label == "invalid") {
      row.label = Label::invalid;
    } else if (!label.empty()) {
      throw InputError("feature csv line " + std::to_string(lineno) + ": bad label \"" + label + "\"");
    }
    row.group = fields[kFeatureCount + 1];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cqa
