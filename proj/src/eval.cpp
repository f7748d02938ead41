#include "cqa/eval.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cqa/error.hpp"
#include "cqa/random.hpp"
#include "json.hpp"

namespace cqa {

bool QuestionGroup::has_valid() const {
  return std::any_of(triplets.begin(), triplets.end(), [](const ScoredTriplet& t) { return t.gold == Label::valid; });
}

bool group_correct(const QuestionGroup& group, double threshold) {
  if (group.has_valid()) {
    return std::any_of(group.triplets.begin(), group.triplets.end(), [&](const ScoredTriplet& t) {
      return t.gold == Label::valid && t.probability >= threshold;
    });
  }
  return std::all_of(group.triplets.begin(), group.triplets.end(),
                     [&](const ScoredTriplet& t) { return t.probability < threshold; });
}

double overall_accuracy(std::span<const QuestionGroup> groups, double threshold) {
  if (groups.empty()) throw std::invalid_argument("overall accuracy of zero questions");
  std::size_t correct = 0;
  for (const auto& g : groups) correct += group_correct(g, threshold) ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(groups.size());
}

double mrr(std::span<const QuestionGroup> groups) {
  if (groups.empty()) throw std::invalid_argument("MRR of zero questions");
  double sum = 0.0;
  for (const auto& g : groups) {
    if (!g.has_valid()) throw std::invalid_argument("MRR group \"" + g.question_id + "\" has no valid triplet");
    std::vector<ScoredTriplet> sorted = g.triplets;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ScoredTriplet& a, const ScoredTriplet& b) { return a.probability > b.probability; });
    for (std::size_t r = 0; r < sorted.size(); ++r) {
      if (sorted[r].gold == Label::valid) {
        sum += 1.0 / static_cast<double>(r + 1);
        break;
      }
    }
  }
  return sum / static_cast<double>(groups.size());
}

Prf prf(std::span<const Label> pred, std::span<const Label> gold) {
  if (pred.size() != gold.size()) throw std::invalid_argument("prediction and gold lengths differ");
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == Label::valid;
    const bool g = gold[i] == Label::valid;
    tp += p && g;
    fp += p && !g;
    fn += !p && g;
  }
  Prf out;
  out.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  out.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  const double s = out.precision + out.recall;
  out.f1 = s > 0.0 ? 2.0 * out.precision * out.recall / s : 0.0;
  return out;
}

double select_threshold(std::span<const double> probs, std::span<const Label> gold) {
  if (probs.size() != gold.size()) throw std::invalid_argument("probability and gold lengths differ");
  const std::size_t n = probs.size();
  std::size_t total_pos = 0;
  for (const auto g : gold) total_pos += g == Label::valid ? 1 : 0;
  if (total_pos == 0 || total_pos == n) throw TrainingError("threshold selection needs both classes");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });

  // F1 when everything at sorted position >= `first` is predicted valid.
  // suffix_pos[i] = gold positives among sorted[i..n).
  std::vector<std::size_t> suffix_pos(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix_pos[i] = suffix_pos[i + 1] + (gold[order[i]] == Label::valid ? 1 : 0);
  auto f1_from = [&](std::size_t first) {
    const std::size_t predicted = n - first;
    const std::size_t tp = suffix_pos[first];
    const std::size_t denom = predicted + total_pos;
    return denom ? 2.0 * static_cast<double>(tp) / static_cast<double>(denom) : 0.0;
  };

  double best_t = 0.0;
  double best_f1 = f1_from(0);
  for (std::size_t i = 1; i < n; ++i) {
    const double lo = probs[order[i - 1]];
    const double hi = probs[order[i]];
    if (hi == lo) continue;
    double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo) mid = hi;  // adjacent doubles
    if (const double f = f1_from(i); f > best_f1) {
      best_f1 = f;
      best_t = mid;
    }
  }
  std::size_t first_at_one = n;
  while (first_at_one > 0 && probs[order[first_at_one - 1]] >= 1.0) --first_at_one;
  if (const double f = f1_from(first_at_one); f > best_f1) best_t = 1.0;
  return best_t;
}

std::vector<std::vector<std::size_t>> kfold(std::size_t group_count, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw TrainingError("need at least 2 folds");
  if (group_count < k) {
    throw TrainingError("cannot split " + std::to_string(group_count) + " question groups into " + std::to_string(k) +
                        " folds");
  }
  std::vector<std::size_t> order(group_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < group_count; ++i) folds[i % k].push_back(order[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::string_view to_string(TrainingMode mode) { return mode == TrainingMode::em ? "EM" : "supervised"; }

double t_critical(std::size_t df, double alpha) {
  if (df == 0) throw std::invalid_argument("t distribution needs df >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(boost::math::complement(dist, alpha / 2.0));
}

TTest paired_ttest(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() != b.size()) throw std::invalid_argument("paired samples differ in length");
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("paired t-test needs at least 2 pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 1e-15 * std::max(1.0, std::abs(mean)))) throw std::invalid_argument("degenerate comparison");
  TTest out;
  out.df = n - 1;
  out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  out.critical = t_critical(out.df, alpha);
  out.significant = std::abs(out.t) > out.critical;
  return out;
}

namespace {

nlohmann::ordered_json metrics_json(const Metrics& m) {
  return {{"overall_accuracy", m.overall_accuracy},
          {"mrr", m.mrr},
          {"f1", m.f1},
          {"precision", m.precision},
          {"recall", m.recall}};
}

std::string column_name(const MetricReport& r) {
  std::string name(to_string(r.kind));
  if (r.mode == TrainingMode::em) {
    name += " EM(" + std::to_string(r.iterations) + (r.iterations == 1 ? " it)" : " its)");
  } else {
    name += " sup";
  }
  return name;
}

}  // namespace

std::string report_json(std::span<const MetricReport> reports) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const auto& m : r.per_run) runs.push_back(metrics_json(m));
    nlohmann::ordered_json folds = nlohmann::ordered_json::array();
    for (const auto& f : r.per_fold) {
      auto j = metrics_json(f.metrics);
      j["run"] = f.run;
      j["fold"] = f.fold;
      folds.push_back(std::move(j));
    }
    doc.push_back({{"classifier", to_string(r.kind)},
                   {"mode", to_string(r.mode)},
                   {"iterations", r.iterations},
                   {"mean", metrics_json(r.mean)},
                   {"stddev", metrics_json(r.stddev)},
                   {"per_run", runs},
                   {"per_fold", folds}});
  }
  return doc.dump(2) + "\n";
}

std::string report_table(std::span<const MetricReport> reports) {
  struct Row {
    const char* name;
    double Metrics::*field;
  };
  const Row rows[] = {{"Overall Accuracy", &Metrics::overall_accuracy},
                      {"MRR", &Metrics::mrr},
                      {"F1-score", &Metrics::f1},
                      {"Precision", &Metrics::precision},
                      {"Recall", &Metrics::recall}};
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-18s", "Evaluation Metric");
  out << buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "  %16s", column_name(r).c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%-18s", row.name);
    out << buf;
    for (const auto& r : reports) {
      std::snprintf(buf, sizeof buf, "  %16.4f", r.mean.*row.field);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace cqa
