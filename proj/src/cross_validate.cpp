#include <cmath>
#include <exception>
#include <map>

#include "cqa/error.hpp"
#include "cqa/eval.hpp"
#include "cqa/random.hpp"

namespace cqa {

namespace {

struct FoldJob {
  std::size_t run = 0;
  std::size_t fold = 0;
  std::vector<std::size_t> test_rows;
  std::vector<double> probs;  // aligned with test_rows
  double threshold = 0.5;
  std::exception_ptr error;
};

std::vector<QuestionGroup> groups_of(std::span<const FeatureRow> rows, std::span<const std::size_t> idx,
                                     std::span<const double> probs) {
  std::map<std::string, std::size_t> slot;
  std::vector<QuestionGroup> groups;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto& row = rows[idx[i]];
    auto [it, inserted] = slot.try_emplace(row.group, groups.size());
    if (inserted) groups.push_back({row.group, {}});
    groups[it->second].triplets.push_back({*row.label, probs[i]});
  }
  return groups;
}

struct Tally {
  std::vector<Label> pred;
  std::vector<Label> gold;
  std::size_t groups = 0;
  std::size_t correct = 0;
  double reciprocal_sum = 0.0;
  std::size_t valid_groups = 0;

  void add(std::span<const FeatureRow> rows, const FoldJob& job) {
    for (std::size_t i = 0; i < job.test_rows.size(); ++i) {
      pred.push_back(job.probs[i] >= job.threshold ? Label::valid : Label::invalid);
      gold.push_back(*rows[job.test_rows[i]].label);
    }
    for (const auto& g : groups_of(rows, job.test_rows, job.probs)) {
      ++groups;
      correct += group_correct(g, job.threshold) ? 1 : 0;
      if (g.has_valid()) {
        const QuestionGroup one[] = {g};
        reciprocal_sum += mrr(one);
        ++valid_groups;
      }
    }
  }

  Metrics metrics() const {
    Metrics m;
    const Prf p = prf(pred, gold);
    m.precision = p.precision;
    m.recall = p.recall;
    m.f1 = p.f1;
    m.overall_accuracy = groups ? static_cast<double>(correct) / static_cast<double>(groups) : 0.0;
    m.mrr = valid_groups ? reciprocal_sum / static_cast<double>(valid_groups) : 0.0;
    return m;
  }
};

void run_job(FoldJob& job, std::span<const FeatureRow> labeled, std::span<const FeatureVector> unlabeled,
             const std::vector<std::size_t>& train_rows, const CrossValidationConfig& config, std::uint64_t seed) {
  std::vector<LabeledRow> rows;
  rows.reserve(train_rows.size());
  for (const std::size_t i : train_rows) rows.push_back({labeled[i].x, *labeled[i].label});
  const LabeledSet set = LabeledSet::from_rows(std::move(rows));
  const RankModel model = config.mode == TrainingMode::em
                              ? train_em(set, unlabeled, config.kind, config.hyper, config.em, seed)
                              : train_supervised(set, config.kind, config.hyper, seed);
  job.threshold = model.threshold;
  job.probs.reserve(job.test_rows.size());
  for (const std::size_t i : job.test_rows) job.probs.push_back(model.predict_proba(labeled[i].x));
}

Metrics mean_of(const std::vector<Metrics>& ms) {
  Metrics out;
  for (const auto& m : ms) {
    out.overall_accuracy += m.overall_accuracy;
    out.mrr += m.mrr;
    out.precision += m.precision;
    out.recall += m.recall;
    out.f1 += m.f1;
  }
  const double n = static_cast<double>(ms.size());
  out.overall_accuracy /= n;
  out.mrr /= n;
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  return out;
}

Metrics stddev_of(const std::vector<Metrics>& ms, const Metrics& mean) {
  Metrics out;
  if (ms.size() < 2) return out;
  for (const auto& m : ms) {
    out.overall_accuracy += std::pow(m.overall_accuracy - mean.overall_accuracy, 2);
    out.mrr += std::pow(m.mrr - mean.mrr, 2);
    out.precision += std::pow(m.precision - mean.precision, 2);
    out.recall += std::pow(m.recall - mean.recall, 2);
    out.f1 += std::pow(m.f1 - mean.f1, 2);
  }
  const double d = static_cast<double>(ms.size() - 1);
  out.overall_accuracy = std::sqrt(out.overall_accuracy / d);
  out.mrr = std::sqrt(out.mrr / d);
  out.precision = std::sqrt(out.precision / d);
  out.recall = std::sqrt(out.recall / d);
  out.f1 = std::sqrt(out.f1 / d);
  return out;
}

}  // namespace

MetricReport cross_validate(std::span<const FeatureRow> labeled, std::span<const FeatureVector> unlabeled,
                            const CrossValidationConfig& config) {
  if (config.runs == 0) throw TrainingError("need at least one run");
  std::map<std::string, std::size_t> group_slot;
  std::vector<std::vector<std::size_t>> group_rows;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (!labeled[i].label) throw TrainingError("cross-validation rows must be labeled");
    auto [it, inserted] = group_slot.try_emplace(labeled[i].group, group_rows.size());
    if (inserted) group_rows.emplace_back();
    group_rows[it->second].push_back(i);
  }

  std::vector<FoldJob> jobs;
  std::vector<std::vector<std::size_t>> train_sets;
  std::vector<std::uint64_t> job_seeds;
  for (std::size_t run = 0; run < config.runs; ++run) {
    const std::uint64_t run_seed = derive_seed(config.seed, run);
    const auto folds = kfold(group_rows.size(), config.folds, derive_seed(run_seed, 0));
    std::vector<std::size_t> fold_of(group_rows.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
      for (const std::size_t g : folds[f]) fold_of[g] = f;
    }
    for (std::size_t f = 0; f < folds.size(); ++f) {
      FoldJob job;
      job.run = run;
      job.fold = f;
      std::vector<std::size_t> train;
      for (std::size_t g = 0; g < group_rows.size(); ++g) {
        auto& dest = fold_of[g] == f ? job.test_rows : train;
        dest.insert(dest.end(), group_rows[g].begin(), group_rows[g].end());
      }
      std::sort(job.test_rows.begin(), job.test_rows.end());
      std::sort(train.begin(), train.end());
      jobs.push_back(std::move(job));
      train_sets.push_back(std::move(train));
      job_seeds.push_back(derive_seed(run_seed, 1 + f));
    }
  }

  const auto n_jobs = static_cast<std::int64_t>(jobs.size());
  if (config.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t j = 0; j < n_jobs; ++j) {
      try {
        run_job(jobs[j], labeled, unlabeled, train_sets[j], config, job_seeds[j]);
      } catch (...) {
        jobs[j].error = std::current_exception();
      }
    }
  } else {
    for (std::int64_t j = 0; j < n_jobs; ++j) {
      try {
        run_job(jobs[j], labeled, unlabeled, train_sets[j], config, job_seeds[j]);
      } catch (...) {
        jobs[j].error = std::current_exception();
      }
    }
  }
  for (const auto& job : jobs) {
    if (job.error) std::rethrow_exception(job.error);
  }

  MetricReport report;
  report.kind = config.kind;
  report.mode = config.mode;
  report.iterations = config.mode == TrainingMode::em ? config.em.iterations : 0;
  std::vector<Tally> per_run(config.runs);
  for (const auto& job : jobs) {
    per_run[job.run].add(labeled, job);
    Tally fold;
    fold.add(labeled, job);
    report.per_fold.push_back({job.run, job.fold, fold.metrics()});
  }
  for (const auto& t : per_run) report.per_run.push_back(t.metrics());
  report.mean = mean_of(report.per_run);
  report.stddev = stddev_of(report.per_run, report.mean);
  return report;
}

}  // namespace cqa
