#include "cqa/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cqa/corpus.hpp"
#include "cqa/error.hpp"
#include "cqa/eval.hpp"
#include "cqa/features.hpp"
#include "cqa/index_store.hpp"
#include "cqa/kernels.hpp"
#include "cqa/learn.hpp"
#include "cqa/lexicon.hpp"
#include "cqa/pipeline.hpp"
#include "cqa/question.hpp"
#include "cqa/synthetic.hpp"
#include "cqa/textproc.hpp"

namespace cqa::cli {
namespace {

namespace fs = std::filesystem;

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw InputError(std::string("missing --") + what);
  if (!fs::is_regular_file(path)) throw InputError(std::string(what) + " not found: " + path);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

void validate(const RunConfig& c) {
  if (!(c.weight > 0.0 && c.weight <= 1.0)) throw InputError("--weight must lie in (0, 1]");
  if (c.iterations < 1) throw InputError("--iterations must be at least 1");
  if (c.runs < 1) throw InputError("--runs must be at least 1");
  if (c.subset_size && *c.subset_size == 0) throw InputError("--subset-size must be positive");
  if (c.threshold && !(*c.threshold > 0.0 && *c.threshold < 1.0)) throw InputError("--threshold must lie in (0, 1)");
  for (auto f : c.exclude_features) {
    if (f < 1 || f > kFeatureCount) throw InputError("--exclude-features takes numbers 1-13");
  }
}

ClassifierKind classifier_of(const std::string& name) {
  auto kind = parse_classifier(name);
  if (!kind) throw InputError("unknown classifier " + name);
  return *kind;
}

TrainingMode mode_of(const std::string& name) {
  if (name == "supervised") return TrainingMode::supervised;
  if (name == "em") return TrainingMode::em;
  throw InputError("unknown mode " + name);
}

Hyperparameters hyperparameters(const RunConfig& c) {
  Hyperparameters h;
  h.epochs = c.epochs;
  h.learning_rate = c.learning_rate;
  h.batch_size = c.batch_size;
  h.l2 = c.l2;
  h.hidden = c.hidden;
  for (auto f : c.exclude_features) h.mask.reset(f - 1);
  return h;
}

CandidateIndex open_index(const RunConfig& c) {
  require_file(c.index, "index");
  return load_index(c.index);
}

StopList open_stops(const RunConfig& c) {
  require_file(c.stopwords, "stopwords");
  return StopList::load(c.stopwords);
}

struct Dataset {
  std::vector<FeatureRow> labeled;
  std::vector<FeatureVector> unlabeled;
};

// Triplet features for a labels file plus every other candidate as the
// unlabeled pool.
Dataset dataset_from_index(const CandidateIndex& index, const std::vector<LabelRecord>& labels, const StopList& stops,
                           double weight) {
  Dataset d;
  std::vector<Triplet> labeled;
  std::set<TripletKey> seen;
  labeled.reserve(labels.size());
  for (const auto& record : labels) {
    labeled.push_back(make_labeled_triplet(record, index, weight));
    seen.insert(key_of(labeled.back(), index));
  }
  const auto lx = kernels::featurize_all(Execution::parallel, labeled, index, stops);
  for (std::size_t i = 0; i < labeled.size(); ++i) d.labeled.push_back({lx[i], labels[i].label, labels[i].qp_id});

  std::vector<Triplet> pool;
  for (auto& t : candidate_pool(index, {.weight = weight})) {
    if (!seen.contains(key_of(t, index))) pool.push_back(std::move(t));
  }
  d.unlabeled = kernels::featurize_all(Execution::parallel, pool, index, stops);
  return d;
}

Dataset load_dataset(const RunConfig& c) {
  if (!c.features.empty()) {
    require_file(c.features, "features");
    std::ifstream in(c.features);
    Dataset d;
    std::vector<FeatureRow> rows;
    try {
      rows = read_feature_csv(in);
    } catch (const InputError& e) {
      throw InputError(c.features + ": " + e.what());
    }
    for (auto& row : rows) {
      if (row.label) {
        d.labeled.push_back(std::move(row));
      } else {
        d.unlabeled.push_back(row.x);
      }
    }
    return d;
  }
  if (c.index.empty() || c.labels.empty()) throw InputError("need --features, or --index with --labels");
  const auto index = open_index(c);
  const auto stops = open_stops(c);
  require_file(c.labels, "labels");
  return dataset_from_index(index, load_labels(c.labels), stops, c.weight);
}

int cmd_ingest(const RunConfig& c, std::ostream& out) {
  require_file(c.corpus, "corpus");
  require_file(c.lexicon, "lexicon");
  require_file(c.triggers, "triggers");
  require_file(c.stopwords, "stopwords");
  if (c.out.empty()) throw InputError("missing --out");
  StopList::load(c.stopwords);  // validated here so later commands never fail on it

  const auto corpus = load_corpus(c.corpus);
  const auto lexicon = ConceptLexicon::load(c.lexicon);
  const auto triggers = TriggerTable::load(c.triggers);
  TypeSet treatment = default_treatment_types();
  if (!c.treatment_types.empty()) treatment = TypeSet(c.treatment_types.begin(), c.treatment_types.end());
  for (const auto& type : treatment) {
    if (!lexicon.vocabulary().contains(type)) throw InputError("unknown treatment type " + type);
  }

  const auto index = build_index(corpus, lexicon, triggers, treatment);
  save_index(c.out, index);

  const auto archived = std::count_if(index.threads.begin(), index.threads.end(),
                                      [](const IndexedThread& t) { return t.in_archive(); });
  out << "threads " << index.threads.size() << ", archived " << archived << ", sub-questions "
      << index.subquestion_count() << '\n';
  for (auto cls : kAllQuestionClasses) {
    out << std::left << std::setw(16) << to_string(cls) << index.bucket(cls).size() << '\n';
  }
  return kExitOk;
}

int cmd_candidates(const RunConfig& c, std::ostream& out) {
  const auto index = open_index(c);
  if (tokenize(c.title).empty() && tokenize(c.description).empty()) throw InputError("empty question");
  std::ofstream file;
  std::ostream* sink = &out;
  if (!c.out.empty()) {
    file = open_out(c.out);
    sink = &file;
  }
  for (auto& sq : extract_subquestions(c.title, c.description, index.triggers)) {
    for (const auto& t : extract_candidates(prepare_question(std::move(sq), index), index, {.weight = c.weight})) {
      *sink << candidate_json(t, index) << '\n';
    }
  }
  return kExitOk;
}

int cmd_train(const RunConfig& c, std::ostream& out) {
  if (c.out.empty()) throw InputError("missing --out");
  const auto kind = classifier_of(c.classifiers.front());
  if (c.classifiers.size() != 1) throw InputError("train takes exactly one --classifier");
  if (c.modes.size() != 1) throw InputError("train takes exactly one --mode");
  const auto mode = mode_of(c.modes.front());
  const auto data = load_dataset(c);

  std::vector<LabeledRow> rows;
  rows.reserve(data.labeled.size());
  for (const auto& r : data.labeled) rows.push_back({r.x, *r.label});
  const auto set = LabeledSet::from_rows(std::move(rows));
  const auto hyper = hyperparameters(c);

  RankModel model = mode == TrainingMode::em
                        ? train_em(set, data.unlabeled, kind, hyper, {c.iterations, c.subset_size}, c.seed)
                        : train_supervised(set, kind, hyper, c.seed);
  if (c.threshold) model.threshold = *c.threshold;
  save_model(c.out, model);

  out << "classifier " << to_string(kind) << ", mode " << to_string(mode);
  if (mode == TrainingMode::em) out << " (" << c.iterations << (c.iterations == 1 ? " iteration)" : " iterations)");
  out << '\n';
  out << "labeled " << set.rows.size() << " (" << set.positives() << " valid), unlabeled "
      << data.unlabeled.size() << '\n';
  out << "threshold " << fixed(model.threshold) << '\n';
  return kExitOk;
}

int cmd_evaluate(const RunConfig& c, std::ostream& out) {
  if (c.folds < 2) throw TrainingError("--folds must be at least 2");
  const auto data = load_dataset(c);
  std::vector<MetricReport> reports;
  for (const auto& name : c.classifiers) {
    for (const auto& mode_name : c.modes) {
      CrossValidationConfig cv;
      cv.kind = classifier_of(name);
      cv.mode = mode_of(mode_name);
      cv.hyper = hyperparameters(c);
      cv.em = {c.iterations, c.subset_size};
      cv.folds = c.folds;
      cv.runs = c.runs;
      cv.seed = c.seed;
      reports.push_back(cross_validate(data.labeled, data.unlabeled, cv));
    }
  }
  const auto table = report_table(reports);
  if (!c.out.empty()) {
    open_out(c.out + ".json") << report_json(reports);
    open_out(c.out + ".txt") << table;
  }
  out << table;
  return kExitOk;
}

int cmd_answer(const RunConfig& c, std::ostream& out) {
  const auto index = open_index(c);
  require_file(c.model, "model");
  const auto model = load_model(c.model);
  const auto stops = open_stops(c);
  const auto result = answer(c.title, c.description, index, model, stops, {.weight = c.weight});
  if (result.no_valid_answer()) {
    out << "no valid answer\n";
    return kExitOk;
  }
  for (const auto& a : result.answers) out << fixed(a.probability) << '\t' << a.text << '\n';
  return kExitOk;
}

int cmd_features(const RunConfig& c, std::ostream& out) {
  if (c.out.empty()) throw InputError("missing --out");
  const auto data = load_dataset(c);
  std::vector<FeatureRow> rows = data.labeled;
  for (const auto& x : data.unlabeled) rows.push_back({x, std::nullopt, ""});
  auto file = open_out(c.out);
  write_feature_csv(file, rows);
  out << "rows " << rows.size() << " (" << data.labeled.size() << " labeled)\n";
  return kExitOk;
}

int cmd_infogain(const RunConfig& c, std::ostream& out) {
  if (c.bins < 1) throw InputError("--bins must be positive");
  const auto data = load_dataset(c);
  std::vector<FeatureVector> xs;
  std::vector<Label> ys;
  for (const auto& r : data.labeled) {
    xs.push_back(r.x);
    ys.push_back(*r.label);
  }
  if (xs.empty()) throw TrainingError("no labeled rows");
  for (const auto& g : rank_features(xs, ys, c.bins)) {
    out << std::left << std::setw(6) << feature_name(g.feature) << fixed(g.gain) << '\n';
  }
  return kExitOk;
}

int cmd_synth(const RunConfig& c, std::ostream& out) {
  if (c.out.empty()) throw InputError("missing --out");
  if (c.synth_kind == "clusters") {
    synthetic::ClusterFixtureSpec spec;
    spec.seed = c.seed;
    const auto fx = synthetic::make_cluster_fixture(spec);
    std::vector<FeatureRow> rows = fx.labeled;
    for (const auto& x : fx.unlabeled) rows.push_back({x, std::nullopt, ""});
    auto file = open_out(c.out);
    write_feature_csv(file, rows);
    out << "rows " << rows.size() << " (" << fx.labeled.size() << " labeled)\n";
    return kExitOk;
  }
  if (c.synth_kind != "corpus") throw InputError("--kind must be clusters or corpus");

  // A drug-question corpus with its lexicon, and gold labels for the
  // candidates of the first third of the threads.
  require_file(c.triggers, "triggers");
  fs::create_directories(c.out);
  const auto corpus = synthetic::make_drug_corpus(c.synth_threads, c.seed);
  const auto index = build_index(corpus.threads, corpus.lexicon, TriggerTable::load(c.triggers));
  std::set<std::string> annotated;
  for (std::size_t i = 0; i < corpus.threads.size() / 3; ++i) annotated.insert(corpus.threads[i].id);
  std::vector<LabelRecord> labels;
  for (const auto& t : candidate_pool(index, {.weight = c.weight})) {
    if (!annotated.contains(t.qp.question.source_thread)) continue;
    const auto key = key_of(t, index);
    labels.push_back({key.qp_id, key.qt_id, key.answer_rank, synthetic::drug_gold(t, index, corpus), key.qp_sub,
                      key.qt_sub});
  }
  save_corpus(fs::path(c.out) / "corpus.jsonl", corpus.threads);
  auto lex = open_out((fs::path(c.out) / "lexicon.tsv").string());
  write_lexicon(lex, corpus.lexicon);
  auto lab = open_out((fs::path(c.out) / "labels.jsonl").string());
  write_labels(lab, labels);
  out << "threads " << corpus.threads.size() << ", labels " << labels.size() << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::size_t subset = 0;
  double threshold = 0.0;

  CLI::App app{"Answer ranking for community health questions"};
  app.set_config("--config", "", "INI/TOML file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", c.seed, "Seed for every random component")->capture_default_str();

  const auto paths = [&](CLI::App* s) {
    s->add_option("--stopwords", c.stopwords, "Stop-word list")->capture_default_str();
  };
  const auto weight = [&](CLI::App* s) {
    s->add_option("--weight", c.weight, "Concept weight in (0, 1]")->capture_default_str();
  };
  const auto data = [&](CLI::App* s) {
    s->add_option("--index", c.index, "Index written by ingest");
    s->add_option("--labels", c.labels, "Annotated triplets (JSON lines)");
    s->add_option("--features", c.features, "Feature CSV used instead of --index/--labels");
    paths(s);
    weight(s);
  };
  const auto learning = [&](CLI::App* s) {
    s->add_option("--classifier", c.classifiers, "log, nnet, nnet_l2 or svm")->capture_default_str();
    s->add_option("--mode", c.modes, "supervised or em")->capture_default_str();
    s->add_option("--iterations", c.iterations, "EM iterations")->capture_default_str();
    s->add_option("--subset-size", subset, "Unlabeled rows drawn per EM iteration (default: all)");
    s->add_option("--epochs", c.epochs)->capture_default_str();
    s->add_option("--learning-rate", c.learning_rate)->capture_default_str();
    s->add_option("--batch-size", c.batch_size, "0 = full batch")->capture_default_str();
    s->add_option("--l2", c.l2)->capture_default_str();
    s->add_option("--hidden", c.hidden)->capture_default_str();
    s->add_option("--exclude-features", c.exclude_features, "Feature numbers (1-13) to drop");
  };
  const auto question = [&](CLI::App* s) {
    s->add_option("--title", c.title, "Question title");
    s->add_option("--description", c.description, "Question description");
  };

  auto* ingest = app.add_subcommand("ingest", "Build the candidate index from a corpus");
  ingest->add_option("--corpus", c.corpus, "Corpus (JSON lines)")->required();
  ingest->add_option("--lexicon", c.lexicon, "Concept lexicon")->capture_default_str();
  ingest->add_option("--triggers", c.triggers, "Question-class trigger table")->capture_default_str();
  ingest->add_option("--treatment-types", c.treatment_types, "Semantic types that trigger reweighting");
  ingest->add_option("--out", c.out, "Index path")->required();
  paths(ingest);

  auto* candidates = app.add_subcommand("candidates", "Dump candidate triplets for a question");
  candidates->add_option("--index", c.index, "Index written by ingest")->required();
  candidates->add_option("--out", c.out, "Output file (default: stdout)");
  question(candidates);
  weight(candidates);

  auto* train = app.add_subcommand("train", "Train a ranking model");
  data(train);
  learning(train);
  train->add_option("--threshold", threshold, "Override the selected threshold");
  train->add_option("--out", c.out, "Model path")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate classifiers");
  data(evaluate);
  learning(evaluate);
  evaluate->add_option("--folds", c.folds)->capture_default_str();
  evaluate->add_option("--runs", c.runs)->capture_default_str();
  evaluate->add_option("--out", c.out, "Report prefix: writes <out>.json and <out>.txt");

  auto* ask = app.add_subcommand("answer", "Rank archive answers for a new question");
  ask->add_option("--index", c.index, "Index written by ingest")->required();
  ask->add_option("--model", c.model, "Model written by train")->required();
  question(ask);
  paths(ask);
  weight(ask);

  auto* features = app.add_subcommand("features", "Export the triplet feature matrix");
  data(features);
  features->add_option("--out", c.out, "CSV path")->required();

  auto* infogain = app.add_subcommand("infogain", "Rank features by information gain");
  data(infogain);
  infogain->add_option("--bins", c.bins)->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Write synthetic fixtures");
  synth->add_option("--kind", c.synth_kind, "clusters (feature CSV) or corpus (directory)")->capture_default_str();
  synth->add_option("--threads", c.synth_threads, "Threads in the synthetic corpus")->capture_default_str();
  synth->add_option("--triggers", c.triggers)->capture_default_str();
  synth->add_option("--out", c.out)->required();
  weight(synth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  for (auto* s : {train, evaluate}) {
    if (s->count("--subset-size") > 0) c.subset_size = subset;
  }
  if (train->count("--threshold") > 0) c.threshold = threshold;

  try {
    validate(c);
    if (*ingest) return cmd_ingest(c, out);
    if (*candidates) return cmd_candidates(c, out);
    if (*train) return cmd_train(c, out);
    if (*evaluate) return cmd_evaluate(c, out);
    if (*ask) return cmd_answer(c, out);
    if (*features) return cmd_features(c, out);
    if (*infogain) return cmd_infogain(c, out);
    if (*synth) return cmd_synth(c, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const TrainingError& e) {
    err << "error: " << e.what() << '\n';
    return kExitTraining;
  }
  return kExitInput;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"cqa"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cqa::cli
