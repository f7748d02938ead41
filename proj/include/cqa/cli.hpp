#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cqa::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitTraining = 3;

struct RunConfig {
  std::string corpus;
  std::string stopwords = CQA_DATA_DIR "/stopwords.txt";
  std::string lexicon = CQA_DATA_DIR "/lexicon.tsv";
  std::string triggers = CQA_DATA_DIR "/triggers.tsv";
  std::vector<std::string> treatment_types;
  std::string index;
  std::string labels;
  std::string features;
  std::string model;
  double weight = 0.5;
  std::vector<std::string> classifiers{"nnet_l2"};
  std::vector<std::string> modes{"supervised"};
  std::size_t iterations = 1;
  std::optional<std::size_t> subset_size;
  std::size_t folds = 10;
  std::size_t runs = 1;
  std::uint64_t seed = 42;
  std::optional<double> threshold;
  std::string out;
  std::size_t epochs = 200;
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  double l2 = 1e-3;
  std::size_t hidden = 8;
  std::vector<std::size_t> exclude_features;  // 1-based feature numbers
  std::size_t bins = 10;
  std::string title;
  std::string description;
  std::string synth_kind = "clusters";
  std::size_t synth_threads = 60;
};

// Parses argv, runs one subcommand, and returns its exit code. Normal output
// goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cqa::cli
