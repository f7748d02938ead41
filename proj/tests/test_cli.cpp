#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cqa/cli.hpp"
#include "cqa/corpus.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using cqa::cli::run;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result cqa_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("cqa_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

const std::string kFixtures = CQA_DATA_DIR "/fixtures";

}  // namespace

TEST_CASE("ingest summarizes all buckets") {
  Workdir w;
  const auto r = cqa_cli({"ingest", "--corpus", kFixtures + "/drug/corpus.jsonl", "--lexicon",
                          kFixtures + "/drug/lexicon.tsv", "--out", w / "index.json"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(w / "index.json"));
  for (auto cls : cqa::kAllQuestionClasses) CHECK(r.out.find(std::string(cqa::to_string(cls))) != std::string::npos);
}

TEST_CASE("input errors exit with 2") {
  Workdir w;
  CHECK(cqa_cli({"ingest", "--corpus", w / "missing.jsonl", "--out", w / "i.json"}).code == 2);
  CHECK(cqa_cli({"ingest"}).code == 2);
  CHECK(cqa_cli({"frobnicate"}).code == 2);
  CHECK(cqa_cli({"--help"}).code == 0);

  {
    std::ofstream(w / "unresolved.jsonl") << R"({"id":"x","title":"is it ok?","answers":[{"text":"no"}]})" << '\n';
  }
  const auto r = cqa_cli({"ingest", "--corpus", w / "unresolved.jsonl", "--out", w / "i.json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("no resolvable threads") != std::string::npos);

  {
    std::ofstream(w / "bad.jsonl") << R"({"id":"x","title":"t","answers":[]})" << "\n{oops\n";
  }
  const auto bad = cqa_cli({"ingest", "--corpus", w / "bad.jsonl", "--out", w / "i.json"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("bad.jsonl") != std::string::npos);
  CHECK(bad.err.find("line 2") != std::string::npos);

  CHECK(cqa_cli({"candidates", "--index", w / "nope.json", "--title", "is it?"}).code == 2);
  { std::ofstream(w / "junk.json") << "not an index"; }
  CHECK(cqa_cli({"candidates", "--index", w / "junk.json", "--title", "is it?"}).code == 2);
  CHECK(cqa_cli({"evaluate", "--features", kFixtures + "/synthetic_features.csv", "--weight", "1.5"}).code == 2);
}

TEST_CASE("candidates and answers on a small corpus") {
  Workdir w;
  {
    std::ofstream out(w / "corpus.jsonl");
    cqa::write_corpus(out, fixture::small_corpus());
  }
  REQUIRE(cqa_cli({"ingest", "--corpus", w / "corpus.jsonl", "--out", w / "index.json"}).code == 0);

  auto r = cqa_cli({"candidates", "--index", w / "index.json", "--title", "is librium safe for insomnia?"});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 8);

  r = cqa_cli({"candidates", "--index", w / "index.json", "--title", "who should i call?"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());

  CHECK(cqa_cli({"candidates", "--index", w / "index.json", "--title", ""}).code == 2);
}

TEST_CASE("train, evaluate and answer on the shipped fixtures") {
  Workdir w;
  const std::string drug = kFixtures + "/drug";
  REQUIRE(cqa_cli({"ingest", "--corpus", drug + "/corpus.jsonl", "--lexicon", drug + "/lexicon.tsv", "--out",
                   w / "index.json"})
              .code == 0);

  auto r = cqa_cli({"train", "--index", w / "index.json", "--labels", drug + "/labels.jsonl", "--mode", "em",
                    "--out", w / "model.json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("labeled 112") != std::string::npos);
  CHECK(r.out.find("unlabeled") != std::string::npos);

  r = cqa_cli({"answer", "--index", w / "index.json", "--model", w / "model.json", "--title",
               "is baclofen good for tremors when you quit?"});
  CHECK(r.code == 0);
  CHECK_FALSE(r.out.empty());

  r = cqa_cli({"answer", "--index", w / "index.json", "--model", w / "model.json", "--title", "who can help me?"});
  CHECK(r.code == 0);
  CHECK(r.out == "no valid answer\n");

  r = cqa_cli({"answer", "--index", w / "index.json", "--model", w / "model.json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("empty question") != std::string::npos);
  CHECK(cqa_cli({"answer", "--index", w / "index.json", "--model", w / "none.json", "--title", "is it?"}).code == 2);

  r = cqa_cli({"evaluate", "--index", w / "index.json", "--labels", drug + "/labels.jsonl", "--classifier", "log",
               "--classifier", "svm", "--out", w / "report"});
  REQUIRE(r.code == 0);
  CHECK(slurp(w / "report.txt") == r.out);
  CHECK(slurp(w / "report.json").find("\"SVM\"") != std::string::npos);
}

TEST_CASE("training errors exit with 3") {
  Workdir w;
  const std::string drug = kFixtures + "/drug";
  REQUIRE(cqa_cli({"ingest", "--corpus", drug + "/corpus.jsonl", "--lexicon", drug + "/lexicon.tsv", "--out",
                   w / "index.json"})
              .code == 0);
  {
    std::ofstream(w / "labels.jsonl") << R"({"qp_id":"t000","qt_id":"ghost","answer_rank":1,"label":"valid"})"
                                      << '\n';
  }
  const auto r = cqa_cli({"train", "--index", w / "index.json", "--labels", w / "labels.jsonl", "--out",
                          w / "model.json"});
  CHECK(r.code == 3);
  CHECK(r.err.find("ghost") != std::string::npos);

  CHECK(cqa_cli({"evaluate", "--features", kFixtures + "/synthetic_features.csv", "--folds", "13"}).code == 3);
  CHECK(cqa_cli({"evaluate", "--features", kFixtures + "/synthetic_features.csv", "--folds", "1"}).code == 3);
}

TEST_CASE("config file sits between defaults and flags") {
  Workdir w;
  const std::string csv = kFixtures + "/synthetic_features.csv";
  {
    std::ofstream(w / "run.ini") << "[train]\nclassifier=log\nepochs=20\n";
  }
  auto r = cqa_cli({"--config", w / "run.ini", "train", "--features", csv, "--out", w / "m.json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("classifier LOG") != std::string::npos);
  r = cqa_cli({"--config", w / "run.ini", "train", "--features", csv, "--classifier", "svm", "--out", w / "m.json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("classifier SVM") != std::string::npos);
}

TEST_CASE("synthetic fixtures regenerate byte-identically") {
  Workdir w;
  REQUIRE(cqa_cli({"synth", "--out", w / "clusters.csv"}).code == 0);
  CHECK(slurp(w / "clusters.csv") == slurp(kFixtures + "/synthetic_features.csv"));
  REQUIRE(cqa_cli({"synth", "--kind", "corpus", "--out", w / "drug"}).code == 0);
  for (const char* f : {"corpus.jsonl", "labels.jsonl", "lexicon.tsv"}) {
    CHECK(slurp(w / (std::string("drug/") + f)) == slurp(kFixtures + "/drug/" + f));
  }
}
