#pragma once

// Seeded generators for the shipped fixtures.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cqa/corpus.hpp"
#include "cqa/features.hpp"
#include "cqa/lexicon.hpp"
#include "cqa/pipeline.hpp"

namespace cqa::synthetic {

struct ClusterFixtureSpec {
  std::size_t labeled = 40;
  std::size_t groups = 12;
  std::size_t unlabeled = 1000;
  double valid_fraction = 0.3;
  double separation = 3.0;  // distance of each cluster mean from the origin along the mean direction
  std::size_t informative = 2;
  std::uint64_t seed = 42;
};

struct ClusterFixture {
  std::vector<FeatureRow> labeled;  // group ids "q00", "q01", ...
  std::vector<FeatureVector> unlabeled;
};

/// Two Gaussian clusters (unit covariance) in the 13-dimensional feature
/// space, one per label, means at +-separation along a fixed direction that
/// spreads over the first `informative` coordinates.
ClusterFixture make_cluster_fixture(const ClusterFixtureSpec& spec = {});

struct DrugCorpus {
  std::vector<QAThread> threads;
  ConceptLexicon lexicon;
  std::map<std::string, std::string> drug_of;  // thread id -> drug the question asks about
};

/// Yes-No questions about a drug and a complaint; best answers recommend a
/// drug (usually the one asked about), second answers are generic or name
/// another drug.
DrugCorpus make_drug_corpus(std::size_t threads, std::uint64_t seed);

// Valid iff the triplet's answer mentions the drug the prospective question
// asks about.
Label drug_gold(const Triplet& t, const CandidateIndex& index, const DrugCorpus& corpus);

}  // namespace cqa::synthetic
