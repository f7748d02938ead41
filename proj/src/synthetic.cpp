#include "cqa/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "cqa/random.hpp"

namespace cqa::synthetic {

namespace {

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[rng.index(items.size())];
}

std::string fill(std::string text, const std::string& key, const std::string& value) {
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

}  // namespace

ClusterFixture make_cluster_fixture(const ClusterFixtureSpec& spec) {
  Rng rng(spec.seed);
  std::array<double, kFeatureCount> direction{};
  const std::size_t k = std::min<std::size_t>(std::max<std::size_t>(spec.informative, 1), kFeatureCount);
  for (std::size_t f = 0; f < k; ++f) direction[f] = 1.0 / std::sqrt(static_cast<double>(k));

  auto draw = [&](Label y) {
    FeatureVector x;
    const double sign = y == Label::valid ? 1.0 : -1.0;
    for (std::size_t f = 0; f < kFeatureCount; ++f) x[f] = sign * spec.separation * direction[f] + rng.normal();
    return x;
  };
  auto draw_label = [&] { return rng.uniform() < spec.valid_fraction ? Label::valid : Label::invalid; };

  ClusterFixture fx;
  for (std::size_t i = 0; i < spec.labeled; ++i) {
    // Guarantee both classes among the first two rows.
    const Label y = i == 0 ? Label::valid : i == 1 ? Label::invalid : draw_label();
    char group[32];
    std::snprintf(group, sizeof group, "q%02zu", i % spec.groups);
    fx.labeled.push_back({draw(y), y, group});
  }
  for (std::size_t i = 0; i < spec.unlabeled; ++i) fx.unlabeled.push_back(draw(draw_label()));
  return fx;
}

DrugCorpus make_drug_corpus(std::size_t threads, std::uint64_t seed) {
  const std::vector<std::string> drugs{"chlordiazepoxide", "naltrexone", "acamprosate", "disulfiram",
                                       "diazepam",         "lorazepam",  "baclofen",    "topiramate",
                                       "gabapentin",       "oxazepam"};
  const std::vector<std::string> complaints{"withdrawal", "anxiety", "cravings", "insomnia", "tremors", "relapse"};
  const std::vector<std::string> questions{
      "is {drug} good for alcohol {c}?",
      "can {drug} help with {c} after i quit drinking?",
      "should i take {drug} for my {c}?",
      "does {drug} work for {c} when you stop drinking?",
      "is it safe to use {drug} for {c}?",
  };
  const std::vector<std::string> best_answers{
      "{drug} is what my doctor prescribed and it really helped with the {c}.",
      "yes {drug} works for most people, ask your doctor about the dose.",
      "i took {drug} for two weeks and the {c} went away slowly.",
      "{drug} is commonly used for this, but only under medical supervision.",
      "my brother used {drug} and it took the edge off the {c} within days.",
  };
  const std::vector<std::string> generic_answers{
      "just stay strong and talk to someone you trust about the {c}.",
      "see a doctor, everyone reacts differently and nobody here can tell you.",
      "drink lots of water, eat well and give it time, the {c} passes.",
      "go to a meeting, the people there have been through the same thing.",
  };
  const std::vector<std::string> other_drug_answers{
      "i would try {other} instead, it worked better for my {c}.",
      "{other} helped me more than anything else did.",
  };

  DrugCorpus out;
  for (const auto& d : drugs) out.lexicon.add(d, {"pharmacologic substance"});
  out.lexicon.add("alcohol", {"organic chemical"});
  for (const auto& c : complaints) out.lexicon.add(c, {"sign or symptom"});
  out.lexicon.add("doctor", {"professional or occupational group"});

  Rng rng(seed);
  for (std::size_t i = 0; i < threads; ++i) {
    const std::string& drug = pick(rng, drugs);
    const std::string& complaint = pick(rng, complaints);
    char id[32];
    std::snprintf(id, sizeof id, "t%03zu", i);

    QAThread t;
    t.id = id;
    t.title = fill(fill(pick(rng, questions), "{drug}", drug), "{c}", complaint);
    t.description = rng.uniform() < 0.5 ? "i have been sober for a month now." : "";

    // Best answers name the asked drug 70% of the time, otherwise another.
    std::string answer_drug = drug;
    if (rng.uniform() < 0.3) {
      while (answer_drug == drug) answer_drug = pick(rng, drugs);
    }
    t.answers.push_back({fill(fill(pick(rng, best_answers), "{drug}", answer_drug), "{c}", pick(rng, complaints)),
                         static_cast<std::int64_t>(rng.index(20)), true});
    std::string second;
    if (rng.uniform() < 0.5) {
      second = fill(pick(rng, generic_answers), "{c}", pick(rng, complaints));
    } else {
      std::string other = pick(rng, drugs);
      second = fill(fill(pick(rng, other_drug_answers), "{other}", other), "{c}", pick(rng, complaints));
    }
    t.answers.push_back({second, static_cast<std::int64_t>(rng.index(20)), false});
    out.drug_of[t.id] = drug;
    out.threads.push_back(std::move(t));
  }
  return out;
}

Label drug_gold(const Triplet& t, const CandidateIndex& index, const DrugCorpus& corpus) {
  const auto it = corpus.drug_of.find(t.qp.question.source_thread);
  if (it == corpus.drug_of.end()) return Label::invalid;
  return index.answer(t.archive, t.answer_rank).concepts.contains(it->second) ? Label::valid : Label::invalid;
}

}  // namespace cqa::synthetic
