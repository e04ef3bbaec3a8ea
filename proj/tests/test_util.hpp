// Copyright 2026 The seclabel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Helpers shared by the unit and acceptance binaries: scratch directories,
// random corpora, and independent oracles.

#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "random.hpp"
#include "seclabel/corpus.hpp"
#include "seclabel/eval.hpp"
#include "seclabel/features.hpp"
#include "seclabel/tagger.hpp"

namespace seclabel::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("seclabel-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Random description with valid IOB tags, random POS, and matching
// provenance. Words mix plain, shaped, version-like and non-ASCII forms.
inline AnnotatedDescription RandomDescription(internal::Rng& rng, std::size_t index,
                                              std::size_t max_tokens = 12) {
  static const std::vector<std::string> kWords = {
      "Apple", "Safari", "before", "2.5",  ",",        "allows", "remote", "attackers",
      "to",    "mshtml.dll", "getFoo", "snake_case", "(", ")", "caf\xc3\xa9", "CVE-2012-0678",
      "x",     "execute", "code",  "in",   "Internet", "Explorer", ";", "1.1.4"};
  static const std::vector<std::string> kPos = {"NOUN", "PROP", "NUM", "PUNCT", "ADP", "X"};
  const std::size_t n = 1 + rng.Below(max_tokens);
  std::string raw;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) raw += rng.Chance(0.1) ? "  " : rng.Chance(0.05) ? "\t" : " ";
    raw += rng.Pick(kWords);
  }
  AnnotatedDescription d = MakeDescription("desc-" + std::to_string(index),
                                           static_cast<SourceKind>(rng.Below(5)), raw);
  std::optional<EntityLabel> open;
  for (AnnotatedToken& t : d.tokens) {
    t.pos = rng.Pick(kPos);
    double r = rng.Unit();
    if (open && r < 0.3) {
      t.iob = IobTag::I(open);
    } else if (r < 0.6) {
      open = kAllEntityLabels[rng.Below(kAllEntityLabels.size())];
      t.iob = IobTag::B(open);
    } else {
      open.reset();
      t.iob = IobTag::O();
    }
    t.provenance = t.iob.is_outside() ? Provenance::kNone
                                      : static_cast<Provenance>(rng.Below(4));
  }
  return d;
}

inline Corpus RandomCorpus(internal::Rng& rng, std::size_t max_descriptions,
                           std::size_t max_tokens = 12) {
  Corpus c;
  const std::size_t n = rng.Below(max_descriptions + 1);
  for (std::size_t i = 0; i < n; ++i) c.descriptions.push_back(RandomDescription(rng, i, max_tokens));
  return c;
}

// Brute-force averaged perceptron: dense snapshot of every weight after
// every example, summed and divided at the end. Mirrors teacher-forced
// stage-1 training in corpus order.
struct OracleModel {
  std::map<std::string, std::vector<double>> averaged;
  std::size_t steps = 0;
};

inline OracleModel OracleAveragedPerceptron(const Corpus& corpus, Stage stage,
                                            std::size_t iterations,
                                            const TemplateGroups& groups) {
  const std::vector<std::string> tagset = DefaultTagset(stage);
  const std::size_t k = tagset.size();
  const TrainGazetteers gaz = stage == Stage::kDomain ? CollectTrainGazetteers(corpus)
                                                      : TrainGazetteers{};
  struct Example {
    FeatureSet features;
    std::size_t gold;
  };
  std::vector<Example> examples;
  for (const AnnotatedDescription& d : corpus.descriptions) {
    SentenceContext ctx = MakeSentenceContext(d.tokens);
    std::vector<std::string> gold, iob;
    for (const auto& t : d.tokens) {
      gold.push_back(StageTag(t, stage));
      iob.push_back(StageTag(t, Stage::kIob));
    }
    for (std::size_t i = 0; i < gold.size(); ++i) {
      std::string p1 = i >= 1 ? gold[i - 1] : std::string(kStartSymbol);
      std::string p2 = i >= 2 ? gold[i - 2] : std::string(kStartSymbol);
      FeatureSet f = stage == Stage::kIob ? IobFeatures(ctx, i, p1, p2, groups)
                                          : DomainFeatures(ctx, i, iob, p1, p2, gaz, groups);
      std::size_t g = 0;
      while (tagset[g] != gold[i]) ++g;
      examples.push_back({std::move(f), g});
    }
  }

  std::map<std::string, std::vector<double>> w, sum;
  OracleModel out;
  for (std::size_t epoch = 0; epoch < iterations; ++epoch) {
    for (const Example& e : examples) {
      std::vector<double> score(k, 0.0);
      for (const std::string& f : e.features) {
        auto it = w.find(f);
        if (it == w.end()) continue;
        for (std::size_t t = 0; t < k; ++t) score[t] += it->second[t];
      }
      std::size_t pred = 0;
      for (std::size_t t = 1; t < k; ++t) {
        if (score[t] > score[pred]) pred = t;
      }
      if (pred != e.gold) {
        for (const std::string& f : e.features) {
          auto& row = w.try_emplace(f, std::vector<double>(k, 0.0)).first->second;
          row[e.gold] += 1.0;
          row[pred] -= 1.0;
        }
      }
      ++out.steps;
      for (const auto& [f, row] : w) {
        auto& s = sum.try_emplace(f, std::vector<double>(k, 0.0)).first->second;
        for (std::size_t t = 0; t < k; ++t) s[t] += row[t];
      }
    }
  }
  for (auto& [f, s] : sum) {
    for (double& v : s) v /= static_cast<double>(out.steps);
    out.averaged[f] = s;
  }
  return out;
}

// Largest |model - oracle| over every coordinate either side knows about.
inline double MaxDeviation(const FeatureWeights& model, const OracleModel& oracle,
                           std::size_t num_tags) {
  double worst = 0.0;
  for (const auto& [f, row] : oracle.averaged) {
    for (std::size_t t = 0; t < num_tags; ++t) {
      worst = std::max(worst, std::abs(model.Get(f, t) - row[t]));
    }
  }
  for (const auto& [f, t, v] : model.Entries()) {
    auto it = oracle.averaged.find(f);
    double o = it == oracle.averaged.end() ? 0.0 : it->second[t];
    worst = std::max(worst, std::abs(v - o));
  }
  return worst;
}

// Metrics by tallying the full (gold, predicted) pair matrix first.
inline ConfusionCounts OracleMetrics(const std::vector<TagSequence>& gold,
                                     const std::vector<TagSequence>& pred,
                                     std::string_view background) {
  std::map<std::pair<std::string, std::string>, std::size_t> pairs;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    for (std::size_t i = 0; i < gold[s].size(); ++i) ++pairs[{gold[s][i], pred[s][i]}];
  }
  ConfusionCounts c;
  for (const auto& [gp, count] : pairs) {
    const auto& [g, p] = gp;
    c.total_tokens += count;
    if (g == p) c.correct_tokens += count;
    if (g == p && g != background) c.per_label[g].tp += count;
    if (g != p && p != background) c.per_label[p].fp += count;
    if (g != p && g != background) c.per_label[g].fn += count;
  }
  return c;
}

}  // namespace seclabel::testing
