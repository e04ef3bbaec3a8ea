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

#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "seclabel/error.hpp"
#include "seclabel/synth.hpp"
#include "seclabel/tagger.hpp"
#include "test_util.hpp"

namespace seclabel {
namespace {

AnnotatedDescription Tagged(std::string_view raw, const std::vector<std::string>& tags) {
  AnnotatedDescription d = MakeDescription("d", SourceKind::kOther, std::string(raw));
  REQUIRE(d.tokens.size() == tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i) {
    d.tokens[i].iob = *ParseIobTag(tags[i]);
    d.tokens[i].provenance = d.tokens[i].iob.is_outside() ? Provenance::kNone
                                                          : Provenance::kRecordMatch;
  }
  EnsurePos(d, "heuristic");
  return d;
}

TaggerModel EmptyModel(Stage stage) {
  TaggerModel m;
  m.stage = stage;
  m.tagset = DefaultTagset(stage);
  m.weights = FeatureWeights(m.tagset.size());
  return m;
}

TEST_CASE("tagsets") {
  CHECK(DefaultTagset(Stage::kIob) == std::vector<std::string>{"O", "B", "I"});
  auto dom = DefaultTagset(Stage::kDomain);
  REQUIRE(dom.size() == 8);
  CHECK(dom[0] == "NONE");
  CHECK(dom[1] == "software-vendor");
}

TEST_CASE("score") {
  FeatureWeights w(3);
  std::vector<std::string> f = {"a", "b", "zzz"};
  CHECK(ScoreTag(f, 0, w) == 0.0);
  CHECK(ScoreTag(f, 1, w) == 0.0);
  w.Set("a", 1, 1.5);
  w.Set("b", 1, -0.5);
  CHECK(ScoreTag(f, 1, w) == 1.0);
  FeatureWeights doubled(3);
  for (const auto& [name, tag, v] : w.Entries()) doubled.Set(name, tag, 2 * v);
  CHECK(ScoreTag(f, 1, doubled) == 2.0);
  std::vector<double> scores(3);
  w.Score(f, scores);
  CHECK(scores == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("tag probability") {
  FeatureWeights zero(3);
  for (double p : TagProbability(std::vector<std::string>{"x"}, zero, 3)) {
    CHECK(std::abs(p - 1.0 / 3.0) <= 1e-15);
  }
  std::vector<double> s = {1.0, 1.0, 1.0 + std::log(2.0)};
  auto p = Softmax(s);
  CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(0.5).epsilon(1e-12));

  // Shift invariance and overflow safety.
  std::vector<double> big = {1000.0, 1000.0, 1000.0 + std::log(2.0)};
  auto q = Softmax(big);
  for (int i = 0; i < 3; ++i) CHECK(q[i] == doctest::Approx(p[i]).epsilon(1e-12));

  internal::Rng rng(1);
  for (int round = 0; round < 200; ++round) {
    std::vector<double> r(2 + rng.Below(7));
    for (double& v : r) v = (rng.Unit() - 0.5) * 50;
    auto pr = Softmax(r);
    CHECK(std::abs(std::accumulate(pr.begin(), pr.end(), 0.0) - 1.0) <= 1e-12);
  }
}

TEST_CASE("greedy decode") {
  AnnotatedDescription d = Tagged("a safari b", {"O", "O", "O"});
  TaggerModel m = EmptyModel(Stage::kIob);
  CHECK(GreedyDecodeTags(d, m) == std::vector<std::string>{"O", "O", "O"});

  m.weights.Set("w0=safari", 1, 1.0);
  CHECK(GreedyDecodeTags(d, m) == std::vector<std::string>{"O", "B", "O"});
  CHECK(GreedyDecodeTags(d, m) == GreedyDecodeTags(d, m));

  // An orphan I is repaired into B.
  TaggerModel orphan = EmptyModel(Stage::kIob);
  orphan.weights.Set("w0=safari", 2, 1.0);
  CHECK(GreedyDecodeTags(d, orphan) == std::vector<std::string>{"O", "B", "O"});

  // Domain decoding requires stage-1 tags.
  CHECK_THROWS_AS(GreedyDecode(d, EmptyModel(Stage::kDomain)), Error);
}

TEST_CASE("decoding ignores a bias shared by every tag") {
  SyntheticData data = GenerateSynthetic(30, 2);
  TaggerModel m = TrainAveragedPerceptron(data.gold, Stage::kIob, {});
  TaggerModel biased = m;
  // The word window always fires w0=..., so add c to every tag of every w0
  // feature in the model: a constant per position.
  for (const auto& [name, tag, v] : m.weights.Entries()) {
    if (name.rfind("w0=", 0) == 0) {
      for (std::size_t t = 0; t < m.tagset.size(); ++t) {
        biased.weights.Set(name, t, m.weights.Get(name, t) + 0.375);
      }
    }
  }
  for (const auto& d : data.gold.descriptions) {
    CHECK(GreedyDecodeTags(d, m) == GreedyDecodeTags(d, biased));
  }
}

TEST_CASE("all-first-tag corpus never updates") {
  Corpus c{{Tagged("a b c", {"O", "O", "O"}), Tagged("d e", {"O", "O"})}};
  TrainStats stats;
  TaggerModel m = TrainAveragedPerceptron(c, Stage::kIob, {}, &stats);
  CHECK(m.weights.Entries().empty());
  for (std::size_t mistakes : stats.mistakes_per_epoch) CHECK(mistakes == 0);
}

TEST_CASE("weight vector lazy averaging equals snapshot averaging") {
  internal::Rng rng(42);
  for (int round = 0; round < 50; ++round) {
    const std::size_t k = 2 + rng.Below(4);
    const std::size_t n_features = 1 + rng.Below(6);
    WeightVector w(k);
    std::vector<std::vector<double>> dense(n_features, std::vector<double>(k, 0.0));
    std::vector<std::vector<double>> sum = dense;
    std::size_t steps = 0;
    for (std::size_t f = 0; f < n_features; ++f) w.Intern("f" + std::to_string(f));
    const std::size_t n_examples = 1 + rng.Below(40);
    for (std::size_t e = 0; e < n_examples; ++e) {
      std::vector<std::uint32_t> rows;
      for (std::size_t f = 0; f < n_features; ++f) {
        if (rng.Chance(0.5)) rows.push_back(static_cast<std::uint32_t>(f));
      }
      const std::size_t gold = rng.Below(k);
      // Oracle prediction from its own dense copy.
      std::vector<double> score(k, 0.0);
      for (auto r : rows) {
        for (std::size_t t = 0; t < k; ++t) score[t] += dense[r][t];
      }
      std::size_t pred = 0;
      for (std::size_t t = 1; t < k; ++t) {
        if (score[t] > score[pred]) pred = t;
      }
      CHECK(w.Learn(rows, gold) == pred);
      if (pred != gold) {
        for (auto r : rows) {
          dense[r][gold] += 1;
          dense[r][pred] -= 1;
        }
      }
      ++steps;
      for (std::size_t f = 0; f < n_features; ++f) {
        for (std::size_t t = 0; t < k; ++t) sum[f][t] += dense[f][t];
      }
    }
    CHECK(w.counter() == steps);
    FeatureWeights avg = w.Averaged();
    FeatureWeights raw = w.Raw();
    for (std::size_t f = 0; f < n_features; ++f) {
      for (std::size_t t = 0; t < k; ++t) {
        const std::string name = "f" + std::to_string(f);
        CHECK(std::abs(avg.Get(name, t) - sum[f][t] / static_cast<double>(steps)) <= 1e-12);
        CHECK(raw.Get(name, t) == dense[f][t]);
      }
    }
  }
}

TEST_CASE("timestamps follow the last update of a row") {
  WeightVector w(3);
  auto a = w.Intern("a");
  auto b = w.Intern("b");
  std::vector<std::uint32_t> ra = {a}, rb = {b};
  w.Learn(ra, 1);  // mistake at i = 0
  w.Learn(rb, 0);  // correct
  w.Learn(ra, 1);  // correct now
  w.Learn(ra, 2);  // mistake at i = 3
  CHECK(w.counter() == 4);
  CHECK(w.timestamp("a") == 3);
  CHECK(w.timestamp("b") == 0);
  CHECK(w.weight("a", 1) == 0.0);
  CHECK(w.weight("a", 2) == 1.0);
  // Totals hold the flushed history up to the stamp: (3 - 0) * (+1, -1 on O).
  CHECK(w.total("a", 1) == 3.0);
  CHECK(w.Averaged().Get("a", 1) == doctest::Approx(3.0 / 4.0));
  CHECK(w.Averaged().Get("a", 2) == doctest::Approx(1.0 / 4.0));
}

TEST_CASE("two-token toy corpus matches the snapshot oracle") {
  Corpus c{{Tagged("x y", {"B", "O"})}};
  TemplateGroups one{false, false, true, false, false, false, false};
  TrainOptions opts;
  opts.iterations = 2;
  opts.features.templates = one;
  TaggerModel m = TrainAveragedPerceptron(c, Stage::kIob, opts);
  auto oracle = testing::OracleAveragedPerceptron(c, Stage::kIob, 2, one);
  CHECK(oracle.steps == 4);
  CHECK(testing::MaxDeviation(m.weights, oracle, 3) <= 1e-9);
}

TEST_CASE("training matches the snapshot oracle on random corpora, both stages") {
  internal::Rng rng(77);
  for (int round = 0; round < 30; ++round) {
    Corpus c = testing::RandomCorpus(rng, 6, 8);
    if (c.descriptions.empty()) continue;
    for (Stage stage : {Stage::kIob, Stage::kDomain}) {
      TrainOptions opts;
      opts.iterations = 1 + rng.Below(3);
      TaggerModel m = TrainAveragedPerceptron(c, stage, opts);
      auto oracle = testing::OracleAveragedPerceptron(c, stage, opts.iterations,
                                                      opts.features.templates);
      CHECK(testing::MaxDeviation(m.weights, oracle, m.tagset.size()) <= 1e-9);
    }
  }
}

TEST_CASE("training is deterministic and the seed controls shuffling") {
  SyntheticData data = GenerateSynthetic(40, 9);
  TrainOptions plain;
  CHECK(TrainAveragedPerceptron(data.gold, Stage::kDomain, plain) ==
        TrainAveragedPerceptron(data.gold, Stage::kDomain, plain));
  TrainOptions s1;
  s1.shuffle_seed = 1;
  TrainOptions s2;
  s2.shuffle_seed = 2;
  TaggerModel a = TrainAveragedPerceptron(data.gold, Stage::kIob, s1);
  CHECK(a == TrainAveragedPerceptron(data.gold, Stage::kIob, s1));
  CHECK_FALSE(a == TrainAveragedPerceptron(data.gold, Stage::kIob, s2));
}

TEST_CASE("training rejects bad input") {
  CHECK_THROWS_AS(TrainAveragedPerceptron(Corpus{}, Stage::kIob), Error);
  Corpus c{{Tagged("a", {"O"})}};
  TrainOptions zero;
  zero.iterations = 0;
  try {
    TrainAveragedPerceptron(c, Stage::kIob, zero);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidParameter);
  }
}

TEST_CASE("separable data converges") {
  // Word identity decides the tag.
  Corpus c;
  internal::Rng rng(4);
  for (int i = 0; i < 40; ++i) {
    std::string raw;
    std::vector<std::string> tags;
    std::size_t n = 3 + rng.Below(8);
    for (std::size_t k = 0; k < n; ++k) {
      if (!tags.empty() && tags.back() != "O" && rng.Chance(0.5)) {
        raw += "inner ";
        tags.push_back("I-software-product");
      } else if (rng.Chance(0.4)) {
        raw += "start ";
        tags.push_back("B-software-product");
      } else {
        raw += "other ";
        tags.push_back("O");
      }
    }
    c.descriptions.push_back(Tagged(raw, tags));
  }
  TrainOptions opts;
  opts.iterations = 10;
  TrainStats stats;
  TaggerModel m = TrainAveragedPerceptron(c, Stage::kIob, opts, &stats);
  CHECK(stats.raw_training_accuracy == 1.0);
  CHECK(stats.mistakes_per_epoch.back() == 0);
  for (const auto& d : c.descriptions) {
    CHECK(GreedyDecodeTags(d, m) == StageTags(d, Stage::kIob));
  }
}

TEST_CASE("pipeline combination") {
  AnnotatedDescription d = Tagged("Internet Explorer crash", {"O", "O", "O"});
  TaggerModel iob = EmptyModel(Stage::kIob);
  TaggerModel dom = EmptyModel(Stage::kDomain);
  // Stage 1 all O: final all O whatever stage 2 says.
  dom.weights.Set("w0=internet", 2, 5.0);
  AnnotatedDescription out = TagPipeline(d, iob, dom);
  for (const auto& t : out.tokens) {
    CHECK(t.iob.is_outside());
    CHECK(t.provenance == Provenance::kNone);
  }

  iob.weights.Set("w0=internet", 1, 1.0);
  iob.weights.Set("w0=explorer", 2, 1.0);
  dom.weights.Set("w0=explorer", 2, 1.0);
  out = TagPipeline(d, iob, dom);
  CHECK(ToString(out.tokens[0].iob) == "B-software-product");
  CHECK(ToString(out.tokens[1].iob) == "I-software-product");
  CHECK(ToString(out.tokens[2].iob) == "O");
  CHECK(out.tokens[0].provenance == Provenance::kModel);

  // Second token says vendor: the B token's label wins.
  dom.weights.Set("w0=explorer", 1, 3.0);
  out = TagPipeline(d, iob, dom);
  CHECK(ToString(out.tokens[1].iob) == "I-software-product");

  // NONE on an entity token falls back to the best other label.
  TaggerModel none = EmptyModel(Stage::kDomain);
  none.weights.Set("w0=internet", 0, 5.0);
  none.weights.Set("w0=internet", 4, 1.0);
  out = TagPipeline(d, iob, none);
  CHECK(ToString(out.tokens[0].iob) == "B-software-language");
}

TEST_CASE("pipeline output is always IOB-valid") {
  SyntheticData data = GenerateSynthetic(60, 5);
  Corpus train{{data.gold.descriptions.begin(), data.gold.descriptions.begin() + 20}};
  TrainOptions opts;
  opts.iterations = 1;
  TaggerModel iob = TrainAveragedPerceptron(train, Stage::kIob, opts);
  TaggerModel dom = TrainAveragedPerceptron(train, Stage::kDomain, opts);
  for (const auto& d : data.gold.descriptions) {
    AnnotatedDescription out = TagPipeline(d, iob, dom);
    CHECK_NOTHROW(ValidateDescription(out));
    auto stage1 = GreedyDecodeTags(d, iob);
    for (std::size_t i = 0; i < stage1.size(); ++i) {
      if (stage1[i] == "I") CHECK((i > 0 && stage1[i - 1] != "O"));
    }
  }
}

TEST_CASE("model save and load") {
  SyntheticData data = GenerateSynthetic(30, 8);
  TaggerModel m = TrainAveragedPerceptron(data.gold, Stage::kDomain, {});
  std::ostringstream out;
  SaveModel(m, out);
  std::istringstream in(out.str());
  TaggerModel back = LoadModel(in);
  CHECK(back == m);
  TaggerModel iob = TrainAveragedPerceptron(data.gold, Stage::kIob, {});
  AnnotatedDescription held = GenerateSynthetic(31, 99).gold.descriptions.back();
  CHECK(TagPipeline(held, iob, back) == TagPipeline(held, iob, m));

  std::string text = out.str();
  auto kind_of = [](const std::string& s) {
    std::istringstream is(s);
    try {
      LoadModel(is);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;
  };
  CHECK(kind_of(text.substr(0, text.size() / 2)) == ErrorKind::kCorruptModel);
  CHECK(kind_of("") == ErrorKind::kCorruptModel);
  CHECK(kind_of("seclabel-model\t2\n") == ErrorKind::kVersionMismatch);
  CHECK(kind_of("garbage\n") == ErrorKind::kCorruptModel);
  std::string bad_weight = text;
  bad_weight.replace(bad_weight.rfind('\t'), 1, "\tx");
  CHECK(kind_of(bad_weight) == ErrorKind::kCorruptModel);
}

}  // namespace
}  // namespace seclabel
