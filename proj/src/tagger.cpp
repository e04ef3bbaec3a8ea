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

#include "seclabel/tagger.hpp"

#include <algorithm>
#include <numeric>

#include "random.hpp"
#include "seclabel/error.hpp"

namespace seclabel {
namespace {

std::size_t IndexOf(const std::vector<std::string>& tagset, std::string_view tag) {
  auto it = std::find(tagset.begin(), tagset.end(), tag);
  if (it == tagset.end()) {
    throw Error(ErrorKind::kInvalidInput, "tag '" + std::string(tag) + "' is not in the tagset");
  }
  return static_cast<std::size_t>(it - tagset.begin());
}

std::size_t ArgMax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t t = 1; t < scores.size(); ++t) {
    if (scores[t] > scores[best]) best = t;
  }
  return best;
}

bool NeedsPos(const AnnotatedDescription& d) {
  return std::any_of(d.tokens.begin(), d.tokens.end(),
                     [](const AnnotatedToken& t) { return t.pos.empty(); });
}

// Flattened teacher-forced examples, grouped by description.
struct ExampleSet {
  std::vector<std::uint32_t> rows;
  std::vector<std::size_t> row_begin;  // per example, plus a sentinel
  std::vector<std::size_t> gold;
  std::vector<std::size_t> description_begin;  // per description, plus a sentinel

  std::span<const std::uint32_t> Rows(std::size_t e) const {
    return {rows.data() + row_begin[e], row_begin[e + 1] - row_begin[e]};
  }
};

}  // namespace

std::string_view ToString(Stage stage) { return stage == Stage::kIob ? "iob" : "domain"; }

std::optional<Stage> ParseStage(std::string_view text) {
  if (text == "iob") return Stage::kIob;
  if (text == "domain") return Stage::kDomain;
  return std::nullopt;
}

std::vector<std::string> DefaultTagset(Stage stage) {
  if (stage == Stage::kIob) return {"O", "B", "I"};
  std::vector<std::string> tags = {std::string(kNoneLabel)};
  for (EntityLabel l : kAllEntityLabels) tags.emplace_back(ToString(l));
  return tags;
}

std::string StageTag(const AnnotatedToken& token, Stage stage) {
  if (stage == Stage::kIob) {
    switch (token.iob.kind) {
      case IobTag::Kind::kO: return "O";
      case IobTag::Kind::kB: return "B";
      case IobTag::Kind::kI: return "I";
    }
  }
  if (token.iob.is_outside() || !token.iob.label) return std::string(kNoneLabel);
  return std::string(ToString(*token.iob.label));
}

void EnsurePos(AnnotatedDescription& description, std::string_view provider) {
  if (!NeedsPos(description)) return;
  std::vector<Token> tokens;
  tokens.reserve(description.tokens.size());
  for (const auto& t : description.tokens) tokens.push_back(t.token);
  std::vector<std::string> tags = MakePosProvider(provider)->Tag(tokens);
  for (std::size_t i = 0; i < tags.size(); ++i) description.tokens[i].pos = std::move(tags[i]);
}

DecodeResult GreedyDecode(const AnnotatedDescription& description, const TaggerModel& model,
                          std::span<const std::string> iob_tags) {
  const AnnotatedDescription* source = &description;
  AnnotatedDescription tagged;
  if (NeedsPos(description)) {
    tagged = description;
    EnsurePos(tagged, model.config.pos_provider);
    source = &tagged;
  }
  const std::size_t n = source->tokens.size();
  if (model.stage == Stage::kDomain && iob_tags.size() != n) {
    throw Error(ErrorKind::kInvalidInput, "domain decoding needs one stage-1 tag per token");
  }
  const std::size_t num_tags = model.tagset.size();
  if (num_tags == 0) throw Error(ErrorKind::kInvalidInput, "model has an empty tagset");

  SentenceContext ctx = MakeSentenceContext(source->tokens);
  DecodeResult result;
  result.tags.reserve(n);
  result.scores.reserve(n);
  std::vector<double> scores(std::max(num_tags, model.weights.num_tags()));
  std::string_view prev1 = kStartSymbol;
  std::string_view prev2 = kStartSymbol;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureSet features =
        model.stage == Stage::kIob
            ? IobFeatures(ctx, i, prev1, prev2, model.config.templates)
            : DomainFeatures(ctx, i, iob_tags, prev1, prev2, model.gazetteers,
                             model.config.templates);
    std::fill(scores.begin(), scores.end(), 0.0);
    if (model.weights.num_tags() > 0) model.weights.Score(features, scores);
    std::span<const double> active(scores.data(), num_tags);
    std::size_t best = ArgMax(active);
    result.tags.push_back(best);
    result.scores.emplace_back(active.begin(), active.end());
    prev2 = prev1;
    prev1 = model.tagset[best];
  }

  if (model.stage == Stage::kIob) {
    const std::size_t o = IndexOf(model.tagset, "O");
    const std::size_t b = IndexOf(model.tagset, "B");
    const std::size_t in = IndexOf(model.tagset, "I");
    for (std::size_t i = 0; i < n; ++i) {
      if (result.tags[i] == in && (i == 0 || result.tags[i - 1] == o)) result.tags[i] = b;
    }
  }
  return result;
}

std::vector<std::string> GreedyDecodeTags(const AnnotatedDescription& description,
                                          const TaggerModel& model,
                                          std::span<const std::string> iob_tags) {
  DecodeResult r = GreedyDecode(description, model, iob_tags);
  std::vector<std::string> out;
  out.reserve(r.tags.size());
  for (std::size_t t : r.tags) out.push_back(model.tagset[t]);
  return out;
}

TaggerModel TrainAveragedPerceptron(const Corpus& corpus, Stage stage,
                                    const TrainOptions& options, TrainStats* stats) {
  if (corpus.descriptions.empty()) throw Error(ErrorKind::kInvalidInput, "empty training corpus");
  if (options.iterations < 1) throw Error(ErrorKind::kInvalidParameter, "iterations must be >= 1");

  TaggerModel model;
  model.stage = stage;
  model.tagset = DefaultTagset(stage);
  model.config = options.features;
  if (stage == Stage::kDomain) model.gazetteers = CollectTrainGazetteers(corpus);

  WeightVector weights(model.tagset.size());
  ExampleSet examples;
  examples.row_begin.push_back(0);
  for (const AnnotatedDescription& original : corpus.descriptions) {
    examples.description_begin.push_back(examples.gold.size());
    const AnnotatedDescription* d = &original;
    AnnotatedDescription tagged;
    if (NeedsPos(original)) {
      tagged = original;
      EnsurePos(tagged, model.config.pos_provider);
      d = &tagged;
    }
    SentenceContext ctx = MakeSentenceContext(d->tokens);
    std::vector<std::string> gold;
    std::vector<std::string> iob;
    for (const AnnotatedToken& t : d->tokens) {
      gold.push_back(StageTag(t, stage));
      if (stage == Stage::kDomain) iob.push_back(StageTag(t, Stage::kIob));
    }
    for (std::size_t i = 0; i < gold.size(); ++i) {
      std::string_view prev1 = i >= 1 ? std::string_view(gold[i - 1]) : kStartSymbol;
      std::string_view prev2 = i >= 2 ? std::string_view(gold[i - 2]) : kStartSymbol;
      FeatureSet features = stage == Stage::kIob
                                ? IobFeatures(ctx, i, prev1, prev2, model.config.templates)
                                : DomainFeatures(ctx, i, iob, prev1, prev2, model.gazetteers,
                                                 model.config.templates);
      for (const std::string& f : features) examples.rows.push_back(weights.Intern(f));
      examples.row_begin.push_back(examples.rows.size());
      examples.gold.push_back(IndexOf(model.tagset, gold[i]));
    }
  }
  examples.description_begin.push_back(examples.gold.size());

  const std::size_t num_descriptions = corpus.descriptions.size();
  std::vector<std::size_t> order(num_descriptions);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::optional<internal::Rng> rng;
  if (options.shuffle_seed) rng.emplace(*options.shuffle_seed);

  TrainStats local;
  local.examples_per_epoch = examples.gold.size();
  for (std::size_t epoch = 0; epoch < options.iterations; ++epoch) {
    if (rng) rng->Shuffle(order);
    std::size_t mistakes = 0;
    for (std::size_t d : order) {
      for (std::size_t e = examples.description_begin[d]; e < examples.description_begin[d + 1];
           ++e) {
        if (weights.Learn(examples.Rows(e), examples.gold[e]) != examples.gold[e]) ++mistakes;
      }
    }
    local.mistakes_per_epoch.push_back(mistakes);
  }

  std::size_t correct = 0;
  for (std::size_t e = 0; e < examples.gold.size(); ++e) {
    if (weights.Predict(examples.Rows(e)) == examples.gold[e]) ++correct;
  }
  local.raw_training_accuracy =
      examples.gold.empty() ? 1.0
                            : static_cast<double>(correct) / static_cast<double>(examples.gold.size());

  model.weights = weights.Averaged();
  if (stats) *stats = std::move(local);
  return model;
}

AnnotatedDescription TagPipeline(const AnnotatedDescription& input, const TaggerModel& iob_model,
                                 const TaggerModel& domain_model) {
  if (iob_model.stage != Stage::kIob || domain_model.stage != Stage::kDomain) {
    throw Error(ErrorKind::kInvalidInput, "pipeline needs an iob model and a domain model");
  }
  AnnotatedDescription out = input;
  EnsurePos(out, iob_model.config.pos_provider);
  const std::size_t n = out.tokens.size();

  std::vector<std::string> iob = GreedyDecodeTags(out, iob_model);
  DecodeResult domain = GreedyDecode(out, domain_model, iob);
  const std::size_t none = IndexOf(domain_model.tagset, kNoneLabel);

  std::vector<std::optional<EntityLabel>> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (iob[i] == "O") continue;
    std::size_t pick = domain.tags[i];
    if (pick == none) {
      std::optional<std::size_t> best;
      for (std::size_t t = 0; t < domain_model.tagset.size(); ++t) {
        if (t == none) continue;
        if (!best || domain.scores[i][t] > domain.scores[i][*best]) best = t;
      }
      pick = best.value_or(none);
    }
    labels[i] = ParseEntityLabel(domain_model.tagset[pick]);
  }

  std::optional<EntityLabel> span_label;
  for (std::size_t i = 0; i < n; ++i) {
    AnnotatedToken& t = out.tokens[i];
    if (iob[i] == "O" || !labels[i]) {
      t.iob = IobTag::O();
      t.provenance = Provenance::kNone;
      span_label.reset();
      continue;
    }
    if (iob[i] == "B" || !span_label) {
      span_label = labels[i];
      t.iob = IobTag::B(span_label);
    } else {
      t.iob = IobTag::I(span_label);
    }
    t.provenance = Provenance::kModel;
  }
  return out;
}

}  // namespace seclabel
