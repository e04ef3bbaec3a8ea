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

// Binary feature extraction for the IOB and domain tagging stages.
//
// Feature keys are namespaced strings: "w-1=the", "pos+1=NOUN", "iob-1=B",
// "bi:iob-1,w0=B|safari", "shape0:camel", "gaz:product". The first
// component of a bigram value comes from a closed tag set that never
// contains '|', so keys are injective per template.

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seclabel/corpus.hpp"

namespace seclabel {

// Reserved boundary symbols. The tokenizer always splits '<' and '>' into
// single-character tokens, so it can never produce these.
inline constexpr std::string_view kStartSymbol = "<S>";
inline constexpr std::string_view kEndSymbol = "<E>";

struct WordShape {
  bool begins_digit = false;
  bool interior_digit = false;  // a digit strictly between first and last char
  bool begins_capital = false;
  bool camel_case = false;      // lowercase then later uppercase, alphanumerics only
  bool snake_case = false;      // '_' between two word characters
  bool contains_punct = false;  // ASCII punctuation other than '_'

  bool operator==(const WordShape&) const = default;
};

WordShape ComputeWordShape(std::string_view text);

// POS tagging is pluggable. A provider is total, deterministic, and
// declares its closed tag set.
class PosProvider {
 public:
  virtual ~PosProvider() = default;
  virtual std::string_view name() const = 0;
  virtual std::span<const std::string_view> tagset() const = 0;
  virtual std::vector<std::string> Tag(std::span<const Token> tokens) const = 0;
};

// "heuristic" (coarse rule-based tagger, 12 tags) or "none" (every token
// tagged X). Throws Error(kInvalidParameter) for an unknown name.
std::unique_ptr<PosProvider> MakePosProvider(std::string_view name);

// Shorthand for the heuristic provider.
std::vector<std::string> PosTag(std::span<const Token> tokens);

struct TemplateGroups {
  bool words = true;       // w-2 .. w+2
  bool pos = true;         // pos-2 .. pos+1
  bool history = true;     // previous two tags of the stage being decoded
  bool bigrams = true;
  bool shapes = true;      // six shape flags for w-2 .. w+2
  bool iob_window = true;  // domain stage: stage-1 tags iob-2 .. iob+2
  bool gazetteer = true;   // domain stage: gaz:vendor / gaz:product

  bool operator==(const TemplateGroups&) const = default;
};

struct FeatureConfig {
  TemplateGroups templates;
  std::string pos_provider = "heuristic";
  // Extensions that mark a token as a file name for the symbol rule.
  std::vector<std::string> file_extensions = {"dll", "exe", "php", "c", "h",
                                              "js",  "asp", "jsp", "py", "pl"};

  bool operator==(const FeatureConfig&) const = default;
};

// JSON: {"templates": {"words": true, ...}, "pos_provider": "heuristic",
//        "file_extensions": ["dll", ...]}. Missing keys keep defaults.
FeatureConfig ParseFeatureConfig(std::string_view json_text);
std::string FeatureConfigToJson(const FeatureConfig& config);
FeatureConfig LoadFeatureConfig(const std::filesystem::path& path);

// Lowercased vendor and product words seen in the training split.
struct TrainGazetteers {
  std::set<std::string> vendor_terms;
  std::set<std::string> product_terms;

  bool operator==(const TrainGazetteers&) const = default;
};

TrainGazetteers CollectTrainGazetteers(const Corpus& training);

// Per-description data shared by every position's extraction.
struct SentenceContext {
  std::vector<std::string> words;  // lowercased
  std::vector<std::string> pos;
  std::vector<WordShape> shapes;

  std::size_t size() const { return words.size(); }
};

SentenceContext MakeSentenceContext(std::span<const AnnotatedToken> tokens);

using FeatureSet = std::vector<std::string>;

// History arguments are the previous two tags (prev1 = t[i-1]); pass
// kStartSymbol before the start.
FeatureSet IobFeatures(const SentenceContext& ctx, std::size_t i, std::string_view iob_prev1,
                       std::string_view iob_prev2, const TemplateGroups& groups = {});

// `iob_tags` holds the stage-1 tag ("O", "B", "I") of every position.
FeatureSet DomainFeatures(const SentenceContext& ctx, std::size_t i,
                          std::span<const std::string> iob_tags, std::string_view dom_prev1,
                          std::string_view dom_prev2, const TrainGazetteers& gazetteers,
                          const TemplateGroups& groups = {});

}  // namespace seclabel
