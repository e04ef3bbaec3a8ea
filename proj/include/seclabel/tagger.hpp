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

// History-based maximum entropy tagger trained with the averaged
// perceptron and decoded greedily, run as two stages: bare IOB tags first,
// then one domain label per token.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "seclabel/corpus.hpp"
#include "seclabel/features.hpp"

namespace seclabel {

enum class Stage { kIob, kDomain };

std::string_view ToString(Stage stage);
std::optional<Stage> ParseStage(std::string_view text);

inline constexpr std::string_view kNoneLabel = "NONE";

// Stage iob: O, B, I. Stage domain: NONE then the entity labels in
// declaration order. Index order is the argmax tie-break order.
std::vector<std::string> DefaultTagset(Stage stage);

// Gold tag string of a token for the given stage.
std::string StageTag(const AnnotatedToken& token, Stage stage);

// Read-only feature -> per-tag weight table.
class FeatureWeights {
 public:
  FeatureWeights() = default;
  explicit FeatureWeights(std::size_t num_tags);

  std::size_t num_tags() const { return num_tags_; }
  std::size_t width() const { return width_; }
  std::size_t num_features() const { return names_.size(); }

  void Set(std::string_view feature, std::size_t tag, double weight);
  double Get(std::string_view feature, std::size_t tag) const;

  // out[t] = sum of weights of the known features for tag t; unknown
  // features contribute nothing. out.size() must be >= num_tags().
  void Score(std::span<const std::string> features, std::span<double> out) const;

  // Non-zero (feature, tag, weight) entries sorted by feature then tag.
  std::vector<std::tuple<std::string, std::size_t, double>> Entries() const;

  bool operator==(const FeatureWeights& other) const;

 private:
  friend class WeightVector;
  std::size_t num_tags_ = 0;
  std::size_t width_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> names_;
  std::vector<double> table_;
};

// Training-time weights v with the lazy-averaging bookkeeping: running
// totals v_tot, per-feature timestamps, and the example counter i. A whole
// row (all tags of one feature) is flushed and stamped together.
class WeightVector {
 public:
  explicit WeightVector(std::size_t num_tags);

  std::size_t num_tags() const { return num_tags_; }
  std::size_t width() const { return width_; }
  std::size_t num_features() const { return names_.size(); }
  std::uint64_t counter() const { return counter_; }

  std::uint32_t Intern(std::string_view feature);
  std::optional<std::uint32_t> Find(std::string_view feature) const;
  const std::string& FeatureName(std::uint32_t row) const { return names_[row]; }

  double weight(std::string_view feature, std::size_t tag) const;
  double total(std::string_view feature, std::size_t tag) const;
  std::uint64_t timestamp(std::string_view feature) const;

  void Score(std::span<const std::uint32_t> rows, std::span<double> out) const;
  // argmax over tags, earliest tag on ties.
  std::size_t Predict(std::span<const std::uint32_t> rows) const;

  // Mistake update: flush totals of the active rows, v += f(gold) - f(predicted),
  // stamp the rows with the current counter. Does not advance the counter.
  void Update(std::span<const std::uint32_t> rows, std::size_t gold, std::size_t predicted);
  void Tick() { ++counter_; }

  // One online step: predict, update on a mistake, advance the counter.
  // Returns the prediction.
  std::size_t Learn(std::span<const std::uint32_t> rows, std::size_t gold);

  // v_tot / i after a final flush (all zero when i == 0).
  FeatureWeights Averaged() const;
  FeatureWeights Raw() const;

 private:
  double* row(std::uint32_t r) { return weights_.data() + static_cast<std::size_t>(r) * width_; }
  void Flush(std::uint32_t r);

  std::size_t num_tags_;
  std::size_t width_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> names_;
  std::vector<double> weights_;
  std::vector<double> totals_;
  std::vector<std::uint64_t> stamps_;
  std::uint64_t counter_ = 0;
};

// Sum of weights[(f, tag)] over the features.
double ScoreTag(std::span<const std::string> features, std::size_t tag,
                const FeatureWeights& weights);

// Max-shifted softmax.
std::vector<double> Softmax(std::span<const double> scores);

// Normalized conditional distribution over the first num_tags tags.
std::vector<double> TagProbability(std::span<const std::string> features,
                                   const FeatureWeights& weights, std::size_t num_tags);

inline constexpr int kModelFormatVersion = 1;

struct TaggerModel {
  Stage stage = Stage::kIob;
  std::vector<std::string> tagset;
  FeatureWeights weights;
  FeatureConfig config;
  TrainGazetteers gazetteers;  // domain stage only
  int format_version = kModelFormatVersion;

  bool operator==(const TaggerModel&) const = default;
};

struct DecodeResult {
  std::vector<std::size_t> tags;            // tagset indices
  std::vector<std::vector<double>> scores;  // per position, one per tag
};

// Left-to-right greedy decoding with predicted history. `iob_tags` is
// required for the domain stage. Stage iob output is repaired so that an
// orphan I becomes B.
DecodeResult GreedyDecode(const AnnotatedDescription& description, const TaggerModel& model,
                          std::span<const std::string> iob_tags = {});

std::vector<std::string> GreedyDecodeTags(const AnnotatedDescription& description,
                                          const TaggerModel& model,
                                          std::span<const std::string> iob_tags = {});

struct TrainOptions {
  std::size_t iterations = 5;
  std::optional<std::uint64_t> shuffle_seed;  // unset: corpus order every epoch
  FeatureConfig features;
};

struct TrainStats {
  std::vector<std::size_t> mistakes_per_epoch;
  std::size_t examples_per_epoch = 0;
  double raw_training_accuracy = 0.0;  // final non-averaged v on the training tokens
};

// Teacher-forced training: features use gold history tags.
TaggerModel TrainAveragedPerceptron(const Corpus& corpus, Stage stage,
                                    const TrainOptions& options = {},
                                    TrainStats* stats = nullptr);

// Fills empty POS columns with the named provider.
void EnsurePos(AnnotatedDescription& description, std::string_view provider);

// Stage 1 then stage 2, combined: O stays O; an entity token whose domain
// label is NONE takes its best non-NONE label; every token of a B/I span
// takes the label of the span's B token.
AnnotatedDescription TagPipeline(const AnnotatedDescription& input, const TaggerModel& iob_model,
                                 const TaggerModel& domain_model);

void SaveModel(const TaggerModel& model, std::ostream& out);
void SaveModel(const TaggerModel& model, const std::filesystem::path& path);
TaggerModel LoadModel(std::istream& in);
TaggerModel LoadModel(const std::filesystem::path& path);

}  // namespace seclabel
