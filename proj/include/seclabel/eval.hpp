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

// Token-level metrics, random sub-sampling validation, and reports.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "seclabel/corpus.hpp"
#include "seclabel/tagger.hpp"

namespace seclabel {

struct LabelCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  bool operator==(const LabelCounts&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;

  bool operator==(const Metrics&) const = default;
};

struct ConfusionCounts {
  std::map<std::string, LabelCounts> per_label;
  std::size_t correct_tokens = 0;
  std::size_t total_tokens = 0;

  LabelCounts micro() const;
  // Micro-averaged P/R/F1 over non-background labels; accuracy over all
  // tokens. Undefined ratios are 0.
  Metrics metrics() const;
  void Merge(const ConfusionCounts& other);

  bool operator==(const ConfusionCounts&) const = default;
};

// "O" for stage iob, "NONE" for stage domain.
std::string_view BackgroundTag(Stage stage);

using TagSequence = std::vector<std::string>;

// Gold and predicted must align token for token.
ConfusionCounts ComputeMetrics(std::span<const TagSequence> gold,
                               std::span<const TagSequence> predicted, Stage stage);

double F1(double precision, double recall);

struct FoldResult {
  Metrics metrics;
  ConfusionCounts counts;
  double train_seconds = 0.0;
  std::size_t train_descriptions = 0;
  std::size_t test_descriptions = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
};

struct EvalReport {
  Stage stage = Stage::kIob;
  std::size_t n_descriptions = 0;
  std::size_t n_tokens = 0;  // test tokens scored, summed over folds
  std::vector<FoldResult> folds;
  Metrics mean;
  double mean_train_seconds = 0.0;
};

struct CrossValidationOptions {
  std::size_t n = 0;
  std::size_t folds = 5;
  double split_fraction = 0.8;
  std::size_t iterations = 5;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> shuffle_seed;
  FeatureConfig features;
  std::size_t jobs = 1;
};

struct CrossValidationResult {
  EvalReport iob;
  EvalReport domain;
};

// Per fold: sample n descriptions without replacement, split, train both
// stages on the training part, decode the test part with the full
// pipeline, and score each stage on its own.
CrossValidationResult CrossValidate(const Corpus& corpus, const CrossValidationOptions& options);

// Gold and predicted per-stage tag sequences for one description pair.
TagSequence StageTags(const AnnotatedDescription& d, Stage stage);

// JSON report. Wall-clock times are included only on request, so reports
// of seeded runs are byte-identical.
std::string ReportToJson(const CrossValidationResult& result, bool include_timing);
void WriteReport(const CrossValidationResult& result, const std::filesystem::path& path,
                 bool include_timing);

// Column table in the layout n, P, R, F1, A, T.
void PrintReportTable(const CrossValidationResult& result, std::ostream& out);

}  // namespace seclabel
