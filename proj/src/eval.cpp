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

#include "seclabel/eval.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "io_util.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "seclabel/error.hpp"

namespace seclabel {
namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

struct FoldOutput {
  FoldResult iob;
  FoldResult domain;
  std::size_t test_tokens = 0;
};

FoldOutput RunFold(const Corpus& corpus, const CrossValidationOptions& options,
                   std::size_t fold) {
  // Each fold draws from its own stream so folds are independent of the
  // order in which they run.
  internal::Rng rng(options.seed + 0x9e3779b97f4a7c15ULL * (fold + 1));
  std::vector<std::size_t> pool(corpus.descriptions.size());
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher-Yates: the first n slots are a uniform sample.
  for (std::size_t i = 0; i < options.n; ++i) {
    std::swap(pool[i], pool[i + rng.Below(pool.size() - i)]);
  }
  pool.resize(options.n);

  auto n_train = static_cast<std::size_t>(
      std::llround(static_cast<double>(options.n) * options.split_fraction));
  n_train = std::clamp<std::size_t>(n_train, 1, options.n > 1 ? options.n - 1 : 1);

  Corpus train;
  Corpus test;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    (i < n_train ? train : test).descriptions.push_back(corpus.descriptions[pool[i]]);
  }

  TrainOptions train_options;
  train_options.iterations = options.iterations;
  train_options.shuffle_seed = options.shuffle_seed;
  train_options.features = options.features;

  using Clock = std::chrono::steady_clock;
  auto t0 = Clock::now();
  TaggerModel iob_model = TrainAveragedPerceptron(train, Stage::kIob, train_options);
  auto t1 = Clock::now();
  TaggerModel domain_model = TrainAveragedPerceptron(train, Stage::kDomain, train_options);
  auto t2 = Clock::now();

  std::vector<TagSequence> gold_iob, pred_iob, gold_dom, pred_dom;
  FoldOutput out;
  for (const AnnotatedDescription& d : test.descriptions) {
    AnnotatedDescription predicted = TagPipeline(d, iob_model, domain_model);
    gold_iob.push_back(StageTags(d, Stage::kIob));
    pred_iob.push_back(StageTags(predicted, Stage::kIob));
    gold_dom.push_back(StageTags(d, Stage::kDomain));
    pred_dom.push_back(StageTags(predicted, Stage::kDomain));
    out.test_tokens += d.tokens.size();
  }

  auto fill = [&](FoldResult& r, ConfusionCounts counts, double seconds) {
    r.metrics = counts.metrics();
    r.counts = std::move(counts);
    r.train_seconds = seconds;
    r.train_descriptions = train.descriptions.size();
    r.test_descriptions = test.descriptions.size();
    for (const auto& d : train.descriptions) r.train_ids.push_back(d.source_id);
    for (const auto& d : test.descriptions) r.test_ids.push_back(d.source_id);
  };
  fill(out.iob, ComputeMetrics(gold_iob, pred_iob, Stage::kIob),
       std::chrono::duration<double>(t1 - t0).count());
  fill(out.domain, ComputeMetrics(gold_dom, pred_dom, Stage::kDomain),
       std::chrono::duration<double>(t2 - t1).count());
  return out;
}

void Summarize(EvalReport& report) {
  Metrics sum;
  double seconds = 0.0;
  for (const FoldResult& f : report.folds) {
    sum.precision += f.metrics.precision;
    sum.recall += f.metrics.recall;
    sum.f1 += f.metrics.f1;
    sum.accuracy += f.metrics.accuracy;
    seconds += f.train_seconds;
  }
  const auto k = static_cast<double>(report.folds.size());
  if (k > 0) {
    report.mean = {sum.precision / k, sum.recall / k, sum.f1 / k, sum.accuracy / k};
    report.mean_train_seconds = seconds / k;
  }
}

nlohmann::ordered_json MetricsJson(const Metrics& m) {
  nlohmann::ordered_json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["accuracy"] = m.accuracy;
  return j;
}

nlohmann::ordered_json StageJson(const EvalReport& r, bool include_timing) {
  nlohmann::ordered_json j;
  j["stage"] = std::string(ToString(r.stage));
  j["n"] = r.n_descriptions;
  j["test_tokens"] = r.n_tokens;
  j["mean"] = MetricsJson(r.mean);
  if (include_timing) j["mean_train_seconds"] = r.mean_train_seconds;
  nlohmann::ordered_json folds = nlohmann::ordered_json::array();
  for (const FoldResult& f : r.folds) {
    nlohmann::ordered_json fj = MetricsJson(f.metrics);
    auto micro = f.counts.micro();
    fj["tp"] = micro.tp;
    fj["fp"] = micro.fp;
    fj["fn"] = micro.fn;
    fj["correct_tokens"] = f.counts.correct_tokens;
    fj["total_tokens"] = f.counts.total_tokens;
    fj["train_descriptions"] = f.train_descriptions;
    fj["test_descriptions"] = f.test_descriptions;
    if (include_timing) fj["train_seconds"] = f.train_seconds;
    folds.push_back(std::move(fj));
  }
  j["folds"] = std::move(folds);
  return j;
}

}  // namespace

LabelCounts ConfusionCounts::micro() const {
  LabelCounts total;
  for (const auto& [label, c] : per_label) {
    total.tp += c.tp;
    total.fp += c.fp;
    total.fn += c.fn;
  }
  return total;
}

double F1(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

Metrics ConfusionCounts::metrics() const {
  LabelCounts m = micro();
  Metrics out;
  out.precision = Ratio(m.tp, m.tp + m.fp);
  out.recall = Ratio(m.tp, m.tp + m.fn);
  out.f1 = F1(out.precision, out.recall);
  out.accuracy = Ratio(correct_tokens, total_tokens);
  return out;
}

void ConfusionCounts::Merge(const ConfusionCounts& other) {
  for (const auto& [label, c] : other.per_label) {
    LabelCounts& mine = per_label[label];
    mine.tp += c.tp;
    mine.fp += c.fp;
    mine.fn += c.fn;
  }
  correct_tokens += other.correct_tokens;
  total_tokens += other.total_tokens;
}

std::string_view BackgroundTag(Stage stage) {
  return stage == Stage::kIob ? std::string_view("O") : kNoneLabel;
}

ConfusionCounts ComputeMetrics(std::span<const TagSequence> gold,
                               std::span<const TagSequence> predicted, Stage stage) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorKind::kInvalidInput, "gold and predicted hold different sequence counts");
  }
  const std::string_view background = BackgroundTag(stage);
  ConfusionCounts c;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size()) {
      throw Error(ErrorKind::kInvalidInput,
                  "sequence " + std::to_string(s) + " has mismatched lengths");
    }
    for (std::size_t i = 0; i < gold[s].size(); ++i) {
      const std::string& g = gold[s][i];
      const std::string& p = predicted[s][i];
      ++c.total_tokens;
      if (g == p) {
        ++c.correct_tokens;
        if (g != background) ++c.per_label[g].tp;
        continue;
      }
      if (p != background) ++c.per_label[p].fp;
      if (g != background) ++c.per_label[g].fn;
    }
  }
  return c;
}

TagSequence StageTags(const AnnotatedDescription& d, Stage stage) {
  TagSequence out;
  out.reserve(d.tokens.size());
  for (const auto& t : d.tokens) out.push_back(StageTag(t, stage));
  return out;
}

CrossValidationResult CrossValidate(const Corpus& corpus, const CrossValidationOptions& options) {
  if (options.n > corpus.descriptions.size()) {
    throw Error(ErrorKind::kInvalidInput, "n = " + std::to_string(options.n) +
                                              " exceeds the corpus size " +
                                              std::to_string(corpus.descriptions.size()));
  }
  if (options.n < 2) throw Error(ErrorKind::kInvalidParameter, "n must be >= 2");
  if (options.folds < 1) throw Error(ErrorKind::kInvalidParameter, "folds must be >= 1");
  if (!(options.split_fraction > 0.0 && options.split_fraction < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "split fraction must be in (0, 1)");
  }
  if (options.iterations < 1) throw Error(ErrorKind::kInvalidParameter, "iterations must be >= 1");

  std::vector<FoldOutput> outputs(options.folds);
  internal::ParallelFor(options.folds, options.jobs,
                        [&](std::size_t f) { outputs[f] = RunFold(corpus, options, f); });

  CrossValidationResult result;
  result.iob.stage = Stage::kIob;
  result.domain.stage = Stage::kDomain;
  for (EvalReport* r : {&result.iob, &result.domain}) r->n_descriptions = options.n;
  for (FoldOutput& o : outputs) {
    result.iob.n_tokens += o.test_tokens;
    result.domain.n_tokens += o.test_tokens;
    result.iob.folds.push_back(std::move(o.iob));
    result.domain.folds.push_back(std::move(o.domain));
  }
  Summarize(result.iob);
  Summarize(result.domain);
  return result;
}

std::string ReportToJson(const CrossValidationResult& result, bool include_timing) {
  nlohmann::ordered_json j;
  j["iob"] = StageJson(result.iob, include_timing);
  j["domain"] = StageJson(result.domain, include_timing);
  return j.dump(2) + "\n";
}

void WriteReport(const CrossValidationResult& result, const std::filesystem::path& path,
                 bool include_timing) {
  const std::string text = ReportToJson(result, include_timing);
  internal::WriteFileAtomic(path, [&](std::ostream& out) { out << text; });
}

void PrintReportTable(const CrossValidationResult& result, std::ostream& out) {
  char line[160];
  for (const EvalReport* r : {&result.iob, &result.domain}) {
    out << (r->stage == Stage::kIob ? "IOB labels" : "Domain labels") << '\n';
    std::snprintf(line, sizeof(line), "%8s %7s %7s %7s %7s %9s\n", "n", "P", "R", "F1", "A",
                  "T (sec)");
    out << line;
    std::snprintf(line, sizeof(line), "%8zu %7.3f %7.3f %7.3f %7.3f %9.3f\n", r->n_descriptions,
                  r->mean.precision, r->mean.recall, r->mean.f1, r->mean.accuracy,
                  r->mean_train_seconds);
    out << line;
  }
}

}  // namespace seclabel
