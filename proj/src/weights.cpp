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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seclabel/error.hpp"
#include "seclabel/simd/kernels.hpp"
#include "seclabel/tagger.hpp"

namespace seclabel {

FeatureWeights::FeatureWeights(std::size_t num_tags)
    : num_tags_(num_tags), width_(simd::PaddedWidth(num_tags)) {}

void FeatureWeights::Set(std::string_view feature, std::size_t tag, double weight) {
  if (tag >= num_tags_) throw Error(ErrorKind::kInvalidInput, "tag index out of range");
  auto it = index_.find(std::string(feature));
  std::uint32_t r;
  if (it == index_.end()) {
    r = static_cast<std::uint32_t>(names_.size());
    index_.emplace(std::string(feature), r);
    names_.emplace_back(feature);
    table_.resize(table_.size() + width_, 0.0);
  } else {
    r = it->second;
  }
  table_[static_cast<std::size_t>(r) * width_ + tag] = weight;
}

double FeatureWeights::Get(std::string_view feature, std::size_t tag) const {
  auto it = index_.find(std::string(feature));
  if (it == index_.end() || tag >= num_tags_) return 0.0;
  return table_[static_cast<std::size_t>(it->second) * width_ + tag];
}

void FeatureWeights::Score(std::span<const std::string> features, std::span<double> out) const {
  std::vector<std::uint32_t> rows;
  rows.reserve(features.size());
  for (const std::string& f : features) {
    auto it = index_.find(f);
    if (it != index_.end()) rows.push_back(it->second);
  }
  double buf[64];
  std::vector<double> heap;
  double* acc = buf;
  if (width_ > 64) {
    heap.resize(width_);
    acc = heap.data();
  }
  if (width_ == 0) return;
  simd::ActiveKernels().accumulate_rows(table_.data(), width_, rows, acc);
  std::copy(acc, acc + std::min(num_tags_, out.size()), out.begin());
}

std::vector<std::tuple<std::string, std::size_t, double>> FeatureWeights::Entries() const {
  std::vector<std::uint32_t> order(names_.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return names_[a] < names_[b]; });
  std::vector<std::tuple<std::string, std::size_t, double>> out;
  for (std::uint32_t r : order) {
    for (std::size_t t = 0; t < num_tags_; ++t) {
      double w = table_[static_cast<std::size_t>(r) * width_ + t];
      if (w != 0.0) out.emplace_back(names_[r], t, w);
    }
  }
  return out;
}

bool FeatureWeights::operator==(const FeatureWeights& other) const {
  return num_tags_ == other.num_tags_ && Entries() == other.Entries();
}

WeightVector::WeightVector(std::size_t num_tags)
    : num_tags_(num_tags), width_(simd::PaddedWidth(num_tags)) {
  if (num_tags == 0) throw Error(ErrorKind::kInvalidParameter, "tagset must be non-empty");
}

std::uint32_t WeightVector::Intern(std::string_view feature) {
  auto it = index_.find(std::string(feature));
  if (it != index_.end()) return it->second;
  auto r = static_cast<std::uint32_t>(names_.size());
  index_.emplace(std::string(feature), r);
  names_.emplace_back(feature);
  weights_.resize(weights_.size() + width_, 0.0);
  totals_.resize(totals_.size() + width_, 0.0);
  stamps_.push_back(0);
  return r;
}

std::optional<std::uint32_t> WeightVector::Find(std::string_view feature) const {
  auto it = index_.find(std::string(feature));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double WeightVector::weight(std::string_view feature, std::size_t tag) const {
  auto r = Find(feature);
  if (!r || tag >= num_tags_) return 0.0;
  return weights_[static_cast<std::size_t>(*r) * width_ + tag];
}

double WeightVector::total(std::string_view feature, std::size_t tag) const {
  auto r = Find(feature);
  if (!r || tag >= num_tags_) return 0.0;
  return totals_[static_cast<std::size_t>(*r) * width_ + tag];
}

std::uint64_t WeightVector::timestamp(std::string_view feature) const {
  auto r = Find(feature);
  return r ? stamps_[*r] : 0;
}

void WeightVector::Score(std::span<const std::uint32_t> rows, std::span<double> out) const {
  simd::ActiveKernels().accumulate_rows(weights_.data(), width_, rows, out.data());
}

std::size_t WeightVector::Predict(std::span<const std::uint32_t> rows) const {
  double buf[64];
  std::vector<double> heap;
  double* scores = buf;
  if (width_ > 64) {
    heap.resize(width_);
    scores = heap.data();
  }
  simd::ActiveKernels().accumulate_rows(weights_.data(), width_, rows, scores);
  std::size_t best = 0;
  for (std::size_t t = 1; t < num_tags_; ++t) {
    if (scores[t] > scores[best]) best = t;
  }
  return best;
}

void WeightVector::Flush(std::uint32_t r) {
  const std::size_t off = static_cast<std::size_t>(r) * width_;
  const auto elapsed = static_cast<double>(counter_ - stamps_[r]);
  if (elapsed != 0.0) {
    simd::ActiveKernels().scaled_add(totals_.data() + off, weights_.data() + off, elapsed, width_);
  }
  stamps_[r] = counter_;
}

void WeightVector::Update(std::span<const std::uint32_t> rows, std::size_t gold,
                          std::size_t predicted) {
  if (gold == predicted) return;
  for (std::uint32_t r : rows) {
    Flush(r);
    double* w = row(r);
    w[gold] += 1.0;
    w[predicted] -= 1.0;
  }
}

std::size_t WeightVector::Learn(std::span<const std::uint32_t> rows, std::size_t gold) {
  std::size_t predicted = Predict(rows);
  if (predicted != gold) Update(rows, gold, predicted);
  Tick();
  return predicted;
}

FeatureWeights WeightVector::Averaged() const {
  FeatureWeights out(num_tags_);
  out.names_ = names_;
  out.index_ = index_;
  out.table_.assign(totals_.size(), 0.0);
  if (counter_ == 0) return out;
  const simd::KernelTable& k = simd::ActiveKernels();
  std::vector<double> flushed(width_);
  const auto i = static_cast<double>(counter_);
  for (std::size_t r = 0; r < names_.size(); ++r) {
    const std::size_t off = r * width_;
    std::copy(totals_.begin() + static_cast<std::ptrdiff_t>(off),
              totals_.begin() + static_cast<std::ptrdiff_t>(off + width_), flushed.begin());
    const auto elapsed = static_cast<double>(counter_ - stamps_[r]);
    if (elapsed != 0.0) k.scaled_add(flushed.data(), weights_.data() + off, elapsed, width_);
    k.divide(out.table_.data() + off, flushed.data(), i, width_);
  }
  return out;
}

FeatureWeights WeightVector::Raw() const {
  FeatureWeights out(num_tags_);
  out.names_ = names_;
  out.index_ = index_;
  out.table_ = weights_;
  return out;
}

double ScoreTag(std::span<const std::string> features, std::size_t tag,
                const FeatureWeights& weights) {
  double s = 0.0;
  for (const std::string& f : features) s += weights.Get(f, tag);
  return s;
}

std::vector<double> Softmax(std::span<const double> scores) {
  std::vector<double> p(scores.size());
  if (scores.empty()) return p;
  const double top = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (std::size_t t = 0; t < scores.size(); ++t) {
    p[t] = std::exp(scores[t] - top);
    z += p[t];
  }
  for (double& v : p) v /= z;
  return p;
}

std::vector<double> TagProbability(std::span<const std::string> features,
                                   const FeatureWeights& weights, std::size_t num_tags) {
  if (num_tags == 0) throw Error(ErrorKind::kInvalidParameter, "tagset must be non-empty");
  std::vector<double> scores(std::max(num_tags, weights.num_tags()), 0.0);
  if (weights.num_tags() > 0) weights.Score(features, scores);
  scores.resize(num_tags);
  return Softmax(scores);
}

}  // namespace seclabel
