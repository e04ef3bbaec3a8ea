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

// Model file, tab separated, one record per line:
//
//   seclabel-model  1
//   stage           iob|domain
//   tags            O  B  I
//   config          {"templates": ...}
//   vendor_terms    <count>      followed by <count> term lines
//   product_terms   <count>      followed by <count> term lines
//   weights         <count>      followed by <count> feature/tag/weight lines
//   end
//
// Weights are written in shortest round-trip form, so load(save(m)) == m.

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "io_util.hpp"
#include "seclabel/error.hpp"
#include "seclabel/tagger.hpp"

namespace seclabel {
namespace {

constexpr std::string_view kMagic = "seclabel-model";

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string_view> Next(std::string_view what) {
    if (!std::getline(in_, line_)) {
      throw Error(ErrorKind::kCorruptModel, "truncated model file: expected " + std::string(what));
    }
    ++lineno_;
    internal::StripCarriageReturn(line_);
    return internal::Split(line_, '\t');
  }

  std::vector<std::string_view> Expect(std::string_view key, std::size_t fields) {
    auto cols = Next(key);
    if (cols.empty() || cols[0] != key || (fields && cols.size() != fields)) {
      Fail("expected '" + std::string(key) + "'");
    }
    return cols;
  }

  [[noreturn]] void Fail(const std::string& message) const {
    throw Error(ErrorKind::kCorruptModel, message, lineno_);
  }

  std::size_t ParseCount(std::string_view text) const {
    std::size_t v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) Fail("bad count");
    return v;
  }

  double ParseDouble(std::string_view text) const {
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) Fail("bad weight");
    return v;
  }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t lineno_ = 0;
};

void WriteTerms(std::ostream& out, std::string_view key, const std::set<std::string>& terms) {
  out << key << '\t' << terms.size() << '\n';
  for (const std::string& t : terms) out << t << '\n';
}

std::set<std::string> ReadTerms(LineReader& reader, std::string_view key) {
  auto cols = reader.Expect(key, 2);
  std::size_t count = reader.ParseCount(cols[1]);
  std::set<std::string> terms;
  for (std::size_t i = 0; i < count; ++i) {
    auto line = reader.Next("gazetteer term");
    if (line.size() != 1 || line[0].empty()) reader.Fail("bad gazetteer term");
    terms.emplace(line[0]);
  }
  return terms;
}

}  // namespace

void SaveModel(const TaggerModel& model, std::ostream& out) {
  out << kMagic << '\t' << model.format_version << '\n';
  out << "stage\t" << ToString(model.stage) << '\n';
  out << "tags";
  for (const std::string& t : model.tagset) out << '\t' << t;
  out << '\n';
  out << "config\t" << FeatureConfigToJson(model.config) << '\n';
  WriteTerms(out, "vendor_terms", model.gazetteers.vendor_terms);
  WriteTerms(out, "product_terms", model.gazetteers.product_terms);
  auto entries = model.weights.Entries();
  out << "weights\t" << entries.size() << '\n';
  for (const auto& [feature, tag, weight] : entries) {
    out << feature << '\t' << model.tagset.at(tag) << '\t' << FormatDouble(weight) << '\n';
  }
  out << "end\n";
}

void SaveModel(const TaggerModel& model, const std::filesystem::path& path) {
  internal::WriteFileAtomic(path, [&](std::ostream& out) { SaveModel(model, out); });
}

TaggerModel LoadModel(std::istream& in) {
  LineReader reader(in);
  TaggerModel model;

  auto header = reader.Next("header");
  if (header.size() != 2 || header[0] != kMagic) reader.Fail("not a seclabel model file");
  int version = 0;
  {
    auto res = std::from_chars(header[1].data(), header[1].data() + header[1].size(), version);
    if (res.ec != std::errc()) reader.Fail("bad format version");
  }
  if (version != kModelFormatVersion) {
    throw Error(ErrorKind::kVersionMismatch, "model format version " + std::to_string(version) +
                                                 ", expected " +
                                                 std::to_string(kModelFormatVersion));
  }
  model.format_version = version;

  auto stage = reader.Expect("stage", 2);
  auto parsed_stage = ParseStage(stage[1]);
  if (!parsed_stage) reader.Fail("unknown stage");
  model.stage = *parsed_stage;

  auto tags = reader.Expect("tags", 0);
  if (tags.size() < 2) reader.Fail("empty tagset");
  for (std::size_t i = 1; i < tags.size(); ++i) model.tagset.emplace_back(tags[i]);

  auto config = reader.Expect("config", 2);
  try {
    model.config = ParseFeatureConfig(config[1]);
  } catch (const Error& e) {
    reader.Fail(std::string("bad config: ") + e.what());
  }

  model.gazetteers.vendor_terms = ReadTerms(reader, "vendor_terms");
  model.gazetteers.product_terms = ReadTerms(reader, "product_terms");

  auto weights = reader.Expect("weights", 2);
  std::size_t count = reader.ParseCount(weights[1]);
  model.weights = FeatureWeights(model.tagset.size());
  for (std::size_t i = 0; i < count; ++i) {
    auto cols = reader.Next("weight");
    if (cols.size() != 3 || cols[0].empty()) reader.Fail("bad weight line");
    auto it = std::find(model.tagset.begin(), model.tagset.end(), cols[1]);
    if (it == model.tagset.end()) reader.Fail("weight for unknown tag");
    model.weights.Set(cols[0], static_cast<std::size_t>(it - model.tagset.begin()),
                      reader.ParseDouble(cols[2]));
  }
  reader.Expect("end", 1);
  return model;
}

TaggerModel LoadModel(const std::filesystem::path& path) {
  auto in = internal::OpenForRead(path);
  return LoadModel(in);
}

}  // namespace seclabel
