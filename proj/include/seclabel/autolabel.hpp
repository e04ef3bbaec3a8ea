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

// Automatic IOB annotation of free text from a linked structured record,
// heuristic rules, and a relevant-terms gazetteer.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "seclabel/corpus.hpp"

namespace seclabel {

struct StructuredRecord {
  std::string id;
  std::vector<std::string> vendors;
  std::vector<std::string> products;  // os and application fields
  std::vector<std::string> versions;  // versions, updates, editions
  std::vector<std::string> languages;
  std::string cwe_id;
  std::string description;

  bool operator==(const StructuredRecord&) const = default;
};

// One JSON object per line: id, vendors[], products[], versions[],
// languages[], cwe, description. Ids must be unique.
std::vector<StructuredRecord> ReadRecords(std::istream& in);
std::vector<StructuredRecord> ReadRecords(const std::filesystem::path& path);
void WriteRecords(std::span<const StructuredRecord> records, std::ostream& out);
void WriteRecords(std::span<const StructuredRecord> records, const std::filesystem::path& path);

enum class SpanSource { kRecordMatch, kHeuristic, kGazetteer };

int PriorityOf(SpanSource source);
Provenance ToProvenance(SpanSource source);

struct MatchSpan {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  EntityLabel label = EntityLabel::kSoftwareVendor;
  SpanSource source = SpanSource::kRecordMatch;
  int priority = 0;

  std::size_t length() const { return end - start; }
  bool operator==(const MatchSpan&) const = default;
};

using Phrase = std::vector<std::string>;

// Relevant-term phrases, lowercased. Every entry has 1..max_n tokens and
// none is in the stoplist.
class Gazetteer {
 public:
  Gazetteer() = default;
  Gazetteer(std::set<Phrase> entries, std::size_t max_n, std::set<Phrase> stoplist);

  const std::set<Phrase>& entries() const { return entries_; }
  const std::set<Phrase>& stoplist() const { return stoplist_; }
  std::size_t max_n() const { return max_n_; }
  bool contains(const Phrase& phrase) const { return entries_.count(phrase) > 0; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::set<Phrase> entries_;
  std::size_t max_n_ = 3;
  std::set<Phrase> stoplist_;
};

inline constexpr std::size_t kMaxGazetteerN = 3;
inline constexpr std::size_t kDefaultMinCount = 20;

// Phrase-per-line files (tokens separated by single spaces). Lines are
// tokenized and lowercased on read; blank lines and lines starting with
// "#" are skipped.
std::set<Phrase> ReadPhraseList(std::istream& in);
std::set<Phrase> ReadPhraseList(const std::filesystem::path& path);
void WritePhraseList(const std::set<Phrase>& phrases, std::ostream& out);
void WritePhraseList(const std::set<Phrase>& phrases, const std::filesystem::path& path);

Gazetteer GazetteerFromPhrases(std::set<Phrase> phrases);

struct HeuristicOptions {
  std::vector<std::string> file_extensions = {"dll", "exe", "php", "c", "h",
                                              "js",  "asp", "jsp", "py", "pl"};
  std::size_t version_window = 3;
};

std::vector<MatchSpan> MatchRecord(std::span<const Token> tokens, const StructuredRecord& record);

// Version-shaped: digits and dots with an optional trailing ".x" or letter.
bool IsVersionShaped(std::string_view text);
bool IsVersionTrigger(std::string_view text);
bool IsCodeSymbol(std::string_view text, std::span<const std::string> file_extensions);

std::vector<MatchSpan> ApplyHeuristics(std::span<const Token> tokens,
                                       std::span<const MatchSpan> existing,
                                       const HeuristicOptions& options = {});

Gazetteer BuildGazetteer(std::span<const StructuredRecord> records, std::size_t min_count,
                         std::size_t max_n, const std::set<Phrase>& stoplist);

std::vector<MatchSpan> MatchGazetteer(std::span<const Token> tokens, const Gazetteer& gazetteer);

// Overlap resolution: record-match > heuristic > gazetteer, then longer
// span, then smaller start. Survivors become B/I runs.
std::vector<AnnotatedToken> ResolveAndTag(std::span<const Token> tokens,
                                          std::span<const MatchSpan> spans);

struct AutolabelStats {
  std::size_t skipped_empty = 0;
};

struct AutolabelOptions {
  HeuristicOptions heuristics;
  std::string pos_provider = "heuristic";  // empty: leave POS blank
  std::size_t jobs = 1;
  SourceKind source_kind = SourceKind::kNvd;
};

Corpus AutolabelCorpus(std::span<const StructuredRecord> records, const Gazetteer& gazetteer,
                       const AutolabelOptions& options = {}, AutolabelStats* stats = nullptr);

}  // namespace seclabel
