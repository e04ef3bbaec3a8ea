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

#include "seclabel/autolabel.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "io_util.hpp"
#include "parallel.hpp"
#include "seclabel/error.hpp"
#include "seclabel/features.hpp"

namespace seclabel {
namespace {

using internal::ToLowerAscii;

bool IsAsciiLower(char c) { return c >= 'a' && c <= 'z'; }
bool IsAsciiDigit(char c) { return c >= '0' && c <= '9'; }

bool HasAlnum(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return IsAsciiDigit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           static_cast<unsigned char>(c) >= 0x80;
  });
}

struct FieldRule {
  const std::vector<std::string>* values;
  EntityLabel label;
  bool case_sensitive;
};

void MatchValue(std::span<const Token> tokens, std::string_view value, EntityLabel label,
                bool case_sensitive, std::vector<MatchSpan>& out) {
  std::vector<Token> pattern = Tokenize(value);
  if (pattern.empty() || pattern.size() > tokens.size()) return;
  std::vector<std::string> want;
  for (const Token& t : pattern) want.push_back(case_sensitive ? t.text : ToLowerAscii(t.text));
  for (std::size_t s = 0; s + want.size() <= tokens.size(); ++s) {
    bool hit = true;
    for (std::size_t k = 0; k < want.size() && hit; ++k) {
      const std::string& text = tokens[s + k].text;
      hit = case_sensitive ? text == want[k] : ToLowerAscii(text) == want[k];
    }
    if (hit) {
      out.push_back({s, s + want.size(), label, SpanSource::kRecordMatch,
                     PriorityOf(SpanSource::kRecordMatch)});
    }
  }
}

}  // namespace

int PriorityOf(SpanSource source) {
  switch (source) {
    case SpanSource::kRecordMatch: return 3;
    case SpanSource::kHeuristic: return 2;
    case SpanSource::kGazetteer: return 1;
  }
  return 0;
}

Provenance ToProvenance(SpanSource source) {
  switch (source) {
    case SpanSource::kRecordMatch: return Provenance::kRecordMatch;
    case SpanSource::kHeuristic: return Provenance::kHeuristic;
    case SpanSource::kGazetteer: return Provenance::kGazetteer;
  }
  return Provenance::kNone;
}

Gazetteer::Gazetteer(std::set<Phrase> entries, std::size_t max_n, std::set<Phrase> stoplist)
    : max_n_(max_n), stoplist_(std::move(stoplist)) {
  if (max_n_ < 1 || max_n_ > kMaxGazetteerN) {
    throw Error(ErrorKind::kInvalidParameter, "gazetteer max_n must be in [1, 3]");
  }
  for (auto& e : entries) {
    if (e.empty() || e.size() > max_n_ || stoplist_.count(e)) continue;
    entries_.insert(e);
  }
}

Gazetteer GazetteerFromPhrases(std::set<Phrase> phrases) {
  std::size_t max_n = 1;
  for (const Phrase& p : phrases) max_n = std::max(max_n, p.size());
  if (max_n > kMaxGazetteerN) {
    throw Error(ErrorKind::kInvalidInput, "gazetteer phrase longer than 3 tokens");
  }
  return Gazetteer(std::move(phrases), max_n, {});
}

std::vector<MatchSpan> MatchRecord(std::span<const Token> tokens,
                                   const StructuredRecord& record) {
  std::vector<MatchSpan> spans;
  const std::array<FieldRule, 4> rules = {{
      {&record.vendors, EntityLabel::kSoftwareVendor, false},
      {&record.products, EntityLabel::kSoftwareProduct, false},
      {&record.versions, EntityLabel::kSoftwareVersion, true},
      {&record.languages, EntityLabel::kSoftwareLanguage, false},
  }};
  for (const FieldRule& rule : rules) {
    for (const std::string& value : *rule.values) {
      MatchValue(tokens, value, rule.label, rule.case_sensitive, spans);
    }
  }
  if (!record.id.empty()) {
    MatchValue(tokens, record.id, EntityLabel::kVulnerabilityName, true, spans);
  }
  std::sort(spans.begin(), spans.end(), [](const MatchSpan& a, const MatchSpan& b) {
    return std::tie(a.start, a.end, a.label) < std::tie(b.start, b.end, b.label);
  });
  spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
  return spans;
}

bool IsVersionShaped(std::string_view text) {
  std::size_t i = 0;
  auto digits = [&] {
    std::size_t start = i;
    while (i < text.size() && IsAsciiDigit(text[i])) ++i;
    return i > start;
  };
  if (!digits()) return false;
  while (i < text.size() && text[i] == '.') {
    std::size_t dot = i++;
    if (digits()) continue;
    // Trailing ".x" wildcard.
    return dot + 2 == text.size() && text[dot + 1] == 'x';
  }
  if (i == text.size()) return true;
  return i + 1 == text.size() && IsAsciiLower(text[i]);
}

bool IsVersionTrigger(std::string_view text) {
  static const std::array<std::string_view, 7> kTriggers = {
      "before", "after", "through", "prior", "to", "and", "earlier"};
  std::string lower = ToLowerAscii(text);
  return std::find(kTriggers.begin(), kTriggers.end(), lower) != kTriggers.end();
}

bool IsCodeSymbol(std::string_view text, std::span<const std::string> file_extensions) {
  WordShape shape = ComputeWordShape(text);
  if (shape.camel_case || shape.snake_case) return true;
  std::size_t dot = text.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size()) return false;
  std::string ext = ToLowerAscii(text.substr(dot + 1));
  return std::find(file_extensions.begin(), file_extensions.end(), ext) != file_extensions.end();
}

std::vector<MatchSpan> ApplyHeuristics(std::span<const Token> tokens,
                                       std::span<const MatchSpan> existing,
                                       const HeuristicOptions& options) {
  std::vector<MatchSpan> spans;
  const std::size_t n = tokens.size();
  const int priority = PriorityOf(SpanSource::kHeuristic);

  // anchor_end[e]: some product or version mention ends right before e.
  std::vector<bool> anchor_end(n + 1, false);
  for (const MatchSpan& s : existing) {
    if ((s.label == EntityLabel::kSoftwareProduct || s.label == EntityLabel::kSoftwareVersion) &&
        s.end <= n) {
      anchor_end[s.end] = true;
    }
  }
  const std::size_t window = std::max<std::size_t>(options.version_window, 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (!IsVersionShaped(tokens[j].text)) continue;
    bool anchored = false;
    std::size_t lo = j + 1 >= window ? j + 1 - window : 0;
    for (std::size_t e = j + 1; e-- > lo && !anchored;) {
      if (!anchor_end[e]) continue;
      anchored = true;
      for (std::size_t g = e; g < j && anchored; ++g) {
        anchored = IsVersionTrigger(tokens[g].text) || tokens[g].text == ",";
      }
    }
    if (anchored) {
      spans.push_back({j, j + 1, EntityLabel::kSoftwareVersion, SpanSource::kHeuristic, priority});
      anchor_end[j + 1] = true;
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    if (IsCodeSymbol(tokens[j].text, options.file_extensions)) {
      spans.push_back({j, j + 1, EntityLabel::kSoftwareSymbol, SpanSource::kHeuristic, priority});
    }
  }
  std::sort(spans.begin(), spans.end(), [](const MatchSpan& a, const MatchSpan& b) {
    return std::tie(a.start, a.label) < std::tie(b.start, b.label);
  });
  return spans;
}

Gazetteer BuildGazetteer(std::span<const StructuredRecord> records, std::size_t min_count,
                         std::size_t max_n, const std::set<Phrase>& stoplist) {
  if (min_count < 1) throw Error(ErrorKind::kInvalidParameter, "min_count must be >= 1");
  if (max_n < 1 || max_n > kMaxGazetteerN) {
    throw Error(ErrorKind::kInvalidParameter, "max_n must be in [1, 3]");
  }
  // Phase one: per-CWE n-gram counts. Phase two: threshold and union.
  std::map<std::string, std::map<Phrase, std::size_t>> counts;
  for (const StructuredRecord& r : records) {
    if (r.description.empty()) continue;
    std::vector<std::string> words;
    for (const Token& t : Tokenize(r.description)) words.push_back(ToLowerAscii(t.text));
    auto& group = counts[r.cwe_id];
    for (std::size_t i = 0; i < words.size(); ++i) {
      Phrase gram;
      for (std::size_t n = 1; n <= max_n && i + n <= words.size(); ++n) {
        // Pure punctuation never forms a relevant term.
        if (!HasAlnum(words[i + n - 1])) break;
        gram.push_back(words[i + n - 1]);
        ++group[gram];
      }
    }
  }
  std::set<Phrase> keep;
  for (const auto& [cwe, group] : counts) {
    for (const auto& [gram, count] : group) {
      if (count >= min_count && !stoplist.count(gram)) keep.insert(gram);
    }
  }
  return Gazetteer(std::move(keep), max_n, stoplist);
}

std::vector<MatchSpan> MatchGazetteer(std::span<const Token> tokens, const Gazetteer& gazetteer) {
  std::vector<MatchSpan> spans;
  if (gazetteer.empty()) return spans;
  std::vector<std::string> lower;
  lower.reserve(tokens.size());
  for (const Token& t : tokens) lower.push_back(ToLowerAscii(t.text));
  const int priority = PriorityOf(SpanSource::kGazetteer);
  std::size_t i = 0;
  Phrase probe;
  while (i < lower.size()) {
    std::size_t matched = 0;
    for (std::size_t len = std::min(gazetteer.max_n(), lower.size() - i); len >= 1; --len) {
      probe.assign(lower.begin() + static_cast<std::ptrdiff_t>(i),
                   lower.begin() + static_cast<std::ptrdiff_t>(i + len));
      if (gazetteer.contains(probe)) {
        matched = len;
        break;
      }
    }
    if (matched) {
      spans.push_back({i, i + matched, EntityLabel::kVulnerabilityRelevantTerm,
                       SpanSource::kGazetteer, priority});
      i += matched;
    } else {
      ++i;
    }
  }
  return spans;
}

std::vector<AnnotatedToken> ResolveAndTag(std::span<const Token> tokens,
                                          std::span<const MatchSpan> spans) {
  std::vector<MatchSpan> order(spans.begin(), spans.end());
  for (const MatchSpan& s : order) {
    if (s.start >= s.end || s.end > tokens.size()) {
      throw Error(ErrorKind::kInvalidInput, "match span outside the description");
    }
  }
  std::stable_sort(order.begin(), order.end(), [](const MatchSpan& a, const MatchSpan& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.length() != b.length()) return a.length() > b.length();
    if (a.start != b.start) return a.start < b.start;
    return a.label < b.label;
  });

  std::vector<AnnotatedToken> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back({t, IobTag::O(), {}, Provenance::kNone});
  std::vector<bool> taken(tokens.size(), false);
  for (const MatchSpan& s : order) {
    bool free = true;
    for (std::size_t k = s.start; k < s.end && free; ++k) free = !taken[k];
    if (!free) continue;
    for (std::size_t k = s.start; k < s.end; ++k) {
      taken[k] = true;
      out[k].iob = k == s.start ? IobTag::B(s.label) : IobTag::I(s.label);
      out[k].provenance = ToProvenance(s.source);
    }
  }
  return out;
}

Corpus AutolabelCorpus(std::span<const StructuredRecord> records, const Gazetteer& gazetteer,
                       const AutolabelOptions& options, AutolabelStats* stats) {
  std::unique_ptr<PosProvider> pos;
  if (!options.pos_provider.empty()) pos = MakePosProvider(options.pos_provider);

  std::vector<std::optional<AnnotatedDescription>> slots(records.size());
  internal::ParallelFor(records.size(), options.jobs, [&](std::size_t r) {
    const StructuredRecord& record = records[r];
    if (record.description.empty()) return;
    AnnotatedDescription d;
    d.source_id = record.id;
    d.source_kind = options.source_kind;
    d.raw_text = record.description;
    std::vector<Token> tokens = Tokenize(d.raw_text);
    std::vector<MatchSpan> spans = MatchRecord(tokens, record);
    std::vector<MatchSpan> heuristic = ApplyHeuristics(tokens, spans, options.heuristics);
    std::vector<MatchSpan> gaz = MatchGazetteer(tokens, gazetteer);
    spans.insert(spans.end(), heuristic.begin(), heuristic.end());
    spans.insert(spans.end(), gaz.begin(), gaz.end());
    d.tokens = ResolveAndTag(tokens, spans);
    if (pos) {
      std::vector<std::string> tags = pos->Tag(tokens);
      for (std::size_t k = 0; k < tags.size(); ++k) d.tokens[k].pos = std::move(tags[k]);
    }
    slots[r] = std::move(d);
  });

  Corpus corpus;
  std::size_t skipped = 0;
  for (auto& slot : slots) {
    if (slot) {
      corpus.descriptions.push_back(std::move(*slot));
    } else {
      ++skipped;
    }
  }
  if (stats) stats->skipped_empty = skipped;
  return corpus;
}

}  // namespace seclabel
