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

#include <sstream>

#include "doctest.h"
#include "io_util.hpp"
#include "seclabel/autolabel.hpp"
#include "seclabel/error.hpp"
#include "seclabel/synth.hpp"
#include "test_util.hpp"

namespace seclabel {
namespace {

std::vector<std::string> Labels(const std::vector<AnnotatedToken>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(ToString(t.iob));
  return out;
}

std::vector<MatchSpan> RunAll(const std::vector<Token>& tokens, const StructuredRecord& r,
                              const Gazetteer& g) {
  auto spans = MatchRecord(tokens, r);
  auto h = ApplyHeuristics(tokens, spans);
  auto z = MatchGazetteer(tokens, g);
  spans.insert(spans.end(), h.begin(), h.end());
  spans.insert(spans.end(), z.begin(), z.end());
  return spans;
}

TEST_CASE("record match") {
  StructuredRecord r;
  r.vendors = {"Apple"};
  r.products = {"Safari"};
  auto spans = MatchRecord(Tokenize("Apple Safari 6.0"), r);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].start == 0);
  CHECK(spans[0].end == 1);
  CHECK(spans[0].label == EntityLabel::kSoftwareVendor);
  CHECK(spans[1].start == 1);
  CHECK(spans[1].label == EntityLabel::kSoftwareProduct);
  CHECK(spans[1].priority == 3);

  CHECK(MatchRecord(Tokenize("Apple Safari 6.0"), StructuredRecord{}).empty());

  StructuredRecord id;
  id.id = "CVE-2012-0678";
  auto named = MatchRecord(Tokenize("CVE-2012-0678 in WebKit"), id);
  REQUIRE(named.size() == 1);
  CHECK(named[0].start == 0);
  CHECK(named[0].end == 1);
  CHECK(named[0].label == EntityLabel::kVulnerabilityName);
}

TEST_CASE("record match case rules") {
  StructuredRecord r;
  r.id = "CVE-2012-0678";
  r.products = {"Internet Explorer"};
  r.versions = {"6.0b"};
  auto spans = MatchRecord(Tokenize("internet EXPLORER 6.0B 6.0b cve-2012-0678"), r);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].start == 0);
  CHECK(spans[0].end == 2);
  CHECK(spans[1].start == 3);
  CHECK(spans[1].label == EntityLabel::kSoftwareVersion);
}

TEST_CASE("every record-matched span equals some field under the case rule") {
  internal::Rng rng(21);
  SyntheticData data = GenerateSynthetic(60, 4);
  for (const StructuredRecord& r : data.records) {
    std::vector<Token> tokens = Tokenize(r.description);
    for (const MatchSpan& s : MatchRecord(tokens, r)) {
      std::string joined;
      for (std::size_t k = s.start; k < s.end; ++k) joined += (k > s.start ? " " : "") + tokens[k].text;
      const std::vector<std::string>* field = nullptr;
      bool exact = false;
      switch (s.label) {
        case EntityLabel::kSoftwareVendor: field = &r.vendors; break;
        case EntityLabel::kSoftwareProduct: field = &r.products; break;
        case EntityLabel::kSoftwareVersion: field = &r.versions; exact = true; break;
        case EntityLabel::kSoftwareLanguage: field = &r.languages; break;
        default: break;
      }
      if (!field) {
        CHECK(joined == r.id);
        continue;
      }
      bool found = false;
      for (const std::string& v : *field) {
        std::string norm;
        for (const Token& t : Tokenize(v)) norm += (norm.empty() ? "" : " ") + t.text;
        found |= exact ? norm == joined
                       : internal::ToLowerAscii(norm) == internal::ToLowerAscii(joined);
      }
      CHECK(found);
    }
  }
}

TEST_CASE("version heuristics") {
  StructuredRecord r;
  r.products = {"Safari"};
  auto tokens = Tokenize("Apple Safari before 2.5 allows");
  auto h = ApplyHeuristics(tokens, MatchRecord(tokens, r));
  REQUIRE(h.size() == 1);
  CHECK(h[0].start == 3);
  CHECK(h[0].label == EntityLabel::kSoftwareVersion);

  tokens = Tokenize("Foo Bar 1.1.4 through 2.3.0 is affected");
  r.products = {"Foo Bar"};
  h = ApplyHeuristics(tokens, MatchRecord(tokens, r));
  REQUIRE(h.size() == 2);
  CHECK(h[0].start == 2);
  CHECK(h[1].start == 4);

  // Not after a product or version.
  tokens = Tokenize("released 2.5 today");
  CHECK(ApplyHeuristics(tokens, MatchRecord(tokens, r)).empty());
  // Gap word that is not a trigger.
  tokens = Tokenize("Foo Bar version 2.5");
  CHECK(ApplyHeuristics(tokens, MatchRecord(tokens, r)).empty());
  // Outside the window.
  tokens = Tokenize("Foo Bar and , before to 2.5");
  CHECK(ApplyHeuristics(tokens, MatchRecord(tokens, r)).empty());

  CHECK(IsVersionShaped("2.5"));
  CHECK(IsVersionShaped("5.3.x"));
  CHECK(IsVersionShaped("1.0b"));
  CHECK(IsVersionShaped("10"));
  CHECK_FALSE(IsVersionShaped("v2"));
  CHECK_FALSE(IsVersionShaped("2."));
  CHECK_FALSE(IsVersionShaped("CVE-2012-0678"));
}

TEST_CASE("symbol heuristics") {
  const HeuristicOptions opts;
  for (const char* s : {"camelCaseExample", "snake_case_example", "foo.dll", "index.php", "a.h"}) {
    auto tokens = Tokenize(std::string("x ") + s + " y");
    auto h = ApplyHeuristics(tokens, {}, opts);
    REQUIRE(h.size() == 1);
    CHECK(h[0].start == 1);
    CHECK(h[0].label == EntityLabel::kSoftwareSymbol);
  }
  CHECK(IsCodeSymbol("LIB.DLL", opts.file_extensions));
  for (const char* s : {"plain", "Capital", "ALLCAPS", "foo.txt", "_private", "2.5"}) {
    CHECK_FALSE(IsCodeSymbol(s, opts.file_extensions));
  }
}

TEST_CASE("gazetteer construction") {
  std::vector<StructuredRecord> records;
  for (int i = 0; i < 20; ++i) {
    StructuredRecord r;
    r.id = "r" + std::to_string(i);
    r.cwe_id = "CWE-119";
    r.description = "A buffer overflow in the parser.";
    records.push_back(r);
  }
  Gazetteer g = BuildGazetteer(records, 20, 3, {{"in", "the"}});
  CHECK(g.contains({"buffer", "overflow"}));
  CHECK_FALSE(g.contains({"in", "the"}));
  CHECK_FALSE(g.contains({"."}));
  CHECK(BuildGazetteer(records, 21, 3, {}).empty());
  CHECK(BuildGazetteer({}, 20, 3, {}).empty());

  // Counts are per CWE class, not pooled.
  for (int i = 0; i < 20; ++i) records[i].cwe_id = i % 2 ? "CWE-1" : "CWE-2";
  CHECK_FALSE(BuildGazetteer(records, 20, 3, {}).contains({"buffer", "overflow"}));
  CHECK(BuildGazetteer(records, 10, 3, {}).contains({"buffer", "overflow"}));

  CHECK_THROWS_AS(BuildGazetteer(records, 0, 3, {}), Error);
  CHECK_THROWS_AS(BuildGazetteer(records, 20, 4, {}), Error);
}

TEST_CASE("gazetteer matching") {
  Gazetteer g = GazetteerFromPhrases({{"remote", "attackers"}});
  auto spans = MatchGazetteer(Tokenize("allows remote attackers to"), g);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].start == 1);
  CHECK(spans[0].end == 3);
  CHECK(MatchGazetteer(Tokenize("allows remote attackers to"), Gazetteer{}).empty());

  Gazetteer nested = GazetteerFromPhrases({{"execute", "arbitrary", "code"}, {"execute", "arbitrary"}});
  spans = MatchGazetteer(Tokenize("Execute arbitrary code"), nested);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].length() == 3);
}

TEST_CASE("gazetteer spans are exhaustive and longest-leftmost") {
  internal::Rng rng(8);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  for (int round = 0; round < 300; ++round) {
    std::set<Phrase> phrases;
    for (int p = 0; p < 4; ++p) {
      Phrase ph;
      const std::size_t len = 1 + rng.Below(3);
      for (std::size_t k = 0; k < len; ++k) ph.push_back(rng.Pick(vocab));
      phrases.insert(ph);
    }
    Gazetteer g = GazetteerFromPhrases(phrases);
    std::string text;
    const std::size_t n = 1 + rng.Below(12);
    for (std::size_t i = 0; i < n; ++i) text += rng.Pick(vocab) + " ";
    auto tokens = Tokenize(text);
    auto spans = MatchGazetteer(tokens, g);
    std::vector<int> cover(tokens.size(), 0);
    for (const auto& s : spans) {
      for (std::size_t k = s.start; k < s.end; ++k) ++cover[k];
    }
    for (int c : cover) CHECK(c <= 1);
    // Every occurrence of an entry overlaps some span.
    for (const Phrase& ph : phrases) {
      for (std::size_t s = 0; s + ph.size() <= tokens.size(); ++s) {
        bool eq = true;
        for (std::size_t k = 0; k < ph.size(); ++k) eq &= tokens[s + k].text == ph[k];
        if (!eq) continue;
        bool touched = false;
        for (std::size_t k = s; k < s + ph.size(); ++k) touched |= cover[k] > 0;
        CHECK(touched);
      }
    }
  }
}

TEST_CASE("overlap resolution") {
  auto tokens = Tokenize("a b c d");
  CHECK(Labels(ResolveAndTag(tokens, {})) == std::vector<std::string>{"O", "O", "O", "O"});

  std::vector<MatchSpan> spans = {
      {0, 2, EntityLabel::kSoftwareProduct, SpanSource::kRecordMatch, 3},
      {1, 3, EntityLabel::kVulnerabilityRelevantTerm, SpanSource::kGazetteer, 1}};
  auto tagged = ResolveAndTag(tokens, spans);
  CHECK(Labels(tagged) == std::vector<std::string>{"B-software-product", "I-software-product",
                                                   "O", "O"});
  CHECK(tagged[0].provenance == Provenance::kRecordMatch);
  CHECK(tagged[2].provenance == Provenance::kNone);

  std::vector<MatchSpan> disjoint = {
      {0, 1, EntityLabel::kSoftwareVendor, SpanSource::kRecordMatch, 3},
      {2, 4, EntityLabel::kVulnerabilityRelevantTerm, SpanSource::kGazetteer, 1}};
  CHECK(Labels(ResolveAndTag(tokens, disjoint)) ==
        std::vector<std::string>{"B-software-vendor", "O", "B-vulnerability-relevant-term",
                                 "I-vulnerability-relevant-term"});

  // Same priority: longer first, then leftmost.
  std::vector<MatchSpan> ties = {
      {1, 2, EntityLabel::kSoftwareSymbol, SpanSource::kHeuristic, 2},
      {0, 2, EntityLabel::kSoftwareVersion, SpanSource::kHeuristic, 2},
      {1, 3, EntityLabel::kSoftwareVersion, SpanSource::kHeuristic, 2}};
  CHECK(Labels(ResolveAndTag(tokens, ties)) ==
        std::vector<std::string>{"B-software-version", "I-software-version", "O", "O"});
}

TEST_CASE("resolved output is non-overlapping and IOB-valid") {
  internal::Rng rng(3);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 1 + rng.Below(10);
    std::vector<Token> tokens;
    std::string text;
    for (std::size_t i = 0; i < n; ++i) text += "w ";
    tokens = Tokenize(text);
    std::vector<MatchSpan> spans;
    for (int k = 0; k < 6; ++k) {
      std::size_t s = rng.Below(n);
      std::size_t e = s + 1 + rng.Below(std::min<std::size_t>(3, n - s));
      auto src = static_cast<SpanSource>(rng.Below(3));
      spans.push_back({s, e, kAllEntityLabels[rng.Below(7)], src, PriorityOf(src)});
    }
    auto tagged = ResolveAndTag(tokens, spans);
    std::optional<IobTag> prev;
    for (const auto& t : tagged) {
      CHECK(IsValidTransition(prev, t.iob));
      CHECK((t.provenance == Provenance::kNone) == t.iob.is_outside());
      prev = t.iob;
    }
  }
}

TEST_CASE("autolabel corpus") {
  CHECK(AutolabelCorpus({}, Gazetteer{}).descriptions.empty());

  StructuredRecord r;
  r.id = "CVE-2012-0678";
  r.vendors = {"Apple"};
  r.products = {"Safari"};
  r.cwe_id = "CWE-119";
  r.description = "Buffer overflow in Apple Safari before 5.1.7 allows remote attackers to "
                  "execute arbitrary code via the getFoo function in webkit.dll.";
  StructuredRecord blank;
  blank.id = "CVE-0";
  Gazetteer g = GazetteerFromPhrases({{"remote", "attackers"}, {"buffer", "overflow"}});
  AutolabelStats stats;
  Corpus c = AutolabelCorpus(std::vector<StructuredRecord>{r, blank}, g, {}, &stats);
  CHECK(stats.skipped_empty == 1);
  REQUIRE(c.descriptions.size() == 1);
  const auto& tokens = c.descriptions[0].tokens;
  std::vector<std::string> want = {
      "B-vulnerability-relevant-term", "I-vulnerability-relevant-term", "O", "B-software-vendor",
      "B-software-product", "O", "B-software-version", "O", "B-vulnerability-relevant-term",
      "I-vulnerability-relevant-term", "O", "O", "O", "O", "O", "O", "B-software-symbol", "O",
      "O", "B-software-symbol", "O"};
  CHECK(Labels(tokens) == want);
  CHECK(tokens[6].provenance == Provenance::kHeuristic);
  for (const auto& t : tokens) CHECK_FALSE(t.pos.empty());
  CHECK(c.token_count() == tokens.size());
}

TEST_CASE("autolabel is deterministic across worker counts") {
  SyntheticData data = GenerateSynthetic(80, 12);
  Gazetteer g = BuildGazetteer(data.records, 5, 3, SyntheticStoplist(data.gold));
  AutolabelOptions one;
  AutolabelOptions four;
  four.jobs = 4;
  std::ostringstream a, b;
  WriteCorpus(AutolabelCorpus(data.records, g, one), a);
  WriteCorpus(AutolabelCorpus(data.records, g, four), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("record and phrase files") {
  StructuredRecord r;
  r.id = "CVE-1";
  r.vendors = {"Apple"};
  r.products = {"Safari", "WebKit"};
  r.cwe_id = "CWE-79";
  r.description = "text \"quoted\"\nnext";
  std::ostringstream out;
  WriteRecords(std::vector<StructuredRecord>{r}, out);
  std::istringstream in(out.str());
  auto back = ReadRecords(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0] == r);

  std::istringstream dup("{\"id\":\"a\"}\n{\"id\":\"a\"}\n");
  CHECK_THROWS_AS(ReadRecords(dup), Error);
  std::istringstream bad("{\"id\":\"a\",\"vendors\":[1]}\n");
  CHECK_THROWS_AS(ReadRecords(bad), Error);
  std::istringstream junk("not json\n");
  CHECK_THROWS_AS(ReadRecords(junk), Error);

  std::istringstream phrases("# comment\nIn The\n\nremote attackers\n");
  auto set = ReadPhraseList(phrases);
  CHECK(set == std::set<Phrase>{{"in", "the"}, {"remote", "attackers"}});
}

}  // namespace
}  // namespace seclabel
