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

// Core data model: tokens, entity labels, IOB tags, annotated descriptions,
// and the column-format corpus file.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seclabel {

struct Token {
  std::string text;
  std::size_t index = 0;
  std::size_t char_start = 0;
  std::size_t char_end = 0;  // exclusive

  bool operator==(const Token&) const = default;
};

enum class EntityLabel : std::uint8_t {
  kSoftwareVendor,
  kSoftwareProduct,
  kSoftwareVersion,
  kSoftwareLanguage,
  kVulnerabilityName,
  kSoftwareSymbol,
  kVulnerabilityRelevantTerm,
};

inline constexpr std::size_t kNumEntityLabels = 7;

inline constexpr std::array<EntityLabel, kNumEntityLabels> kAllEntityLabels = {
    EntityLabel::kSoftwareVendor,    EntityLabel::kSoftwareProduct,
    EntityLabel::kSoftwareVersion,   EntityLabel::kSoftwareLanguage,
    EntityLabel::kVulnerabilityName, EntityLabel::kSoftwareSymbol,
    EntityLabel::kVulnerabilityRelevantTerm,
};

// Kebab-case wire names, e.g. "software-vendor".
std::string_view ToString(EntityLabel label);
std::optional<EntityLabel> ParseEntityLabel(std::string_view name);

// B/I/O tag. The label slot is empty for stage-1 (bare IOB) tags.
struct IobTag {
  enum class Kind : std::uint8_t { kO, kB, kI };

  Kind kind = Kind::kO;
  std::optional<EntityLabel> label;

  static IobTag O() { return {}; }
  static IobTag B(std::optional<EntityLabel> l = std::nullopt) { return {Kind::kB, l}; }
  static IobTag I(std::optional<EntityLabel> l = std::nullopt) { return {Kind::kI, l}; }

  bool is_outside() const { return kind == Kind::kO; }
  bool operator==(const IobTag&) const = default;
};

// "O", "B", "I", "B-software-vendor", ...
std::string ToString(const IobTag& tag);
std::optional<IobTag> ParseIobTag(std::string_view text);

// True when `tag` may follow `prev` (nullopt = sequence start).
bool IsValidTransition(const std::optional<IobTag>& prev, const IobTag& tag);

enum class Provenance : std::uint8_t { kRecordMatch, kHeuristic, kGazetteer, kModel, kNone };

std::string_view ToString(Provenance p);
std::optional<Provenance> ParseProvenance(std::string_view text);

enum class SourceKind : std::uint8_t { kNvd, kMsBulletin, kMetasploit, kSynthetic, kOther };

std::string_view ToString(SourceKind k);
std::optional<SourceKind> ParseSourceKind(std::string_view text);

struct AnnotatedToken {
  Token token;
  IobTag iob;
  std::string pos;
  Provenance provenance = Provenance::kNone;

  bool operator==(const AnnotatedToken&) const = default;
};

struct AnnotatedDescription {
  std::string source_id;
  SourceKind source_kind = SourceKind::kOther;
  std::string raw_text;
  std::vector<AnnotatedToken> tokens;

  bool operator==(const AnnotatedDescription&) const = default;
};

struct Corpus {
  std::vector<AnnotatedDescription> descriptions;

  std::size_t token_count() const;
  bool operator==(const Corpus&) const = default;
};

// Whitespace split, then punctuation split off word boundaries. Interior
// dots stay when the token carries a digit ("2.3.0", "2.2.x") or ends in a
// short lowercase extension ("foo.dll"); interior hyphens between word
// characters stay ("CVE-2012-0678"); underscores are word characters.
// Bytes >= 0x80 are treated as word characters (UTF-8 pass-through).
std::vector<Token> Tokenize(std::string_view raw_text);

// Wraps plain tokens as unlabeled annotated tokens.
AnnotatedDescription MakeDescription(std::string source_id, SourceKind kind,
                                     std::string raw_text);

// Checks the description invariants (offset slicing, IOB sequence,
// provenance/O agreement). Throws Error(kInvalidInput) on violation.
void ValidateDescription(const AnnotatedDescription& description);

enum class IobMode { kStrict, kRepair };

struct ReadOptions {
  IobMode iob_mode = IobMode::kStrict;
};

Corpus ReadCorpus(std::istream& in, const ReadOptions& options = {});
Corpus ReadCorpus(const std::filesystem::path& path, const ReadOptions& options = {});
void WriteCorpus(const Corpus& corpus, std::ostream& out);
void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace seclabel
