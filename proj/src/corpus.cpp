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

#include "seclabel/corpus.hpp"

#include <algorithm>

#include "seclabel/error.hpp"

namespace seclabel {
namespace {

constexpr std::array<std::string_view, kNumEntityLabels> kLabelNames = {
    "software-vendor",    "software-product", "software-version",
    "software-language",  "vulnerability-name", "software-symbol",
    "vulnerability-relevant-term",
};

constexpr std::array<std::string_view, 5> kProvenanceNames = {
    "record-match", "heuristic", "gazetteer", "model", "none"};

constexpr std::array<std::string_view, 5> kSourceKindNames = {
    "nvd", "ms-bulletin", "metasploit", "synthetic", "other"};

bool IsSpaceByte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool IsWordByte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         c == '_' || c >= 0x80;
}

bool HasDigit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// 1-4 lowercase alphanumerics starting with a letter.
bool IsExtensionLike(std::string_view s) {
  if (s.empty() || s.size() > 4) return false;
  if (s[0] < 'a' || s[0] > 'z') return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); });
}

struct Segment {
  std::size_t start;
  std::size_t end;
  bool word;
};

void TokenizeChunk(std::string_view text, std::size_t chunk_start, std::size_t chunk_end,
                   std::vector<Token>& out) {
  std::vector<Segment> segs;
  for (std::size_t i = chunk_start; i < chunk_end;) {
    if (IsWordByte(static_cast<unsigned char>(text[i]))) {
      std::size_t j = i;
      while (j < chunk_end && IsWordByte(static_cast<unsigned char>(text[j]))) ++j;
      segs.push_back({i, j, true});
      i = j;
    } else {
      segs.push_back({i, i + 1, false});
      ++i;
    }
  }

  auto seg_text = [&](const Segment& s) { return text.substr(s.start, s.end - s.start); };
  auto is_joiner_at = [&](std::size_t k, char c) {
    return k > 0 && k + 1 < segs.size() && !segs[k].word && text[segs[k].start] == c &&
           segs[k - 1].word && segs[k + 1].word;
  };

  // File-name dots: when the last word run is extension-like, every dot in
  // the contiguous word/joiner chain ending at it stays inside the token.
  std::vector<bool> filename_dot(segs.size(), false);
  std::size_t last_word = segs.size();
  for (std::size_t k = segs.size(); k-- > 0;) {
    if (segs[k].word) {
      last_word = k;
      break;
    }
  }
  if (last_word < segs.size() && IsExtensionLike(seg_text(segs[last_word]))) {
    std::size_t k = last_word;
    while (k >= 2 && (is_joiner_at(k - 1, '.') || is_joiner_at(k - 1, '-'))) {
      if (text[segs[k - 1].start] == '.') filename_dot[k - 1] = true;
      k -= 2;
    }
  }

  std::size_t k = 0;
  while (k < segs.size()) {
    std::size_t start = segs[k].start;
    std::size_t end = segs[k].end;
    if (segs[k].word) {
      while (k + 2 < segs.size()) {
        bool join = false;
        if (is_joiner_at(k + 1, '-')) {
          join = true;
        } else if (is_joiner_at(k + 1, '.')) {
          join = filename_dot[k + 1] || HasDigit(text.substr(start, end - start)) ||
                 HasDigit(seg_text(segs[k + 2]));
        }
        if (!join) break;
        end = segs[k + 2].end;
        k += 2;
      }
    }
    out.push_back(Token{std::string(text.substr(start, end - start)), out.size(), start, end});
    ++k;
  }
}

}  // namespace

std::string_view ToString(EntityLabel label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

std::optional<EntityLabel> ParseEntityLabel(std::string_view name) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
    if (kLabelNames[i] == name) return static_cast<EntityLabel>(i);
  }
  return std::nullopt;
}

std::string ToString(const IobTag& tag) {
  std::string out;
  switch (tag.kind) {
    case IobTag::Kind::kO: return "O";
    case IobTag::Kind::kB: out = "B"; break;
    case IobTag::Kind::kI: out = "I"; break;
  }
  if (tag.label) {
    out += '-';
    out += ToString(*tag.label);
  }
  return out;
}

std::optional<IobTag> ParseIobTag(std::string_view text) {
  if (text == "O") return IobTag::O();
  if (text.empty()) return std::nullopt;
  IobTag tag;
  if (text[0] == 'B') {
    tag.kind = IobTag::Kind::kB;
  } else if (text[0] == 'I') {
    tag.kind = IobTag::Kind::kI;
  } else {
    return std::nullopt;
  }
  if (text.size() == 1) return tag;
  if (text[1] != '-') return std::nullopt;
  tag.label = ParseEntityLabel(text.substr(2));
  if (!tag.label) return std::nullopt;
  return tag;
}

bool IsValidTransition(const std::optional<IobTag>& prev, const IobTag& tag) {
  if (tag.kind != IobTag::Kind::kI) return true;
  if (!prev || prev->kind == IobTag::Kind::kO) return false;
  return prev->label == tag.label;
}

std::string_view ToString(Provenance p) { return kProvenanceNames[static_cast<std::size_t>(p)]; }

std::optional<Provenance> ParseProvenance(std::string_view text) {
  for (std::size_t i = 0; i < kProvenanceNames.size(); ++i) {
    if (kProvenanceNames[i] == text) return static_cast<Provenance>(i);
  }
  return std::nullopt;
}

std::string_view ToString(SourceKind k) { return kSourceKindNames[static_cast<std::size_t>(k)]; }

std::optional<SourceKind> ParseSourceKind(std::string_view text) {
  for (std::size_t i = 0; i < kSourceKindNames.size(); ++i) {
    if (kSourceKindNames[i] == text) return static_cast<SourceKind>(i);
  }
  return std::nullopt;
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& d : descriptions) n += d.tokens.size();
  return n;
}

std::vector<Token> Tokenize(std::string_view raw_text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < raw_text.size()) {
    while (i < raw_text.size() && IsSpaceByte(static_cast<unsigned char>(raw_text[i]))) ++i;
    if (i == raw_text.size()) break;
    std::size_t j = i;
    while (j < raw_text.size() && !IsSpaceByte(static_cast<unsigned char>(raw_text[j]))) ++j;
    TokenizeChunk(raw_text, i, j, tokens);
    i = j;
  }
  return tokens;
}

AnnotatedDescription MakeDescription(std::string source_id, SourceKind kind,
                                     std::string raw_text) {
  AnnotatedDescription d;
  d.source_id = std::move(source_id);
  d.source_kind = kind;
  d.raw_text = std::move(raw_text);
  for (Token& t : Tokenize(d.raw_text)) {
    d.tokens.push_back(AnnotatedToken{std::move(t), IobTag::O(), {}, Provenance::kNone});
  }
  return d;
}

void ValidateDescription(const AnnotatedDescription& d) {
  std::optional<IobTag> prev;
  std::size_t last_end = 0;
  for (std::size_t i = 0; i < d.tokens.size(); ++i) {
    const AnnotatedToken& t = d.tokens[i];
    const std::string where = d.source_id + " token " + std::to_string(i);
    if (t.token.text.empty() || t.token.char_start >= t.token.char_end ||
        t.token.char_end > d.raw_text.size() || t.token.char_start < last_end ||
        d.raw_text.compare(t.token.char_start, t.token.char_end - t.token.char_start,
                           t.token.text) != 0) {
      throw Error(ErrorKind::kInvalidInput, where + ": offsets do not slice the raw text");
    }
    if (t.token.index != i) throw Error(ErrorKind::kInvalidInput, where + ": bad index");
    if (!IsValidTransition(prev, t.iob)) {
      throw Error(ErrorKind::kInvalidInput, where + ": I tag without B/I predecessor");
    }
    if ((t.provenance == Provenance::kNone) != t.iob.is_outside()) {
      throw Error(ErrorKind::kInvalidInput, where + ": provenance must be none exactly for O");
    }
    last_end = t.token.char_end;
    prev = t.iob;
  }
}

}  // namespace seclabel
