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

// Column format:
//
//   # id=CVE-2012-0678 kind=nvd
//   # text=<raw text, with \\ \n \t \r escaped>
//   token<TAB>pos<TAB>iob-tag<TAB>provenance
//   ...
//   <blank line>
//
// The text line is optional on input; without it the raw text is the
// tokens joined by single spaces.

#include <istream>
#include <ostream>

#include "io_util.hpp"
#include "seclabel/corpus.hpp"
#include "seclabel/error.hpp"

namespace seclabel {
namespace {

constexpr std::string_view kIdPrefix = "# id=";
constexpr std::string_view kTextPrefix = "# text=";

std::string EscapeText(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string UnescapeText(std::string_view s, std::size_t line) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw Error(ErrorKind::kMalformedInput, "dangling escape", line);
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      default: throw Error(ErrorKind::kMalformedInput, "unknown escape", line);
    }
  }
  return out;
}

bool HasWhitespace(std::string_view s) {
  return s.find_first_of(" \t\n\r\f\v") != std::string_view::npos;
}

struct Pending {
  AnnotatedDescription description;
  std::size_t header_line = 0;
  bool has_text = false;
  std::optional<IobTag> prev;
};

void Finish(Pending& p, Corpus& corpus) {
  AnnotatedDescription& d = p.description;
  if (!p.has_text) {
    std::string joined;
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      if (i) joined += ' ';
      joined += d.tokens[i].token.text;
    }
    d.raw_text = std::move(joined);
  }
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < d.tokens.size(); ++i) {
    Token& t = d.tokens[i].token;
    std::size_t pos = d.raw_text.find(t.text, cursor);
    if (pos == std::string::npos) {
      throw Error(ErrorKind::kMalformedInput,
                  "token '" + t.text + "' not found in description text", p.header_line);
    }
    t.index = i;
    t.char_start = pos;
    t.char_end = pos + t.text.size();
    cursor = t.char_end;
  }
  corpus.descriptions.push_back(std::move(d));
}

}  // namespace

Corpus ReadCorpus(std::istream& in, const ReadOptions& options) {
  Corpus corpus;
  std::optional<Pending> current;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    internal::StripCarriageReturn(line);
    std::string_view view(line);
    if (view.empty()) {
      if (current) {
        Finish(*current, corpus);
        current.reset();
      }
      continue;
    }
    if (view.starts_with(kIdPrefix)) {
      if (current) Finish(*current, corpus);
      std::string_view rest = view.substr(kIdPrefix.size());
      std::size_t kind_pos = rest.rfind(" kind=");
      if (kind_pos == std::string_view::npos) {
        throw Error(ErrorKind::kMalformedInput, "header without kind=", lineno);
      }
      auto kind = ParseSourceKind(rest.substr(kind_pos + 6));
      if (!kind) throw Error(ErrorKind::kMalformedInput, "unknown source kind", lineno);
      current.emplace();
      current->description.source_id = std::string(rest.substr(0, kind_pos));
      current->description.source_kind = *kind;
      current->header_line = lineno;
      continue;
    }
    if (!current) {
      throw Error(ErrorKind::kMalformedInput, "token line outside a description", lineno);
    }
    if (view.starts_with(kTextPrefix)) {
      if (current->has_text || !current->description.tokens.empty()) {
        throw Error(ErrorKind::kMalformedInput, "misplaced text line", lineno);
      }
      current->description.raw_text = UnescapeText(view.substr(kTextPrefix.size()), lineno);
      current->has_text = true;
      continue;
    }

    auto cols = internal::Split(view, '\t');
    if (cols.size() != 4) {
      throw Error(ErrorKind::kMalformedInput,
                  "expected 4 tab-separated columns, got " + std::to_string(cols.size()), lineno);
    }
    if (cols[0].empty() || HasWhitespace(cols[0])) {
      throw Error(ErrorKind::kMalformedInput, "empty or whitespace token", lineno);
    }
    auto tag = ParseIobTag(cols[2]);
    if (!tag) throw Error(ErrorKind::kMalformedInput, "bad IOB tag '" + std::string(cols[2]) + "'", lineno);
    auto prov = ParseProvenance(cols[3]);
    if (!prov) throw Error(ErrorKind::kMalformedInput, "bad provenance", lineno);
    if ((*prov == Provenance::kNone) != tag->is_outside()) {
      throw Error(ErrorKind::kMalformedInput, "provenance must be none exactly for O", lineno);
    }
    if (!IsValidTransition(current->prev, *tag)) {
      if (options.iob_mode == IobMode::kStrict) {
        throw Error(ErrorKind::kIobViolation,
                    "'" + std::string(cols[2]) + "' does not continue an entity", lineno);
      }
      tag->kind = IobTag::Kind::kB;
    }
    current->prev = *tag;
    AnnotatedToken tok;
    tok.token.text = std::string(cols[0]);
    tok.pos = std::string(cols[1]);
    tok.iob = *tag;
    tok.provenance = *prov;
    current->description.tokens.push_back(std::move(tok));
  }
  if (current) Finish(*current, corpus);
  return corpus;
}

Corpus ReadCorpus(const std::filesystem::path& path, const ReadOptions& options) {
  auto in = internal::OpenForRead(path);
  return ReadCorpus(in, options);
}

void WriteCorpus(const Corpus& corpus, std::ostream& out) {
  for (const AnnotatedDescription& d : corpus.descriptions) {
    if (d.source_id.empty() || HasWhitespace(d.source_id)) {
      throw Error(ErrorKind::kInvalidInput, "source id must be non-empty without whitespace");
    }
    out << kIdPrefix << d.source_id << " kind=" << ToString(d.source_kind) << '\n';
    out << kTextPrefix << EscapeText(d.raw_text) << '\n';
    for (const AnnotatedToken& t : d.tokens) {
      if (t.pos.find_first_of("\t\n") != std::string::npos) {
        throw Error(ErrorKind::kInvalidInput, "POS tag contains a tab or newline");
      }
      out << t.token.text << '\t' << t.pos << '\t' << ToString(t.iob) << '\t'
          << ToString(t.provenance) << '\n';
    }
    out << '\n';
  }
}

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  internal::WriteFileAtomic(path, [&](std::ostream& out) { WriteCorpus(corpus, out); });
}

}  // namespace seclabel
