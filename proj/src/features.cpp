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

#include "seclabel/features.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "io_util.hpp"
#include "json.hpp"
#include "seclabel/error.hpp"

namespace seclabel {
namespace {

bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsLower(char c) { return c >= 'a' && c <= 'z'; }
bool IsAlnum(char c) { return IsDigit(c) || IsUpper(c) || IsLower(c); }
bool IsWordChar(char c) { return IsAlnum(c) || c == '_' || static_cast<unsigned char>(c) >= 0x80; }
bool IsPunct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u >= 0x21 && u <= 0x7e && !IsAlnum(c) && c != '_';
}

constexpr std::array<std::string_view, 5> kOffsetNames = {"-2", "-1", "0", "+1", "+2"};

std::string_view Word(const SentenceContext& ctx, std::ptrdiff_t j) {
  if (j < 0) return kStartSymbol;
  if (j >= static_cast<std::ptrdiff_t>(ctx.size())) return kEndSymbol;
  return ctx.words[static_cast<std::size_t>(j)];
}

std::string_view Pos(const SentenceContext& ctx, std::ptrdiff_t j) {
  if (j < 0) return kStartSymbol;
  if (j >= static_cast<std::ptrdiff_t>(ctx.size())) return kEndSymbol;
  return ctx.pos[static_cast<std::size_t>(j)];
}

std::string Key(std::string_view name, std::string_view value) {
  std::string k;
  k.reserve(name.size() + value.size() + 1);
  k.append(name).append("=").append(value);
  return k;
}

std::string Bigram(std::string_view name, std::string_view a, std::string_view b) {
  std::string k;
  k.reserve(name.size() + a.size() + b.size() + 5);
  k.append("bi:").append(name).append("=").append(a).append("|").append(b);
  return k;
}

void AddWindow(const SentenceContext& ctx, std::size_t i, const TemplateGroups& g,
               FeatureSet& out) {
  const auto pos = static_cast<std::ptrdiff_t>(i);
  if (g.words) {
    for (std::ptrdiff_t d = -2; d <= 2; ++d) {
      out.push_back(Key(std::string("w") + std::string(kOffsetNames[d + 2]), Word(ctx, pos + d)));
    }
  }
  if (g.pos) {
    for (std::ptrdiff_t d = -2; d <= 1; ++d) {
      out.push_back(Key(std::string("pos") + std::string(kOffsetNames[d + 2]), Pos(ctx, pos + d)));
    }
  }
}

void AddShapes(const SentenceContext& ctx, std::size_t i, FeatureSet& out) {
  const auto pos = static_cast<std::ptrdiff_t>(i);
  for (std::ptrdiff_t d = -2; d <= 2; ++d) {
    std::ptrdiff_t j = pos + d;
    if (j < 0 || j >= static_cast<std::ptrdiff_t>(ctx.size())) continue;
    const WordShape& s = ctx.shapes[static_cast<std::size_t>(j)];
    const std::string prefix = std::string("shape") + std::string(kOffsetNames[d + 2]) + ":";
    if (s.begins_digit) out.push_back(prefix + "digit");
    if (s.interior_digit) out.push_back(prefix + "idigit");
    if (s.begins_capital) out.push_back(prefix + "cap");
    if (s.camel_case) out.push_back(prefix + "camel");
    if (s.snake_case) out.push_back(prefix + "snake");
    if (s.contains_punct) out.push_back(prefix + "punct");
  }
}

// Coarse rule-based tagger.
class HeuristicPosProvider final : public PosProvider {
 public:
  std::string_view name() const override { return "heuristic"; }

  std::span<const std::string_view> tagset() const override { return kTags; }

  std::vector<std::string> Tag(std::span<const Token> tokens) const override {
    std::vector<std::string> tags;
    tags.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      tags.emplace_back(TagWord(tokens[i].text, i));
    }
    return tags;
  }

 private:
  static constexpr std::array<std::string_view, 12> kTags = {
      "NOUN", "PROP", "NUM", "PUNCT", "DET", "ADP", "PRON", "CONJ", "VBG", "VBD", "ADV", "ADJ"};

  static bool InList(std::string_view w, std::span<const std::string_view> list) {
    for (std::string_view x : list) {
      if (x == w) return true;
    }
    return false;
  }

  static bool EndsWith(std::string_view w, std::string_view suffix, std::size_t min_len) {
    return w.size() >= min_len && w.ends_with(suffix);
  }

  static std::string_view TagWord(std::string_view text, std::size_t index) {
    static constexpr std::array<std::string_view, 13> kDet = {
        "the", "a", "an", "this", "that", "these", "those", "each", "every", "any", "some", "no", "all"};
    static constexpr std::array<std::string_view, 22> kAdp = {
        "in", "on", "at", "by", "for", "with", "from", "to", "of", "via", "into",
        "through", "before", "after", "over", "under", "about", "against", "during",
        "without", "within", "prior"};
    static constexpr std::array<std::string_view, 19> kPron = {
        "it", "its", "they", "them", "their", "he", "she", "his", "her", "we",
        "our", "you", "your", "i", "which", "who", "whom", "whose", "what"};
    static constexpr std::array<std::string_view, 13> kConj = {
        "and", "or", "but", "nor", "if", "because", "when", "while", "as", "than", "so", "yet", "whether"};
    static constexpr std::array<std::string_view, 8> kAdjSuffix = {
        "ous", "ful", "ive", "able", "ible", "al", "ic", "less"};

    bool any_alnum = false;
    for (char c : text) any_alnum = any_alnum || IsAlnum(c) || static_cast<unsigned char>(c) >= 0x80;
    if (!any_alnum) return "PUNCT";
    if (IsDigit(text[0])) return "NUM";
    const std::string lower = internal::ToLowerAscii(text);
    if (InList(lower, kDet)) return "DET";
    if (InList(lower, kAdp)) return "ADP";
    if (InList(lower, kPron)) return "PRON";
    if (InList(lower, kConj)) return "CONJ";
    if (IsUpper(text[0]) && index > 0) return "PROP";
    if (EndsWith(lower, "ing", 5)) return "VBG";
    if (EndsWith(lower, "ed", 4)) return "VBD";
    if (EndsWith(lower, "ly", 4)) return "ADV";
    for (std::string_view suffix : kAdjSuffix) {
      if (EndsWith(lower, suffix, suffix.size() + 2)) return "ADJ";
    }
    return "NOUN";
  }
};

class NullPosProvider final : public PosProvider {
 public:
  std::string_view name() const override { return "none"; }
  std::span<const std::string_view> tagset() const override { return kTags; }
  std::vector<std::string> Tag(std::span<const Token> tokens) const override {
    return std::vector<std::string>(tokens.size(), "X");
  }

 private:
  static constexpr std::array<std::string_view, 1> kTags = {"X"};
};

}  // namespace

WordShape ComputeWordShape(std::string_view text) {
  WordShape s;
  if (text.empty()) return s;
  s.begins_digit = IsDigit(text.front());
  for (std::size_t i = 1; i + 1 < text.size(); ++i) {
    if (IsDigit(text[i])) {
      s.interior_digit = true;
      break;
    }
  }
  s.begins_capital = IsUpper(text.front());

  bool all_alnum = true;
  bool seen_lower = false;
  bool upper_after_lower = false;
  for (char c : text) {
    if (!IsAlnum(c)) all_alnum = false;
    if (IsLower(c)) seen_lower = true;
    if (IsUpper(c) && seen_lower) upper_after_lower = true;
  }
  s.camel_case = all_alnum && upper_after_lower;

  for (std::size_t i = 1; i + 1 < text.size(); ++i) {
    if (text[i] == '_' && IsWordChar(text[i - 1]) && IsWordChar(text[i + 1]) &&
        text[i - 1] != '_' && text[i + 1] != '_') {
      s.snake_case = true;
      break;
    }
  }
  for (char c : text) {
    if (IsPunct(c)) {
      s.contains_punct = true;
      break;
    }
  }
  return s;
}

std::unique_ptr<PosProvider> MakePosProvider(std::string_view name) {
  if (name == "heuristic") return std::make_unique<HeuristicPosProvider>();
  if (name == "none") return std::make_unique<NullPosProvider>();
  throw Error(ErrorKind::kInvalidParameter, "unknown POS provider '" + std::string(name) + "'");
}

std::vector<std::string> PosTag(std::span<const Token> tokens) {
  return HeuristicPosProvider().Tag(tokens);
}

FeatureConfig ParseFeatureConfig(std::string_view json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kMalformedInput, std::string("feature config: ") + e.what());
  }
  FeatureConfig c;
  try {
    if (j.contains("templates")) {
      const json& t = j.at("templates");
      auto flag = [&](const char* key, bool& field) {
        if (t.contains(key)) field = t.at(key).get<bool>();
      };
      flag("words", c.templates.words);
      flag("pos", c.templates.pos);
      flag("history", c.templates.history);
      flag("bigrams", c.templates.bigrams);
      flag("shapes", c.templates.shapes);
      flag("iob_window", c.templates.iob_window);
      flag("gazetteer", c.templates.gazetteer);
    }
    if (j.contains("pos_provider")) c.pos_provider = j.at("pos_provider").get<std::string>();
    if (j.contains("file_extensions")) {
      c.file_extensions = j.at("file_extensions").get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kMalformedInput, std::string("feature config: ") + e.what());
  }
  MakePosProvider(c.pos_provider);  // validates the name
  return c;
}

std::string FeatureConfigToJson(const FeatureConfig& c) {
  nlohmann::ordered_json j;
  j["templates"] = {{"words", c.templates.words},         {"pos", c.templates.pos},
                    {"history", c.templates.history},     {"bigrams", c.templates.bigrams},
                    {"shapes", c.templates.shapes},       {"iob_window", c.templates.iob_window},
                    {"gazetteer", c.templates.gazetteer}};
  j["pos_provider"] = c.pos_provider;
  j["file_extensions"] = c.file_extensions;
  return j.dump();
}

FeatureConfig LoadFeatureConfig(const std::filesystem::path& path) {
  auto in = internal::OpenForRead(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseFeatureConfig(buf.str());
}

TrainGazetteers CollectTrainGazetteers(const Corpus& training) {
  TrainGazetteers g;
  for (const auto& d : training.descriptions) {
    for (const auto& t : d.tokens) {
      if (!t.iob.label) continue;
      if (*t.iob.label == EntityLabel::kSoftwareVendor) {
        g.vendor_terms.insert(internal::ToLowerAscii(t.token.text));
      } else if (*t.iob.label == EntityLabel::kSoftwareProduct) {
        g.product_terms.insert(internal::ToLowerAscii(t.token.text));
      }
    }
  }
  return g;
}

SentenceContext MakeSentenceContext(std::span<const AnnotatedToken> tokens) {
  SentenceContext ctx;
  ctx.words.reserve(tokens.size());
  ctx.pos.reserve(tokens.size());
  ctx.shapes.reserve(tokens.size());
  for (const auto& t : tokens) {
    ctx.words.push_back(internal::ToLowerAscii(t.token.text));
    ctx.pos.push_back(t.pos);
    ctx.shapes.push_back(ComputeWordShape(t.token.text));
  }
  return ctx;
}

FeatureSet IobFeatures(const SentenceContext& ctx, std::size_t i, std::string_view iob_prev1,
                       std::string_view iob_prev2, const TemplateGroups& g) {
  FeatureSet out;
  out.reserve(44);
  AddWindow(ctx, i, g, out);
  const auto pos = static_cast<std::ptrdiff_t>(i);
  if (g.history) {
    out.push_back(Key("iob-1", iob_prev1));
    out.push_back(Key("iob-2", iob_prev2));
  }
  if (g.bigrams) {
    out.push_back(Bigram("iob-2,iob-1", iob_prev2, iob_prev1));
    out.push_back(Bigram("iob-1,w0", iob_prev1, Word(ctx, pos)));
    out.push_back(Bigram("pos-1,w0", Pos(ctx, pos - 1), Word(ctx, pos)));
  }
  if (g.shapes) AddShapes(ctx, i, out);
  return out;
}

FeatureSet DomainFeatures(const SentenceContext& ctx, std::size_t i,
                          std::span<const std::string> iob_tags, std::string_view dom_prev1,
                          std::string_view dom_prev2, const TrainGazetteers& gazetteers,
                          const TemplateGroups& g) {
  FeatureSet out;
  out.reserve(56);
  AddWindow(ctx, i, g, out);
  const auto pos = static_cast<std::ptrdiff_t>(i);
  auto iob_at = [&](std::ptrdiff_t j) -> std::string_view {
    if (j < 0) return kStartSymbol;
    if (j >= static_cast<std::ptrdiff_t>(iob_tags.size())) return kEndSymbol;
    return iob_tags[static_cast<std::size_t>(j)];
  };
  if (g.iob_window) {
    for (std::ptrdiff_t d = -2; d <= 2; ++d) {
      out.push_back(Key(std::string("iob") + std::string(kOffsetNames[d + 2]), iob_at(pos + d)));
    }
  }
  if (g.history) {
    out.push_back(Key("dom-1", dom_prev1));
    out.push_back(Key("dom-2", dom_prev2));
  }
  if (g.bigrams) {
    out.push_back(Bigram("dom-2,dom-1", dom_prev2, dom_prev1));
    out.push_back(Bigram("dom-1,w0", dom_prev1, Word(ctx, pos)));
    out.push_back(Bigram("iob-1,w0", iob_at(pos - 1), Word(ctx, pos)));
    out.push_back(Bigram("pos-1,w0", Pos(ctx, pos - 1), Word(ctx, pos)));
  }
  if (g.shapes) AddShapes(ctx, i, out);
  if (g.gazetteer && i < ctx.size()) {
    const std::string& w = ctx.words[i];
    if (gazetteers.vendor_terms.count(w)) out.emplace_back("gaz:vendor");
    if (gazetteers.product_terms.count(w)) out.emplace_back("gaz:product");
  }
  return out;
}

}  // namespace seclabel
