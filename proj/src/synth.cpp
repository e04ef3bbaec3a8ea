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

#include "seclabel/synth.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "io_util.hpp"
#include "random.hpp"
#include "seclabel/features.hpp"

namespace seclabel {
namespace {

using internal::Rng;

struct Vendor {
  std::string name;
  std::vector<std::string> products;
};

// Vendor and product tokens are pairwise disjoint and never occur in
// filler text.
const std::vector<Vendor>& Vendors() {
  static const std::vector<Vendor> kVendors = {
      {"Microsoft", {"Internet Explorer", "Exchange Server", "SharePoint Server"}},
      {"Mozilla", {"Firefox", "Thunderbird", "SeaMonkey"}},
      {"Adobe", {"Acrobat Reader", "Flash Player", "ColdFusion"}},
      {"Apple", {"Safari", "QuickTime", "iTunes"}},
      {"Oracle", {"MySQL", "WebLogic Server"}},
      {"Google", {"Chrome", "Picasa"}},
      {"Cisco", {"IOS", "Unified Communications Manager"}},
      {"IBM", {"WebSphere Application Server", "Lotus Domino"}},
      {"Apache Software Foundation", {"Tomcat", "Struts", "ActiveMQ"}},
      {"Novell", {"GroupWise", "eDirectory"}},
      {"SAP", {"NetWeaver", "BusinessObjects"}},
      {"Symantec", {"Endpoint Protection", "Norton AntiVirus"}},
      {"McAfee", {"VirusScan Enterprise", "ePolicy Orchestrator"}},
      {"Trend Micro", {"OfficeScan", "InterScan Messaging Security Suite"}},
      {"RealNetworks", {"RealPlayer", "Helix Server"}},
      {"Sun", {"Solaris", "GlassFish"}},
      {"HP", {"OpenView Network Node Manager", "System Management Homepage"}},
      {"ISC", {"BIND", "DHCPD"}},
      {"VMware", {"ESXi", "vCenter"}},
      {"Citrix", {"XenServer", "NetScaler Gateway"}},
      {"Juniper", {"Junos", "ScreenOS"}},
      {"Siemens", {"SIMATIC WinCC", "SCALANCE"}},
      {"Atlassian", {"Confluence", "Jira"}},
      {"Joomla Project", {"Joomla"}},
      {"Drupal Association", {"Drupal"}},
      {"Automattic", {"WordPress"}},
      {"phpMyAdmin Team", {"phpMyAdmin"}},
      {"Opera Software", {"Opera"}},
      {"Wireshark Foundation", {"Wireshark"}},
      {"Zimbra", {"Collaboration Suite"}},
  };
  return kVendors;
}

const std::vector<std::string>& Languages() {
  static const std::vector<std::string> kLanguages = {"PHP",  "Java", "Python",
                                                      "Perl", "Ruby", "JavaScript"};
  return kLanguages;
}

const std::vector<std::string>& Parameters() {
  static const std::vector<std::string> kParameters = {
      "user_id",   "searchTerm", "file_name", "returnUrl", "page_id",  "sortOrder",
      "cat_id",    "redirectTo", "post_id",  "userName",  "lang_code", "itemId"};
  return kParameters;
}

const std::vector<std::string>& Functions() {
  static const std::vector<std::string> kFunctions = {
      "parseHeader",    "getImageSize",  "readChunk",      "decode_frame",  "handleRequest",
      "xml_parse_into", "loadTemplate",  "copy_from_user", "processPacket", "setAttribute",
      "url_decode",     "renderPreview"};
  return kFunctions;
}

const std::vector<std::string>& Files() {
  static const std::vector<std::string> kFiles = {
      "index.php",  "admin.php",  "mshtml.dll", "login.asp", "upload.jsp", "setup.exe",
      "parser.c",   "config.h",   "editor.js",  "search.pl", "manage.py",  "vgx.dll",
      "profile.php", "gallery.asp"};
  return kFiles;
}

// Plain names that no record lists and no heuristic recognizes.
const std::vector<std::string>& DistractorProducts() {
  static const std::vector<std::string> kDistractors = {
      "Pinewood Gateway", "Harbor Suite", "Bluefin Portal", "Meridian Desk", "Kestrel Relay",
      "Sandstone Hub"};
  return kDistractors;
}

struct WeaknessClass {
  std::string cwe;
  std::string opening;  // leading term, printed before "vulnerability"
  std::string acronym;  // optional, printed in parentheses after the opening
  std::vector<std::string> effects;  // alternatives; each a sequence of chunks
};

// Chunks wrapped in [] are relevant terms; the rest is plain text.
const std::vector<WeaknessClass>& Weaknesses() {
  static const std::vector<WeaknessClass> kClasses = {
      {"CWE-79", "cross-site scripting", "XSS",
       {"inject [arbitrary web script] or HTML", "inject [arbitrary web script] into the page"}},
      {"CWE-89", "SQL injection", "",
       {"execute [arbitrary SQL commands]", "run [arbitrary SQL commands] against the database"}},
      {"CWE-119", "buffer overflow", "",
       {"[execute arbitrary code] or cause a [denial of service]",
        "cause a [denial of service] or possibly [execute arbitrary code]"}},
      {"CWE-22", "directory traversal", "",
       {"[read arbitrary files]", "[read arbitrary files] outside the web root"}},
      {"CWE-352", "cross-site request forgery", "CSRF",
       {"[hijack the authentication] of administrators",
        "[hijack the authentication] of arbitrary users"}},
      {"CWE-287", "authentication bypass", "",
       {"[bypass authentication] and [gain privileges]",
        "[bypass authentication] and possibly [gain privileges]"}},
      {"CWE-200", "information disclosure", "",
       {"[obtain sensitive information]", "[obtain sensitive information] from process memory"}},
      {"CWE-416", "use-after-free", "",
       {"[execute arbitrary code] or cause a [denial of service] ([memory corruption])",
        "cause a [denial of service] ([memory corruption]) or [execute arbitrary code]"}},
  };
  return kClasses;
}

// Lowercase, digit-free filler containing no vocabulary term.
const std::vector<std::string>& FillerSentences() {
  static const std::vector<std::string> kFiller = {
      "The vendor has released an update that addresses this issue.",
      "Users are advised to upgrade to a fixed release as soon as possible.",
      "Successful exploitation requires that the attacker can reach the affected service.",
      "The flaw is caused by improper validation of user supplied input.",
      "Exploitation does not require user interaction in the default configuration.",
      "Administrators should restrict access to the management interface.",
      "Some deployments are not affected in their default state.",
      "The issue was reported privately and fixed in a maintenance release.",
      "A public exploit is known to exist for this weakness.",
      "The root cause lies in missing bounds checks on attacker controlled lengths.",
      "Workarounds include disabling the vulnerable feature entirely.",
      "The problem stems from an incorrect state machine in the request handler.",
  };
  return kFiller;
}

struct Plant {
  std::size_t begin = 0;
  std::size_t end = 0;
  EntityLabel label = EntityLabel::kSoftwareVendor;
  Provenance provenance = Provenance::kRecordMatch;
};

Provenance IntendedSource(EntityLabel label) {
  switch (label) {
    case EntityLabel::kSoftwareSymbol: return Provenance::kHeuristic;
    case EntityLabel::kVulnerabilityRelevantTerm: return Provenance::kGazetteer;
    default: return Provenance::kRecordMatch;
  }
}

class Sentence {
 public:
  // Plain text, space separated from what precedes it.
  Sentence& Text(std::string_view words) {
    Append(words);
    return *this;
  }

  Sentence& Entity(std::string_view words, EntityLabel label) {
    std::size_t begin = Append(words);
    plants_.push_back({begin, text_.size(), label, IntendedSource(label)});
    return *this;
  }

  // Text with [bracketed] relevant terms.
  Sentence& Marked(std::string_view chunks) {
    std::size_t i = 0;
    while (i < chunks.size()) {
      std::size_t open = chunks.find('[', i);
      if (open == std::string_view::npos) open = chunks.size();
      std::string_view before = chunks.substr(i, open - i);
      EmitPlain(before);
      if (open == chunks.size()) break;
      std::size_t close = chunks.find(']', open);
      std::string_view term = chunks.substr(open + 1, close - open - 1);
      bool glue = open > 0 && chunks[open - 1] == '(';
      std::size_t begin = glue ? Glue(term) : Append(term);
      plants_.push_back({begin, text_.size(), EntityLabel::kVulnerabilityRelevantTerm,
                         Provenance::kGazetteer});
      i = close + 1;
    }
    return *this;
  }

  // Punctuation attached to the previous word.
  Sentence& Punct(std::string_view p) {
    text_ += p;
    return *this;
  }

  Sentence& Open() {
    Append("(");
    glue_next_ = true;
    return *this;
  }

  const std::string& text() const { return text_; }
  const std::vector<Plant>& plants() const { return plants_; }
  std::size_t TokenCount() const { return Tokenize(text_).size(); }

 private:
  void EmitPlain(std::string_view s) {
    // Split off parentheses and commas so they attach like punctuation.
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && s[i] == ' ') ++i;
      if (i == s.size()) break;
      if (s[i] == ')' || s[i] == ',') {
        Punct(s.substr(i, 1));
        ++i;
        continue;
      }
      if (s[i] == '(') {
        Open();
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '(' && s[j] != ')' && s[j] != ',') ++j;
      Append(s.substr(i, j - i));
      i = j;
    }
  }

  std::size_t Glue(std::string_view words) {
    glue_next_ = false;
    std::size_t begin = text_.size();
    text_ += words;
    return begin;
  }

  std::size_t Append(std::string_view words) {
    if (glue_next_) return Glue(words);
    if (!text_.empty()) text_ += ' ';
    std::size_t begin = text_.size();
    text_ += words;
    return begin;
  }

  std::string text_;
  std::vector<Plant> plants_;
  bool glue_next_ = false;
};

std::string MakeVersion(Rng& rng) {
  std::string v = std::to_string(1 + rng.Below(12)) + "." + std::to_string(rng.Below(10));
  if (rng.Chance(0.6)) v += "." + std::to_string(rng.Below(31));
  if (rng.Chance(0.1)) v += static_cast<char>('a' + rng.Below(4));
  return v;
}

std::string MakeCveId(std::size_t year, std::size_t number) {
  std::string n = std::to_string(number);
  if (n.size() < 4) n.insert(0, 4 - n.size(), '0');
  return "CVE-" + std::to_string(year) + "-" + n;
}

// Appends a version phrase and records every planted version.
void VersionPhrase(Rng& rng, Sentence& s, std::vector<std::string>& versions) {
  auto plant = [&](const std::string& v) {
    s.Entity(v, EntityLabel::kSoftwareVersion);
    versions.push_back(v);
  };
  switch (rng.Below(6)) {
    case 0:
      s.Text("before");
      plant(MakeVersion(rng));
      break;
    case 1:
      plant(MakeVersion(rng));
      s.Text("through");
      plant(MakeVersion(rng));
      break;
    case 2:
      plant(MakeVersion(rng));
      s.Text("and earlier");
      break;
    case 3: {
      std::string major = std::to_string(1 + rng.Below(12)) + "." + std::to_string(rng.Below(10));
      plant(major + ".x");
      s.Text("before");
      plant(major + "." + std::to_string(1 + rng.Below(30)));
      break;
    }
    case 4:
      plant(MakeVersion(rng));
      break;
    default:
      plant(MakeVersion(rng));
      s.Text("and");
      plant(MakeVersion(rng));
      break;
  }
}

struct Draft {
  StructuredRecord record;
  std::vector<Sentence> sentences;
};

Draft DraftDescription(Rng& rng, std::size_t index) {
  Draft draft;
  StructuredRecord& r = draft.record;
  r.id = MakeCveId(2005 + index % 12, 1000 + index);

  const Vendor& vendor = rng.Pick(Vendors());
  const std::string& product = rng.Pick(vendor.products);
  const WeaknessClass& weakness = rng.Pick(Weaknesses());
  r.vendors = {vendor.name};
  r.products = {product};
  r.cwe_id = weakness.cwe;

  std::string language;
  if (rng.Chance(0.35)) {
    language = rng.Pick(Languages());
    r.languages = {language};
  }

  Sentence core;
  const bool multiple = rng.Chance(0.3);
  if (multiple) core.Text("Multiple");
  core.Marked("[" + weakness.opening + "]");
  if (!weakness.acronym.empty()) core.Marked("([" + weakness.acronym + "])");
  core.Text(multiple ? "vulnerabilities in" : rng.Chance(0.5) ? "vulnerability in" : "flaw in");
  if (rng.Chance(0.4)) {
    core.Entity(rng.Pick(Files()), EntityLabel::kSoftwareSymbol);
    core.Text("in");
  }
  if (rng.Chance(0.7)) core.Entity(vendor.name, EntityLabel::kSoftwareVendor);
  core.Entity(product, EntityLabel::kSoftwareProduct);
  VersionPhrase(rng, core, r.versions);
  core.Text("allows");
  if (rng.Chance(0.85)) {
    core.Marked("[remote attackers]");
  } else {
    core.Text("remote authenticated users");
  }
  core.Text("to").Marked(rng.Pick(weakness.effects));

  switch (rng.Below(4)) {
    case 0:
      core.Text("via the").Entity(rng.Pick(Parameters()), EntityLabel::kSoftwareSymbol);
      core.Text("parameter");
      break;
    case 1:
      core.Text("via the").Entity(rng.Pick(Parameters()), EntityLabel::kSoftwareSymbol);
      core.Text("parameter to").Entity(rng.Pick(Files()), EntityLabel::kSoftwareSymbol);
      break;
    case 2:
      core.Text("via a crafted request to the")
          .Entity(rng.Pick(Functions()), EntityLabel::kSoftwareSymbol);
      core.Text("function");
      break;
    default:
      core.Text("via a long string to the")
          .Entity(rng.Pick(Functions()), EntityLabel::kSoftwareSymbol);
      core.Text("function in").Entity(rng.Pick(Files()), EntityLabel::kSoftwareSymbol);
      break;
  }
  core.Punct(".");
  draft.sentences.push_back(std::move(core));

  if (!language.empty()) {
    Sentence s;
    s.Text("The affected component is written in")
        .Entity(language, EntityLabel::kSoftwareLanguage);
    s.Text("and does not sanitize input").Punct(".");
    draft.sentences.push_back(std::move(s));
  }
  if (rng.Chance(0.25)) {
    Sentence s;
    s.Text("The issue is tracked as").Entity(r.id, EntityLabel::kVulnerabilityName).Punct(".");
    draft.sentences.push_back(std::move(s));
  }
  if (rng.Chance(0.1)) {
    Sentence s;
    if (rng.Chance(0.5)) {
      std::string other = MakeCveId(2005 + rng.Below(12), 50000 + rng.Below(40000));
      s.Text("NOTE: this is a different vulnerability than")
          .Entity(other, EntityLabel::kVulnerabilityName)
          .Punct(".");
    } else {
      s.Text("Installations that bundle")
          .Entity(rng.Pick(DistractorProducts()), EntityLabel::kSoftwareProduct);
      s.Text("are also affected").Punct(".");
    }
    draft.sentences.push_back(std::move(s));
  }
  // Extra record versions that the text never mentions.
  if (rng.Chance(0.3)) r.versions.push_back(MakeVersion(rng));
  std::sort(r.versions.begin(), r.versions.end());
  r.versions.erase(std::unique(r.versions.begin(), r.versions.end()), r.versions.end());
  return draft;
}

constexpr std::size_t kMinTokens = 40;
constexpr std::size_t kMaxTokens = 60;

void PadWithFiller(Rng& rng, Draft& draft) {
  std::size_t total = 0;
  for (const Sentence& s : draft.sentences) total += s.TokenCount();
  std::vector<std::size_t> unused(FillerSentences().size());
  for (std::size_t i = 0; i < unused.size(); ++i) unused[i] = i;
  rng.Shuffle(unused);
  // Target a length spread over the whole band, not just its floor.
  const std::size_t target = kMinTokens + rng.Below(kMaxTokens - kMinTokens - 8);
  for (std::size_t idx : unused) {
    if (total >= target) break;
    Sentence s;
    s.Text(FillerSentences()[idx]);
    const std::size_t count = s.TokenCount();
    if (total + count > kMaxTokens) continue;
    total += count;
    // Filler goes after the core sentence.
    draft.sentences.insert(draft.sentences.begin() + 1 + rng.Below(draft.sentences.size()),
                           std::move(s));
  }
}

AnnotatedDescription Label(const std::string& id, const std::string& text,
                           const std::vector<Plant>& plants) {
  AnnotatedDescription d = MakeDescription(id, SourceKind::kSynthetic, text);
  std::vector<Token> tokens;
  for (const auto& t : d.tokens) tokens.push_back(t.token);
  for (const Plant& p : plants) {
    bool starts = false, ends = false;
    for (AnnotatedToken& t : d.tokens) {
      const Token& tok = t.token;
      if (tok.char_start < p.begin || tok.char_end > p.end) {
        if (tok.char_start < p.end && tok.char_end > p.begin) {
          throw std::logic_error("planted span splits token '" + tok.text + "'");
        }
        continue;
      }
      starts |= tok.char_start == p.begin;
      ends |= tok.char_end == p.end;
      t.iob = tok.char_start == p.begin ? IobTag::B(p.label) : IobTag::I(p.label);
      t.provenance = p.provenance;
    }
    if (!starts || !ends) throw std::logic_error("planted span is not token aligned");
  }
  std::vector<std::string> pos = PosTag(tokens);
  for (std::size_t i = 0; i < pos.size(); ++i) d.tokens[i].pos = std::move(pos[i]);
  return d;
}

}  // namespace

SyntheticData GenerateSynthetic(std::size_t n_records, std::uint64_t seed) {
  SyntheticData data;
  data.records.reserve(n_records);
  data.gold.descriptions.reserve(n_records);
  Rng rng(seed);
  for (std::size_t i = 0; i < n_records; ++i) {
    Draft draft = DraftDescription(rng, i);
    PadWithFiller(rng, draft);
    std::string text;
    std::vector<Plant> plants;
    for (const Sentence& s : draft.sentences) {
      if (!text.empty()) text += ' ';
      const std::size_t shift = text.size();
      for (Plant p : s.plants()) {
        p.begin += shift;
        p.end += shift;
        plants.push_back(p);
      }
      text += s.text();
    }
    draft.record.description = text;
    data.gold.descriptions.push_back(Label(draft.record.id, text, plants));
    data.records.push_back(std::move(draft.record));
  }
  return data;
}

std::set<Phrase> SyntheticStoplist(const Corpus& gold) {
  std::set<Phrase> all;
  std::set<Phrase> terms;
  for (const AnnotatedDescription& d : gold.descriptions) {
    std::vector<std::string> words;
    for (const AnnotatedToken& t : d.tokens) words.push_back(internal::ToLowerAscii(t.token.text));
    for (std::size_t i = 0; i < words.size(); ++i) {
      Phrase gram;
      for (std::size_t n = 1; n <= kMaxGazetteerN && i + n <= words.size(); ++n) {
        gram.push_back(words[i + n - 1]);
        all.insert(gram);
      }
      const AnnotatedToken& t = d.tokens[i];
      if (t.iob.kind == IobTag::Kind::kB && t.iob.label == EntityLabel::kVulnerabilityRelevantTerm) {
        Phrase term = {words[i]};
        for (std::size_t j = i + 1;
             j < words.size() && d.tokens[j].iob.kind == IobTag::Kind::kI; ++j) {
          term.push_back(words[j]);
        }
        terms.insert(std::move(term));
      }
    }
  }
  std::set<Phrase> stop;
  std::set_difference(all.begin(), all.end(), terms.begin(), terms.end(),
                      std::inserter(stop, stop.end()));
  return stop;
}

}  // namespace seclabel
