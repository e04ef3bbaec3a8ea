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

// Record-set and phrase-list files.

#include <istream>
#include <ostream>
#include <unordered_set>

#include "json.hpp"

#include "io_util.hpp"
#include "seclabel/autolabel.hpp"
#include "seclabel/error.hpp"

namespace seclabel {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::string> StringList(const json& obj, const char* key, std::size_t line) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw Error(ErrorKind::kMalformedInput, std::string("field '") + key + "' must be an array", line);
  }
  for (const json& v : *it) {
    if (!v.is_string() || v.get_ref<const std::string&>().empty()) {
      throw Error(ErrorKind::kMalformedInput,
                  std::string("field '") + key + "' must hold non-empty strings", line);
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string OptionalString(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw Error(ErrorKind::kMalformedInput, std::string("field '") + key + "' must be a string", line);
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<StructuredRecord> ReadRecords(std::istream& in) {
  std::vector<StructuredRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    internal::StripCarriageReturn(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kMalformedInput, std::string("bad JSON: ") + e.what(), lineno);
    }
    if (!obj.is_object()) throw Error(ErrorKind::kMalformedInput, "record must be an object", lineno);
    StructuredRecord r;
    r.id = OptionalString(obj, "id", lineno);
    if (r.id.empty()) throw Error(ErrorKind::kMalformedInput, "record without id", lineno);
    if (!seen.insert(r.id).second) {
      throw Error(ErrorKind::kInvalidInput, "duplicate record id " + r.id, lineno);
    }
    r.vendors = StringList(obj, "vendors", lineno);
    r.products = StringList(obj, "products", lineno);
    r.versions = StringList(obj, "versions", lineno);
    r.languages = StringList(obj, "languages", lineno);
    r.cwe_id = OptionalString(obj, "cwe", lineno);
    r.description = OptionalString(obj, "description", lineno);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<StructuredRecord> ReadRecords(const std::filesystem::path& path) {
  auto in = internal::OpenForRead(path);
  return ReadRecords(in);
}

void WriteRecords(std::span<const StructuredRecord> records, std::ostream& out) {
  for (const StructuredRecord& r : records) {
    ordered_json obj;
    obj["id"] = r.id;
    obj["vendors"] = r.vendors;
    obj["products"] = r.products;
    obj["versions"] = r.versions;
    obj["languages"] = r.languages;
    obj["cwe"] = r.cwe_id;
    obj["description"] = r.description;
    out << obj.dump() << '\n';
  }
}

void WriteRecords(std::span<const StructuredRecord> records, const std::filesystem::path& path) {
  internal::WriteFileAtomic(path, [&](std::ostream& out) { WriteRecords(records, out); });
}

std::set<Phrase> ReadPhraseList(std::istream& in) {
  std::set<Phrase> phrases;
  std::string line;
  while (std::getline(in, line)) {
    internal::StripCarriageReturn(line);
    if (line.empty() || line[0] == '#') continue;
    Phrase p;
    for (std::string_view word : internal::Split(line, ' ')) {
      if (!word.empty()) p.push_back(internal::ToLowerAscii(word));
    }
    if (!p.empty()) phrases.insert(std::move(p));
  }
  return phrases;
}

std::set<Phrase> ReadPhraseList(const std::filesystem::path& path) {
  auto in = internal::OpenForRead(path);
  return ReadPhraseList(in);
}

void WritePhraseList(const std::set<Phrase>& phrases, std::ostream& out) {
  for (const Phrase& p : phrases) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out << ' ';
      out << p[i];
    }
    out << '\n';
  }
}

void WritePhraseList(const std::set<Phrase>& phrases, const std::filesystem::path& path) {
  internal::WriteFileAtomic(path, [&](std::ostream& out) { WritePhraseList(phrases, out); });
}

}  // namespace seclabel
