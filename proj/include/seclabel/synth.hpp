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

// Template-based generator of vulnerability descriptions with known
// entity positions.
//
// Every planted entity is recoverable by the distant labeler from the
// record, the heuristics, or the relevant-term gazetteer, except for
// out-of-record distractors: a product the record does not list, or a
// reference to some other vulnerability id. Roughly one description in
// ten carries one.

#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

#include "seclabel/autolabel.hpp"
#include "seclabel/corpus.hpp"

namespace seclabel {

struct SyntheticData {
  std::vector<StructuredRecord> records;
  Corpus gold;  // one description per record, same order and ids
};

SyntheticData GenerateSynthetic(std::size_t n_records, std::uint64_t seed);

// Every lowercased n-gram (n <= 3) of the gold text that is not exactly a
// planted relevant-term phrase. Passing it to BuildGazetteer leaves only
// relevant terms.
std::set<Phrase> SyntheticStoplist(const Corpus& gold);

}  // namespace seclabel
