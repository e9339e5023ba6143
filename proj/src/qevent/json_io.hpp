// Copyright 2026 The qevent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QEVENT_JSON_IO_HPP
#define QEVENT_JSON_IO_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qevent/dynamics.hpp"
#include "qevent/history.hpp"

// JSON forms of the graph types.
//
// A vector literal is
//   {"labels": [{"link": "a", "space": "spin", "dim": 2}, ...],
//    "amps": [[re, im], ...]}
// with amplitudes row-major over the labels as listed. An amplitude may also
// be a bare real number. Doubles are written in shortest round-trip form, so
// write -> read reproduces every amplitude bit for bit.

namespace qevent::io {

using Json = nlohmann::json;

Json to_json(const LabeledVector& v);
Json to_json(const ProductBra& bra);
Json to_json(const Region& r);
Json to_json(const CandidateEvent& e);
Json to_json(const History& h);

/// Each reader throws Error(Parse) naming the JSON pointer of the bad field.
/// `where` is the pointer of `j` inside the enclosing document.
LabeledVector vector_from_json(const Json& j, const std::string& where = "");
ProductBra bra_from_json(const Json& j, const std::string& where = "");
Region region_from_json(const Json& j, const std::string& where = "");
CandidateEvent candidate_from_json(const Json& j, const std::string& where = "");
History history_from_json(const Json& j, const std::string& where = "");

/// Parses text, reporting syntax errors with line and column.
Json parse_text(std::string_view text);

std::string history_to_string(const History& h);
History history_from_string(std::string_view text);

inline constexpr const char* kScenarioSchema = "qevent.scenario/1";

struct NamedAlternativeSet {
    std::string name;
    std::string cut;
    AlternativeSet set;
};

/// A scenario file:
///   {"schema": "qevent.scenario/1",
///    "events": [{"id": "1", "vector": V, "region": R?}, ...],
///    "cuts": [{"name": "past", "events": ["1", ...]}, ...],
///    "alternative_sets": [{"name": "...", "cut": "past", "exhaustive": true,
///        "alternatives": [{"name": "...", "events": [C, ...]}, ...]}, ...]}
/// where C is {"id": "4", "c": [re, im]?, "bra": [V, ...], "ket": V, "region": R?}.
struct Scenario {
    History history;
    std::map<std::string, Cut> cuts;
    std::vector<NamedAlternativeSet> alternative_sets;
};

/// Parses and checks a scenario: initial events must be unit vectors on fresh
/// links, cuts must be valid, and every set must refer to a known cut.
/// Every failure is reported as Error(Parse) with position or pointer.
Scenario parse_scenario(std::string_view text);

}  // namespace qevent::io

#endif  // QEVENT_JSON_IO_HPP
