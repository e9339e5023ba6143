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

#include "qevent/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qevent/error.hpp"

namespace qevent::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::Parse, (where.empty() ? std::string("/") : where) + ": " + what);
}

std::string child(const std::string& where, std::string_view key) {
    // RFC 6901 escaping.
    std::string k;
    for (char ch : key) {
        if (ch == '~') k += "~0";
        else if (ch == '/') k += "~1";
        else k += ch;
    }
    return where + "/" + k;
}

std::string child(const std::string& where, std::size_t index) {
    return where + "/" + std::to_string(index);
}

const Json& field(const Json& j, const std::string& where, const char* key) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(child(where, key), "missing field");
    return *it;
}

const Json* optional_field(const Json& j, const std::string& where, const char* key) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return nullptr;
    return &*it;
}

std::string string_of(const Json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

const Json& array_of(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array");
    return j;
}

double number_of(const Json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where, "number is not finite");
    return v;
}

std::size_t count_of(const Json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a non-negative integer");
    return j.get<std::size_t>();
}

Complex complex_of(const Json& j, const std::string& where) {
    if (j.is_number()) return {number_of(j, where), 0.0};
    if (!j.is_array() || j.size() != 2) fail(where, "expected a number or [re, im]");
    return {number_of(j[0], child(where, 0)), number_of(j[1], child(where, 1))};
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::vector<std::string> strings_of(const Json& j, const std::string& where) {
    std::vector<std::string> out;
    const auto& arr = array_of(j, where);
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(string_of(arr[i], child(where, i)));
    return out;
}

// Re-raises library errors met while building objects from a document as
// Parse errors at `where`.
template <class F>
auto at_pointer(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse) throw;
        fail(where, std::string(error_code_name(e.code())) + ": " + e.what());
    }
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

Json to_json(const LabeledVector& v) {
    Json labels = Json::array();
    for (const auto& l : v.labels()) {
        labels.push_back({{"link", l.link}, {"space", l.space.name}, {"dim", l.space.dim}});
    }
    Json amps = Json::array();
    for (const auto& z : v.amplitudes()) amps.push_back(complex_json(z));
    return {{"labels", std::move(labels)}, {"amps", std::move(amps)}};
}

Json to_json(const ProductBra& bra) {
    Json out = Json::array();
    for (const auto& [link, factor] : bra.factors()) out.push_back(to_json(factor));
    return out;
}

Json to_json(const Region& r) { return {{"center", r.center}, {"extent", r.extent}}; }

Json to_json(const CandidateEvent& e) {
    Json out = {{"id", e.name}, {"c", complex_json(e.c)}, {"bra", to_json(e.bra)}, {"ket", to_json(e.ket)}};
    if (e.region) out["region"] = to_json(*e.region);
    return out;
}

Json to_json(const History& h) {
    Json events = Json::array();
    for (const auto& [id, e] : h.events()) {
        Json ej = {{"id", id},
                   {"kind", e.kind == EventKind::initial ? "initial" : "interior"},
                   {"backward_links", e.backward_links},
                   {"forward_links", e.forward_links},
                   {"emitted", to_json(e.emitted)},
                   {"absorbed", to_json(e.absorbed)},
                   {"amplitude", complex_json(e.amplitude)}};
        if (e.region) ej["region"] = to_json(*e.region);
        events.push_back(std::move(ej));
    }
    Json links = Json::array();
    for (const auto& [id, l] : h.links()) {
        links.push_back({{"id", id},
                         {"space", l.space.name},
                         {"dim", l.space.dim},
                         {"source", l.source},
                         {"target", l.target ? Json(*l.target) : Json(nullptr)}});
    }
    return {{"events", std::move(events)}, {"links", std::move(links)}};
}

LabeledVector vector_from_json(const Json& j, const std::string& where) {
    const auto lw = child(where, "labels");
    const auto& labels_json = array_of(field(j, where, "labels"), lw);
    std::vector<FactorLabel> labels;
    for (std::size_t i = 0; i < labels_json.size(); ++i) {
        const auto w = child(lw, i);
        const auto& l = labels_json[i];
        FactorLabel label;
        label.link = string_of(field(l, w, "link"), child(w, "link"));
        label.space.name = string_of(field(l, w, "space"), child(w, "space"));
        label.space.dim = count_of(field(l, w, "dim"), child(w, "dim"));
        if (label.link.empty()) fail(child(w, "link"), "empty link id");
        labels.push_back(std::move(label));
    }
    const auto aw = child(where, "amps");
    const auto& amps_json = array_of(field(j, where, "amps"), aw);
    std::vector<Complex> amps;
    for (std::size_t i = 0; i < amps_json.size(); ++i) amps.push_back(complex_of(amps_json[i], child(aw, i)));
    return at_pointer(where, [&] { return LabeledVector(std::move(labels), std::move(amps)); });
}

ProductBra bra_from_json(const Json& j, const std::string& where) {
    const auto& arr = array_of(j, where);
    std::vector<LabeledVector> factors;
    for (std::size_t i = 0; i < arr.size(); ++i) factors.push_back(vector_from_json(arr[i], child(where, i)));
    return at_pointer(where, [&] { return ProductBra(std::move(factors)); });
}

Region region_from_json(const Json& j, const std::string& where) {
    Region r;
    for (const char* key : {"center", "extent"}) {
        const auto w = child(where, key);
        const auto& arr = array_of(field(j, where, key), w);
        if (arr.size() != 4) fail(w, "expected 4 numbers");
        auto& dst = std::string_view(key) == "center" ? r.center : r.extent;
        for (std::size_t i = 0; i < 4; ++i) dst[i] = number_of(arr[i], child(w, i));
    }
    return r;
}

CandidateEvent candidate_from_json(const Json& j, const std::string& where) {
    CandidateEvent e;
    if (const auto* id = optional_field(j, where, "id")) e.name = string_of(*id, child(where, "id"));
    if (const auto* c = optional_field(j, where, "c")) e.c = complex_of(*c, child(where, "c"));
    e.bra = bra_from_json(field(j, where, "bra"), child(where, "bra"));
    e.ket = vector_from_json(field(j, where, "ket"), child(where, "ket"));
    if (const auto* r = optional_field(j, where, "region")) e.region = region_from_json(*r, child(where, "region"));
    return e;
}

History history_from_json(const Json& j, const std::string& where) {
    std::vector<EventRecord> events;
    const auto ew = child(where, "events");
    const auto& events_json = array_of(field(j, where, "events"), ew);
    for (std::size_t i = 0; i < events_json.size(); ++i) {
        const auto w = child(ew, i);
        const auto& ej = events_json[i];
        EventRecord e;
        e.id = string_of(field(ej, w, "id"), child(w, "id"));
        const auto kind = string_of(field(ej, w, "kind"), child(w, "kind"));
        if (kind == "initial") e.kind = EventKind::initial;
        else if (kind == "interior") e.kind = EventKind::interior;
        else fail(child(w, "kind"), "expected \"initial\" or \"interior\"");
        e.backward_links = strings_of(field(ej, w, "backward_links"), child(w, "backward_links"));
        e.forward_links = strings_of(field(ej, w, "forward_links"), child(w, "forward_links"));
        e.emitted = vector_from_json(field(ej, w, "emitted"), child(w, "emitted"));
        e.absorbed = bra_from_json(field(ej, w, "absorbed"), child(w, "absorbed"));
        e.amplitude = complex_of(field(ej, w, "amplitude"), child(w, "amplitude"));
        if (const auto* r = optional_field(ej, w, "region")) e.region = region_from_json(*r, child(w, "region"));
        events.push_back(std::move(e));
    }
    std::vector<LinkRecord> links;
    const auto lw = child(where, "links");
    const auto& links_json = array_of(field(j, where, "links"), lw);
    for (std::size_t i = 0; i < links_json.size(); ++i) {
        const auto w = child(lw, i);
        const auto& lj = links_json[i];
        LinkRecord l;
        l.id = string_of(field(lj, w, "id"), child(w, "id"));
        l.space.name = string_of(field(lj, w, "space"), child(w, "space"));
        l.space.dim = count_of(field(lj, w, "dim"), child(w, "dim"));
        l.source = string_of(field(lj, w, "source"), child(w, "source"));
        if (const auto* t = optional_field(lj, w, "target")) l.target = string_of(*t, child(w, "target"));
        links.push_back(std::move(l));
    }
    return History::from_records(std::move(events), std::move(links));
}

Json parse_text(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                          ": malformed JSON (" + e.what() + ")");
    }
}

std::string history_to_string(const History& h) { return to_json(h).dump(2); }

History history_from_string(std::string_view text) { return history_from_json(parse_text(text)); }

Scenario parse_scenario(std::string_view text) {
    const Json doc = parse_text(text);
    const std::string root;
    const auto& schema = field(doc, root, "schema");
    if (string_of(schema, "/schema") != kScenarioSchema) {
        fail("/schema", std::string("expected \"") + kScenarioSchema + "\"");
    }

    Scenario s;
    const auto& events = array_of(field(doc, root, "events"), "/events");
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto w = child("/events", i);
        const auto id = string_of(field(events[i], w, "id"), child(w, "id"));
        const auto vec = vector_from_json(field(events[i], w, "vector"), child(w, "vector"));
        std::optional<Region> region;
        if (const auto* r = optional_field(events[i], w, "region")) region = region_from_json(*r, child(w, "region"));
        at_pointer(w, [&] { return s.history.add_initial_event(vec, region, id); });
    }

    if (const auto* cuts = optional_field(doc, root, "cuts")) {
        array_of(*cuts, "/cuts");
        for (std::size_t i = 0; i < cuts->size(); ++i) {
            const auto w = child("/cuts", i);
            const auto name = string_of(field((*cuts)[i], w, "name"), child(w, "name"));
            const auto ids = strings_of(field((*cuts)[i], w, "events"), child(w, "events"));
            Cut cut{std::set<std::string>(ids.begin(), ids.end())};
            at_pointer(child(w, "events"), [&] {
                s.history.check_cut(cut);
                return 0;
            });
            if (!s.cuts.emplace(name, std::move(cut)).second) fail(child(w, "name"), "duplicate cut '" + name + "'");
        }
    }

    if (const auto* sets = optional_field(doc, root, "alternative_sets")) {
        array_of(*sets, "/alternative_sets");
        for (std::size_t i = 0; i < sets->size(); ++i) {
            const auto w = child("/alternative_sets", i);
            const auto& sj = (*sets)[i];
            NamedAlternativeSet named;
            named.name = string_of(field(sj, w, "name"), child(w, "name"));
            named.cut = string_of(field(sj, w, "cut"), child(w, "cut"));
            if (!s.cuts.count(named.cut)) fail(child(w, "cut"), "unknown cut '" + named.cut + "'");
            if (const auto* ex = optional_field(sj, w, "exhaustive")) {
                if (!ex->is_boolean()) fail(child(w, "exhaustive"), "expected a boolean");
                named.set.exhaustive = ex->get<bool>();
            }
            const auto aw = child(w, "alternatives");
            const auto& alts = array_of(field(sj, w, "alternatives"), aw);
            if (alts.empty()) fail(aw, "alternative set is empty");
            for (std::size_t k = 0; k < alts.size(); ++k) {
                const auto akw = child(aw, k);
                Alternative alt;
                alt.name = string_of(field(alts[k], akw, "name"), child(akw, "name"));
                const auto evw = child(akw, "events");
                const auto& evs = array_of(field(alts[k], akw, "events"), evw);
                if (evs.empty()) fail(evw, "alternative has no events");
                for (std::size_t m = 0; m < evs.size(); ++m) {
                    alt.events.push_back(candidate_from_json(evs[m], child(evw, m)));
                }
                named.set.alternatives.push_back(std::move(alt));
            }
            s.alternative_sets.push_back(std::move(named));
        }
    }
    return s;
}

}  // namespace qevent::io
