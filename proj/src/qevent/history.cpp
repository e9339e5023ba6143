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

#include "qevent/history.hpp"

#include <algorithm>
#include <cmath>

#include "qevent/error.hpp"

namespace qevent {

namespace {

constexpr double kStoredUnitTolerance = 1e-9;

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::set<std::string> label_links(const LabeledVector& v) {
    std::set<std::string> out;
    for (const auto& l : v.labels()) out.insert(l.link);
    return out;
}

}  // namespace

History History::from_records(std::vector<EventRecord> events, std::vector<LinkRecord> links) {
    History h;
    for (auto& e : events) {
        auto id = e.id;
        h.events_.insert_or_assign(std::move(id), std::move(e));
    }
    for (auto& l : links) {
        auto id = l.id;
        h.links_.insert_or_assign(std::move(id), std::move(l));
    }
    h.next_serial_ = h.events_.size() + 1;
    return h;
}

std::string History::fresh_event_id(const std::optional<std::string>& requested) {
    if (requested) {
        if (requested->empty()) throw Error(ErrorCode::InvalidArgument, "empty event id");
        if (events_.count(*requested)) {
            throw Error(ErrorCode::DuplicateEvent, "event '" + *requested + "' already exists");
        }
        return *requested;
    }
    std::string id;
    do {
        id = "e" + std::to_string(next_serial_++);
    } while (events_.count(id));
    return id;
}

std::string History::add_initial_event(const LabeledVector& vec, std::optional<Region> region,
                                       std::optional<std::string> requested_id) {
    const double n2 = squared_norm(vec);
    if (std::abs(n2 - 1.0) > kUnitTolerance) {
        throw Error(ErrorCode::NonUnitVector,
                    "initial event vector has squared norm " + std::to_string(n2));
    }
    for (const auto& l : vec.labels()) {
        if (links_.count(l.link)) {
            throw Error(ErrorCode::LabelCollision, "link '" + l.link + "' already exists");
        }
    }
    const auto id = fresh_event_id(requested_id);
    EventRecord rec;
    rec.id = id;
    rec.kind = EventKind::initial;
    rec.emitted = vec;
    rec.region = region;
    for (const auto& l : vec.labels()) {
        rec.forward_links.push_back(l.link);
        links_.emplace(l.link, LinkRecord{l.link, l.space, id, std::nullopt});
    }
    events_.emplace(id, std::move(rec));
    return id;
}

std::string History::add_interior_event(const EventOperator& op, std::optional<Region> region,
                                        std::optional<std::string> requested_id) {
    if (op.bra.empty()) {
        throw Error(ErrorCode::InvalidArgument, "interior event needs at least one backward link");
    }
    const double n2 = squared_norm(op.ket);
    if (std::abs(n2 - 1.0) > kUnitTolerance) {
        throw Error(ErrorCode::NonUnitVector, "event ket has squared norm " + std::to_string(n2));
    }
    for (const auto& [link_id, factor] : op.bra.factors()) {
        auto it = links_.find(link_id);
        if (it == links_.end()) {
            throw Error(ErrorCode::MissingLabel, "backward link '" + link_id + "' does not exist");
        }
        if (it->second.target) {
            throw Error(ErrorCode::LinkAlreadyEstablished,
                        "link '" + link_id + "' already absorbed by event '" + *it->second.target + "'");
        }
        if (!(factor.labels()[0].space == it->second.space)) {
            throw Error(ErrorCode::DimensionMismatch, "bra factor space differs on link '" + link_id + "'");
        }
    }
    for (const auto& l : op.ket.labels()) {
        if (links_.count(l.link)) {
            throw Error(ErrorCode::LabelCollision, "link '" + l.link + "' already exists");
        }
    }
    const auto id = fresh_event_id(requested_id);
    EventRecord rec;
    rec.id = id;
    rec.kind = EventKind::interior;
    rec.backward_links = op.bra.links();
    rec.emitted = op.ket;
    rec.absorbed = op.bra;
    rec.amplitude = op.c;
    rec.region = region;
    for (const auto& link_id : rec.backward_links) links_.at(link_id).target = id;
    for (const auto& l : op.ket.labels()) {
        rec.forward_links.push_back(l.link);
        links_.emplace(l.link, LinkRecord{l.link, l.space, id, std::nullopt});
    }
    events_.emplace(id, std::move(rec));
    return id;
}

const EventRecord& History::event(const std::string& id) const {
    auto it = events_.find(id);
    if (it == events_.end()) throw Error(ErrorCode::UnknownEvent, "unknown event '" + id + "'");
    return it->second;
}

const LinkRecord& History::link(const std::string& id) const {
    auto it = links_.find(id);
    if (it == links_.end()) throw Error(ErrorCode::MissingLabel, "unknown link '" + id + "'");
    return it->second;
}

Saturation History::saturation_status(const std::string& event_id) const {
    for (const auto& link_id : event(event_id).forward_links) {
        if (link(link_id).status() == LinkStatus::free) return Saturation::unsaturated;
    }
    return Saturation::saturated;
}

bool History::is_past_closed(const Cut& cut) const {
    for (const auto& id : cut.events) {
        auto it = events_.find(id);
        if (it == events_.end()) return false;
        for (const auto& link_id : it->second.backward_links) {
            auto lit = links_.find(link_id);
            if (lit == links_.end() || !cut.events.count(lit->second.source)) return false;
        }
    }
    return true;
}

void History::check_cut(const Cut& cut) const {
    for (const auto& id : cut.events) {
        if (!events_.count(id)) throw Error(ErrorCode::UnknownEvent, "cut names unknown event '" + id + "'");
    }
    if (!is_past_closed(cut)) throw Error(ErrorCode::InvalidCut, "cut is not closed under the past");
}

Cut History::full_cut() const {
    Cut cut;
    for (const auto& [id, _] : events_) cut.events.insert(id);
    return cut;
}

std::set<std::string> History::free_links(const Cut& cut) const {
    check_cut(cut);
    std::set<std::string> out;
    for (const auto& id : cut.events) {
        for (const auto& link_id : events_.at(id).forward_links) {
            const auto& l = links_.at(link_id);
            if (!l.target || !cut.events.count(*l.target)) out.insert(link_id);
        }
    }
    return out;
}

std::vector<std::string> History::unsaturated_in(const Cut& cut) const {
    check_cut(cut);
    std::vector<std::string> out;
    for (const auto& id : cut.events) {
        for (const auto& link_id : events_.at(id).forward_links) {
            const auto& l = links_.at(link_id);
            if (!l.target || !cut.events.count(*l.target)) {
                out.push_back(id);
                break;
            }
        }
    }
    return out;
}

std::vector<std::string> History::topological_order(const Cut& cut) const {
    check_cut(cut);
    std::map<std::string, std::size_t> in_degree;
    for (const auto& id : cut.events) in_degree[id] = 0;
    for (const auto& id : cut.events) {
        for (const auto& link_id : events_.at(id).backward_links) {
            if (cut.events.count(links_.at(link_id).source)) ++in_degree[id];
        }
    }
    std::set<std::string> ready;
    for (const auto& [id, deg] : in_degree) {
        if (deg == 0) ready.insert(id);
    }
    std::vector<std::string> order;
    while (!ready.empty()) {
        auto id = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(id);
        for (const auto& link_id : events_.at(id).forward_links) {
            const auto& l = links_.at(link_id);
            if (l.target && cut.events.count(*l.target) && --in_degree[*l.target] == 0) {
                ready.insert(*l.target);
            }
        }
    }
    if (order.size() != cut.events.size()) {
        throw Error(ErrorCode::InvalidCut, "cut contains a causal cycle");
    }
    return order;
}

std::vector<Violation> History::validate() const {
    std::vector<Violation> out;
    auto report = [&](std::string kind, const std::string& id, std::string message) {
        out.push_back(Violation{std::move(kind), id, std::move(message)});
    };

    std::map<std::string, std::vector<std::string>> claimed_by;
    for (const auto& [id, e] : events_) {
        if (e.kind == EventKind::initial && !e.backward_links.empty()) {
            report("initial_backward", id, "initial event has backward links");
        }
        if (e.kind == EventKind::interior && e.backward_links.empty()) {
            report("interior_without_backward", id, "interior event has no backward links");
        }
        if (e.kind == EventKind::interior && as_set(e.absorbed.links()) != as_set(e.backward_links)) {
            report("absorbed_mismatch", id, "absorbed bra does not cover the backward links");
        }
        if (label_links(e.emitted) != as_set(e.forward_links) ||
            e.forward_links.size() != e.emitted.labels().size()) {
            report("emitted_mismatch", id, "emitted vector labels differ from forward links");
        }
        if (std::abs(squared_norm(e.emitted) - 1.0) > kStoredUnitTolerance) {
            report("non_unit", id, "emitted vector is not unit norm");
        }
        for (const auto& link_id : e.backward_links) {
            claimed_by[link_id].push_back(id);
            auto it = links_.find(link_id);
            if (it == links_.end()) {
                report("dangling_backward", id, "backward link '" + link_id + "' does not exist");
            } else if (it->second.target != id) {
                report("backward_mismatch", link_id, "link target is not event '" + id + "'");
            }
        }
        for (const auto& link_id : e.forward_links) {
            auto it = links_.find(link_id);
            if (it == links_.end()) {
                report("dangling_forward", id, "forward link '" + link_id + "' does not exist");
            } else if (it->second.source != id) {
                report("forward_mismatch", link_id, "link source is not event '" + id + "'");
            }
        }
    }
    for (const auto& [link_id, claimants] : claimed_by) {
        if (claimants.size() > 1) {
            report("multiplicity", link_id, "link is backward to " + std::to_string(claimants.size()) + " events");
        }
    }
    for (const auto& [id, l] : links_) {
        auto src = events_.find(l.source);
        if (src == events_.end()) {
            report("dangling_source", id, "source event '" + l.source + "' does not exist");
        } else if (std::find(src->second.forward_links.begin(), src->second.forward_links.end(), id) ==
                   src->second.forward_links.end()) {
            report("forward_mismatch", id, "source event does not list the link as forward");
        }
        if (l.target) {
            auto tgt = events_.find(*l.target);
            if (tgt == events_.end()) {
                report("dangling_target", id, "target event '" + *l.target + "' does not exist");
            } else if (std::find(tgt->second.backward_links.begin(), tgt->second.backward_links.end(), id) ==
                       tgt->second.backward_links.end()) {
                report("backward_mismatch", id, "target event does not list the link as backward");
            }
        }
    }

    // Kahn's algorithm over source -> target edges; leftovers sit on a cycle.
    std::map<std::string, std::size_t> in_degree;
    for (const auto& [id, _] : events_) in_degree[id] = 0;
    for (const auto& [_, l] : links_) {
        if (l.target && events_.count(l.source) && events_.count(*l.target)) ++in_degree[*l.target];
    }
    std::vector<std::string> ready;
    for (const auto& [id, deg] : in_degree) {
        if (deg == 0) ready.push_back(id);
    }
    while (!ready.empty()) {
        auto id = ready.back();
        ready.pop_back();
        for (const auto& [_, l] : links_) {
            if (l.source == id && l.target && events_.count(*l.target) && --in_degree[*l.target] == 0) {
                ready.push_back(*l.target);
            }
        }
    }
    for (const auto& [id, deg] : in_degree) {
        if (deg > 0) report("cycle", id, "event lies on a causal cycle");
    }
    return out;
}

}  // namespace qevent
