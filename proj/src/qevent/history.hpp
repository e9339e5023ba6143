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

#ifndef QEVENT_HISTORY_HPP
#define QEVENT_HISTORY_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qevent/tensor.hpp"

namespace qevent {

/// Rough space-time region of an event: (t, x, y, z) center and extents.
/// Inert metadata for the graph; only carried through.
struct Region {
    std::array<double, 4> center{};
    std::array<double, 4> extent{};

    friend bool operator==(const Region&, const Region&) = default;
};

enum class LinkStatus { free, established };
enum class EventKind { initial, interior };
enum class Saturation { saturated, unsaturated };

struct LinkRecord {
    std::string id;
    SpaceType space;
    std::string source;
    std::optional<std::string> target;

    LinkStatus status() const noexcept {
        return target ? LinkStatus::established : LinkStatus::free;
    }

    friend bool operator==(const LinkRecord&, const LinkRecord&) = default;
};

struct EventRecord {
    std::string id;
    EventKind kind = EventKind::initial;
    std::vector<std::string> backward_links;
    std::vector<std::string> forward_links;
    /// Vector over the forward links (the event's ket).
    LabeledVector emitted;
    /// Interior events: the selected product vector on the backward links.
    ProductBra absorbed;
    Complex amplitude{1.0, 0.0};
    std::optional<Region> region;

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// A subjective past: a set of event ids that must be closed under
/// following backward links to their sources.
struct Cut {
    std::set<std::string> events;

    friend bool operator==(const Cut&, const Cut&) = default;
};

struct Violation {
    std::string kind;
    std::string id;
    std::string message;
};

/// The realized pattern of events and causal links.
///
/// Grows monotonically: nothing is ever removed. Copies are independent
/// snapshots.
class History {
public:
    History() = default;

    /// Builds a history from raw records without checking invariants;
    /// call validate() on the result. Used by deserialization and tests.
    static History from_records(std::vector<EventRecord> events, std::vector<LinkRecord> links);

    /// Adds an event with no backward links emitting `vec`, one free link per
    /// label. Throws NonUnitVector, LabelCollision, DuplicateEvent.
    std::string add_initial_event(const LabeledVector& vec, std::optional<Region> region = {},
                                  std::optional<std::string> requested_id = {});

    /// Adds an interior event absorbing the bra's links (which must be free)
    /// and emitting the ket on fresh links. No probability check; see realize().
    std::string add_interior_event(const EventOperator& op, std::optional<Region> region = {},
                                   std::optional<std::string> requested_id = {});

    const std::map<std::string, EventRecord>& events() const noexcept { return events_; }
    const std::map<std::string, LinkRecord>& links() const noexcept { return links_; }
    const EventRecord& event(const std::string& id) const;
    const LinkRecord& link(const std::string& id) const;
    bool contains_event(const std::string& id) const { return events_.count(id) != 0; }

    Saturation saturation_status(const std::string& event_id) const;

    /// Links leaving the cut: source inside, target absent or outside.
    /// Throws InvalidCut / UnknownEvent.
    std::set<std::string> free_links(const Cut& cut) const;

    /// Events of the cut with at least one link free relative to the cut.
    std::vector<std::string> unsaturated_in(const Cut& cut) const;

    /// Throws UnknownEvent for missing ids and InvalidCut if not past-closed.
    void check_cut(const Cut& cut) const;
    bool is_past_closed(const Cut& cut) const;

    /// Cut holding every event.
    Cut full_cut() const;

    /// Topological order of the cut's events; ties broken by id.
    std::vector<std::string> topological_order(const Cut& cut) const;

    /// Empty iff every structural invariant holds.
    std::vector<Violation> validate() const;

    friend bool operator==(const History& a, const History& b) {
        return a.events_ == b.events_ && a.links_ == b.links_;
    }

private:
    std::string fresh_event_id(const std::optional<std::string>& requested);

    std::map<std::string, EventRecord> events_;
    std::map<std::string, LinkRecord> links_;
    std::uint64_t next_serial_ = 1;
};

}  // namespace qevent

#endif  // QEVENT_HISTORY_HPP
