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

#include <doctest.h>

#include <algorithm>
#include <set>

#include "qevent/dynamics.hpp"
#include "qevent/epr.hpp"
#include "qevent/error.hpp"
#include "qevent/history.hpp"
#include "random_history.hpp"

using namespace qevent;

namespace {

SpaceType dim(std::size_t d) { return testgen::space_of(d); }

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

bool has_violation(const History& h, const std::string& kind) {
    const auto v = h.validate();
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

// Independent traversal: links whose source is in the cut and whose target
// is missing or outside it.
std::set<std::string> traverse_free(const History& h, const std::set<std::string>& cut) {
    std::set<std::string> out;
    for (const auto& id : cut) {
        for (const auto& link : h.event(id).forward_links) {
            const auto& t = h.link(link).target;
            if (!t || !cut.count(*t)) out.insert(link);
        }
    }
    return out;
}

epr::EprSetup figure() { return epr::build_epr(epr::Direction::in_plane(0.0), epr::Direction::in_plane(60.0)); }

}  // namespace

TEST_CASE("singlet as the only initial event") {
    History h;
    const double r = 1.0 / std::sqrt(2.0);
    const auto id = h.add_initial_event(LabeledVector({{"alpha", dim(2)}, {"beta", dim(2)}}, {0.0, r, -r, 0.0}));
    CHECK(h.events().size() == 1);
    CHECK(h.links().size() == 2);
    CHECK(h.free_links(h.full_cut()) == std::set<std::string>{"alpha", "beta"});
    CHECK(h.saturation_status(id) == Saturation::unsaturated);
    CHECK(h.validate().empty());
}

TEST_CASE("three initial events of the pattern figure") {
    const auto s = figure();
    CHECK(s.history.events().size() == 3);
    CHECK(s.history.free_links(s.past) ==
          std::set<std::string>{"1'", "2'", "alpha", "beta", "delta", "gamma"});
    CHECK(s.history.free_links(Cut{}).empty());
    CHECK(s.history.validate().empty());
}

TEST_CASE("initial event preconditions") {
    History h;
    const auto half = single_factor("a", dim(2), {0.5, 0.0});
    CHECK(code_of([&] { h.add_initial_event(half); }) == ErrorCode::NonUnitVector);
    h.add_initial_event(single_factor("a", dim(1), {1.0}), std::nullopt, "A");
    CHECK(code_of([&] { h.add_initial_event(single_factor("a", dim(1), {1.0})); }) == ErrorCode::LabelCollision);
    CHECK(code_of([&] { h.add_initial_event(single_factor("b", dim(1), {1.0}), std::nullopt, "A"); }) ==
          ErrorCode::DuplicateEvent);
    CHECK(code_of([&] { h.saturation_status("nope"); }) == ErrorCode::UnknownEvent);
}

TEST_CASE("saturation follows realization of events 4 and 5") {
    auto s = figure();
    const auto& pp = s.alternatives.alternatives[0];
    Cut cut = s.past;
    const auto id4 = realize(s.history, cut, pp.events[0]);
    cut.events.insert(id4);
    CHECK(s.history.saturation_status("3") == Saturation::unsaturated);
    CHECK(s.history.link("alpha").status() == LinkStatus::established);
    CHECK(s.history.link("gamma").status() == LinkStatus::established);
    CHECK(s.history.link("beta").status() == LinkStatus::free);

    const auto id5 = realize(s.history, cut, pp.events[1]);
    cut.events.insert(id5);
    CHECK(s.history.saturation_status("3") == Saturation::saturated);
    CHECK(s.history.saturation_status("1") == Saturation::unsaturated);  // 1' never absorbed
    CHECK(s.history.free_links(cut) == traverse_free(s.history, cut.events));
    CHECK(s.history.free_links(cut) == std::set<std::string>{"1'", "2'", "out4", "out5"});
    CHECK(s.history.validate().empty());

    // The earlier subjective past still sees alpha and beta as open.
    CHECK(s.history.free_links(s.past).count("alpha") == 1);
}

TEST_CASE("cuts must be past-closed") {
    auto s = figure();
    const auto id4 = realize(s.history, s.past, s.alternatives.alternatives[0].events[0]);
    CHECK(code_of([&] { s.history.free_links(Cut{{id4}}); }) == ErrorCode::InvalidCut);
    CHECK(code_of([&] { s.history.free_links(Cut{{"ghost"}}); }) == ErrorCode::UnknownEvent);
    CHECK(s.history.is_past_closed(Cut{{"1", "3", id4}}));
    CHECK_FALSE(s.history.is_past_closed(Cut{{"3", id4}}));
}

TEST_CASE("hand-built histories with broken invariants") {
    const auto v = single_factor("l", dim(1), {1.0});
    const auto w = single_factor("m", dim(1), {1.0});

    SUBCASE("cycle") {
        EventRecord a{"A", EventKind::interior, {"m"}, {"l"}, v, ProductBra({w}), 1.0, std::nullopt};
        EventRecord b{"B", EventKind::interior, {"l"}, {"m"}, w, ProductBra({v}), 1.0, std::nullopt};
        const auto h = History::from_records({a, b}, {{"l", dim(1), "A", "B"}, {"m", dim(1), "B", "A"}});
        CHECK(has_violation(h, "cycle"));
    }
    SUBCASE("link absorbed twice") {
        EventRecord src{"S", EventKind::initial, {}, {"l"}, v, {}, 1.0, std::nullopt};
        EventRecord t1{"T1", EventKind::interior, {"l"}, {}, LabeledVector{}, ProductBra({v}), 1.0, std::nullopt};
        EventRecord t2{"T2", EventKind::interior, {"l"}, {}, LabeledVector{}, ProductBra({v}), 1.0, std::nullopt};
        const auto h = History::from_records({src, t1, t2}, {{"l", dim(1), "S", "T1"}});
        CHECK(has_violation(h, "multiplicity"));
    }
    SUBCASE("non-unit emitted vector") {
        EventRecord src{"S", EventKind::initial, {}, {"l"}, v.scaled(2.0), {}, 1.0, std::nullopt};
        const auto h = History::from_records({src}, {{"l", dim(1), "S", std::nullopt}});
        CHECK(has_violation(h, "non_unit"));
    }
    SUBCASE("initial event with backward links") {
        EventRecord src{"S", EventKind::initial, {"m"}, {"l"}, v, {}, 1.0, std::nullopt};
        const auto h = History::from_records({src}, {{"l", dim(1), "S", std::nullopt}});
        CHECK_FALSE(h.validate().empty());
    }
}

TEST_CASE("monotone growth and saturation recomputation over random histories") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto r = testgen::random_history(seed);
        const auto before = r.history;
        testgen::Gen g(seed + 7, "t");
        const auto e = g.candidate("grow", {r.free[0]}, 1);
        const auto cand = testgen::to_candidate(e);
        if (event_probability(cut_state(r.history, Cut{r.cut}), cand) <= kZeroProbability) continue;
        realize(r.history, Cut{r.cut}, cand);
        for (const auto& [id, ev] : before.events()) REQUIRE(r.history.contains_event(id));
        REQUIRE(r.history.validate().empty());
        REQUIRE(r.history.topological_order(r.history.full_cut()).size() == r.history.events().size());
        // Saturation from link statuses alone.
        for (const auto& [id, ev] : r.history.events()) {
            const bool all_absorbed = std::all_of(ev.forward_links.begin(), ev.forward_links.end(), [&](auto& l) {
                return r.history.link(l).target.has_value();
            });
            CHECK((r.history.saturation_status(id) == Saturation::saturated) == all_absorbed);
        }
        CHECK(r.history.free_links(r.history.full_cut()) == traverse_free(r.history, r.history.full_cut().events));
    }
}

TEST_CASE("history copies are independent snapshots") {
    auto s = figure();
    const History snapshot = s.history;
    realize(s.history, s.past, s.alternatives.alternatives[0].events[0]);
    CHECK(snapshot.events().size() == 3);
    CHECK(s.history.events().size() == 4);
    CHECK_FALSE(snapshot == s.history);
}
