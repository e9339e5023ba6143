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

#ifndef QEVENT_TESTS_PROPERTIES_HPP
#define QEVENT_TESTS_PROPERTIES_HPP

// Dynamics properties over randomized histories: chain rule, permutation
// invariance of spacelike joints, spectator invariance, saturated-event
// irrelevance. Each is measured as a worst absolute error and every
// probability is also compared against the naive oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "naive_oracle.hpp"
#include "random_history.hpp"

namespace props {

struct Errors {
    double chain = 0.0;
    double permutation = 0.0;
    double spectator = 0.0;
    double saturated = 0.0;
    double oracle = 0.0;
    std::size_t histories = 0;
    std::size_t chain_checks = 0;
};

inline void worst(double& slot, double a, double b) { slot = std::max(slot, std::abs(a - b)); }

inline Errors run_suite(std::size_t histories, std::uint64_t seed0 = 0) {
    using namespace qevent;
    Errors err;
    for (std::size_t n = 0; n < histories; ++n) {
        const std::uint64_t seed = seed0 + n;
        const auto r = testgen::random_history(seed);
        testgen::Gen g(mix64(seed ^ 0x5eedULL), "p");
        const auto groups = testgen::disjoint_groups(g, r.free, 3);
        std::vector<testgen::RawEvent> raw;
        for (std::size_t k = 0; k < 3; ++k) raw.push_back(g.candidate("c" + std::to_string(k), groups[k], g.below(3)));
        const auto cands = testgen::to_candidates(raw);

        const Cut cut{r.cut};
        const auto state = cut_state(r.history, cut);
        const auto ostate = oracle::cut_state(r.recipe, r.cut);

        // Oracle agreement on singles and the triple joint.
        for (std::size_t k = 0; k < 3; ++k) worst(err.oracle, event_probability(state, cands[k]), oracle::joint_probability(ostate, {raw[k]}));
        const double triple = joint_probability(state, cands);
        worst(err.oracle, triple, oracle::joint_probability(ostate, raw));

        // Chain rule for (c0, c1).
        const std::array<CandidateEvent, 2> pair{cands[0], cands[1]};
        const double p0 = event_probability(state, cands[0]);
        if (p0 > 1e-10) {
            const double p1_given = event_probability(conditioned(state, cands[0]), cands[1]);
            worst(err.chain, joint_probability(state, pair), p0 * p1_given);
            const auto oc = oracle::normalized(oracle::apply(ostate, raw[0].bra, raw[0].c, raw[0].vec));
            worst(err.oracle, p1_given, oracle::joint_probability(oc, {raw[1]}));
            ++err.chain_checks;
        }

        // Every ordering of the three spacelike candidates.
        std::array<std::size_t, 3> perm{0, 1, 2};
        do {
            const std::vector<CandidateEvent> order{cands[perm[0]], cands[perm[1]], cands[perm[2]]};
            worst(err.permutation, joint_probability(state, order), triple);
        } while (std::next_permutation(perm.begin(), perm.end()));

        // A spectator: a fresh unsaturated initial event inside the cut.
        {
            History h = r.history;
            auto recipe = r.recipe;
            auto cut2 = r.cut;
            testgen::RawEvent spec;
            spec.id = "spectator";
            spec.vec = g.unit_vector(g.fresh_links("sp", 1 + g.below(2), 3));
            h.add_initial_event(testgen::to_vector(spec.vec), std::nullopt, spec.id);
            recipe.push_back(spec);
            cut2.insert(spec.id);
            const auto s2 = cut_state(h, Cut{cut2});
            for (std::size_t k = 0; k < 3; ++k) worst(err.spectator, event_probability(s2, cands[k]), event_probability(state, cands[k]));
            worst(err.spectator, joint_probability(s2, pair), joint_probability(state, pair));
            worst(err.spectator, joint_probability(s2, cands), triple);
            worst(err.oracle, joint_probability(s2, cands), oracle::joint_probability(oracle::cut_state(recipe, cut2), raw));
        }

        // A closed pair: a source whose links are all absorbed by a sink
        // emitting nothing. Both are saturated once inside the cut.
        {
            History h = r.history;
            auto recipe = r.recipe;
            auto cut2 = r.cut;
            testgen::RawEvent src;
            src.id = "sat_src";
            src.vec = g.unit_vector(g.fresh_links("sa", 1 + g.below(2), 3));
            h.add_initial_event(testgen::to_vector(src.vec), std::nullopt, src.id);
            recipe.push_back(src);
            cut2.insert(src.id);
            auto sink = g.candidate("sat_sink", src.vec.labels, 0);
            sink.c = g.phase();
            realize(h, Cut{cut2}, testgen::to_candidate(sink));
            recipe.push_back(sink);
            cut2.insert(sink.id);
            const auto s2 = cut_state(h, Cut{cut2});
            if (s2.contributing_events != state.contributing_events) err.saturated = INFINITY;
            for (std::size_t k = 0; k < 3; ++k) worst(err.saturated, event_probability(s2, cands[k]), event_probability(state, cands[k]));
            worst(err.saturated, joint_probability(s2, pair), joint_probability(state, pair));
            worst(err.saturated, joint_probability(s2, cands), triple);
            worst(err.oracle, joint_probability(s2, cands), oracle::joint_probability(oracle::cut_state(recipe, cut2), raw));
        }
        ++err.histories;
    }
    return err;
}

}  // namespace props

#endif  // QEVENT_TESTS_PROPERTIES_HPP
