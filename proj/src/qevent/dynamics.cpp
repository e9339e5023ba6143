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

#include "qevent/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qevent/error.hpp"

namespace qevent {

namespace {

double checked_probability(double p) {
    if (p > 1.0 + kProbabilityTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "probability " << p << " exceeds 1";
        throw Error(ErrorCode::ProbabilityOverflow, msg.str());
    }
    return std::min(p, 1.0);
}

}  // namespace

CutState cut_state(const History& h, const Cut& cut) {
    CutState state;
    state.contributing_events = h.unsaturated_in(cut);
    LabeledVector psi;
    for (const auto& id : h.topological_order(cut)) {
        const auto& e = h.event(id);
        if (e.kind == EventKind::initial) {
            psi = tensor_product(psi, e.emitted);
        } else {
            psi = apply_event_operator(EventOperator{e.amplitude, e.absorbed, e.emitted}, psi);
        }
        if (!(squared_norm(psi) > 0.0)) {
            throw Error(ErrorCode::ZeroProbabilityEvent,
                        "realized pattern has zero amplitude at event '" + id + "'");
        }
        psi = psi.normalized();
    }
    state.composite = std::move(psi);
    return state;
}

double event_probability(const CutState& s, const CandidateEvent& e) {
    return checked_probability(squared_norm(apply_event_operator(e.op(), s.composite)));
}

double joint_probability(const CutState& s, std::span<const CandidateEvent> es) {
    std::set<std::string> seen;
    for (const auto& e : es) {
        for (const auto& link : e.bra.links()) {
            if (!seen.insert(link).second) {
                throw Error(ErrorCode::OverlappingBackwardLinks,
                            "two candidates absorb link '" + link + "'");
            }
        }
    }
    LabeledVector psi = s.composite;
    for (const auto& e : es) psi = apply_event_operator(e.op(), psi);
    return checked_probability(squared_norm(psi));
}

std::vector<double> alternative_probabilities(const CutState& s, const AlternativeSet& alts) {
    std::vector<double> out;
    out.reserve(alts.alternatives.size());
    for (const auto& alt : alts.alternatives) out.push_back(joint_probability(s, alt.events));
    return out;
}

CutState conditioned(const CutState& s, const CandidateEvent& e) {
    auto psi = apply_event_operator(e.op(), s.composite);
    const double p = checked_probability(squared_norm(psi));
    if (p <= kZeroProbability) {
        throw Error(ErrorCode::ZeroProbabilityEvent, "candidate '" + e.name + "' has zero probability");
    }
    CutState out;
    out.contributing_events = s.contributing_events;
    if (!e.ket.is_scalar()) out.contributing_events.push_back(e.name);
    out.composite = psi.normalized();
    return out;
}

ExtensionSampler::ExtensionSampler(std::vector<double> probabilities, std::uint64_t seed)
    : probabilities_(std::move(probabilities)), rng_(seed) {
    if (probabilities_.empty()) throw Error(ErrorCode::InvalidArgument, "empty alternative set");
    double sum = 0.0;
    for (double p : probabilities_) {
        if (!(p >= -kProbabilityTolerance)) {
            throw Error(ErrorCode::InvalidArgument, "negative probability");
        }
        sum += p;
        cumulative_.push_back(sum);
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "alternative probabilities sum to " << sum;
        throw NotExhaustiveError(sum, msg.str());
    }
}

std::size_t ExtensionSampler::next() {
    const double u = rng_.uniform();
    for (std::size_t i = 0; i < cumulative_.size(); ++i) {
        if (u < cumulative_[i]) return i;
    }
    // u landed in the rounding gap above the last partial sum.
    for (std::size_t i = probabilities_.size(); i-- > 0;) {
        if (probabilities_[i] > 0.0) return i;
    }
    return probabilities_.size() - 1;
}

std::size_t sample_extension(const CutState& s, const AlternativeSet& alts, std::uint64_t seed) {
    ExtensionSampler sampler(alternative_probabilities(s, alts), seed);
    return sampler.next();
}

std::string realize(History& h, const Cut& cut, const CandidateEvent& e) {
    const auto free = h.free_links(cut);
    for (const auto& link : e.bra.links()) {
        if (!free.count(link)) {
            throw Error(ErrorCode::MissingLabel, "link '" + link + "' is not free for this cut");
        }
    }
    const double p = event_probability(cut_state(h, cut), e);
    if (p <= kZeroProbability) {
        throw Error(ErrorCode::ZeroProbabilityEvent, "candidate '" + e.name + "' has zero probability");
    }
    std::optional<std::string> id;
    if (!e.name.empty()) id = e.name;
    return h.add_interior_event(e.op(), e.region, id);
}

std::vector<std::string> realize_all(History& h, const Cut& cut, const Alternative& alt) {
    Cut current = cut;
    std::vector<std::string> ids;
    for (const auto& e : alt.events) {
        ids.push_back(realize(h, current, e));
        current.events.insert(ids.back());
    }
    return ids;
}

}  // namespace qevent
