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

#ifndef QEVENT_DYNAMICS_HPP
#define QEVENT_DYNAMICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qevent/history.hpp"
#include "qevent/rng.hpp"
#include "qevent/tensor.hpp"

namespace qevent {

/// Slack allowed on probabilities and on the sum of an exhaustive set.
inline constexpr double kProbabilityTolerance = 1e-9;

/// Realizing an event whose probability is at or below this is refused.
inline constexpr double kZeroProbability = 1e-14;

/// Probability source for extensions of a cut.
struct CutState {
    std::vector<std::string> contributing_events;
    /// Unit vector over the links that are free relative to the cut.
    LabeledVector composite;
};

/// A maximal event that may extend the pattern.
struct CandidateEvent {
    std::string name;
    ProductBra bra;
    Complex c{1.0, 0.0};
    LabeledVector ket;
    std::optional<Region> region;

    EventOperator op() const { return EventOperator{c, bra, ket}; }
};

/// One way the pattern may grow: one or more events realized together.
struct Alternative {
    std::string name;
    std::vector<CandidateEvent> events;
};

struct AlternativeSet {
    std::vector<Alternative> alternatives;
    bool exhaustive = true;
};

/// Throws InvalidCut / UnknownEvent.
CutState cut_state(const History& h, const Cut& cut);

/// Squared norm after applying the candidate's operator to the composite.
/// Throws MissingLabel, DuplicateLabel, ProbabilityOverflow.
double event_probability(const CutState& s, const CandidateEvent& e);

/// Squared norm after applying every candidate in list order.
/// Throws OverlappingBackwardLinks when two bras share a link.
double joint_probability(const CutState& s, std::span<const CandidateEvent> es);

std::vector<double> alternative_probabilities(const CutState& s, const AlternativeSet& alts);

/// State of the cut after the candidate is realized, renormalized.
/// Throws ZeroProbabilityEvent.
CutState conditioned(const CutState& s, const CandidateEvent& e);

/// Inverse-CDF sampler over a fixed probability vector.
class ExtensionSampler {
public:
    /// Throws NotExhaustiveError unless the probabilities sum to 1 within tolerance.
    ExtensionSampler(std::vector<double> probabilities, std::uint64_t seed);

    std::size_t next();
    const std::vector<double>& probabilities() const noexcept { return probabilities_; }

private:
    std::vector<double> probabilities_;
    std::vector<double> cumulative_;
    Rng rng_;
};

/// First draw of an ExtensionSampler over the set's probabilities.
std::size_t sample_extension(const CutState& s, const AlternativeSet& alts, std::uint64_t seed);

/// Records the candidate as a fact: absorbs its backward links and opens its
/// forward links. The cut must be valid and contain the bra's link sources;
/// the new event extends it. Throws ZeroProbabilityEvent.
std::string realize(History& h, const Cut& cut, const CandidateEvent& e);

/// Realizes every event of an alternative in list order; returns the new ids.
std::vector<std::string> realize_all(History& h, const Cut& cut, const Alternative& alt);

}  // namespace qevent

#endif  // QEVENT_DYNAMICS_HPP
