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

#ifndef QEVENT_EPR_HPP
#define QEVENT_EPR_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "qevent/dynamics.hpp"

namespace qevent::epr {

/// Unit 3-vector; construction throws InvalidArgument off the unit sphere.
class Direction {
public:
    Direction(double x, double y, double z);

    /// Direction in the x-z plane at `degrees` from +z towards +x.
    static Direction in_plane(double degrees);

    double x() const noexcept { return v_[0]; }
    double y() const noexcept { return v_[1]; }
    double z() const noexcept { return v_[2]; }
    double dot(const Direction& o) const noexcept;

private:
    std::array<double, 3> v_;
};

/// Amplitudes of the +1 / -1 eigenvectors of e.sigma in the sigma_z basis.
std::array<Complex, 2> spin_up_along(const Direction& e);
std::array<Complex, 2> spin_down_along(const Direction& e);

/// Outcome pairs, in the fixed order (++, +-, -+, --).
using JointDistribution = std::array<double, 4>;

struct EprSetup {
    Direction e1;
    Direction e2;
    History history;
    Cut past;
    AlternativeSet alternatives;
};

/// Events 1, 2 (apparatus settings), 3 (singlet decay) and the four
/// outcome-pair alternatives built from events 4+- and 5+-.
EprSetup build_epr(const Direction& e1, const Direction& e2);

JointDistribution joint_distribution(const EprSetup& setup);

/// P(++) + P(--) - P(+-) - P(-+).
double correlation(const EprSetup& setup);
double correlation(const Direction& a, const Direction& b);

/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
double chsh(const Direction& a, const Direction& a_prime, const Direction& b, const Direction& b_prime);

/// Local hidden states: a distribution over deterministic per-side outcome
/// assignments (A(a), A(a'), B(b), B(b')), each +-1.
struct ClassicalStrategy {
    struct Deterministic {
        int a = 1, a_prime = 1, b = 1, b_prime = 1;
    };
    std::vector<Deterministic> strategies;
    std::vector<double> weights;

    /// Throws InvalidArgument if weights are negative or do not sum to 1.
    void check() const;
    double chsh_value() const;
};

/// Maximum |S| over the 16 deterministic strategies. When a == a' (or b == b')
/// a strategy must give equal outcomes on the coinciding settings.
double best_classical(const Direction& a, const Direction& a_prime, const Direction& b,
                      const Direction& b_prime);

struct MonteCarloCounts {
    std::array<std::uint64_t, 4> counts{};
    std::uint64_t total = 0;
};

/// Samples `runs` outcome pairs split over `replicas` independently seeded streams.
MonteCarloCounts sample_outcomes(const EprSetup& setup, std::uint64_t runs, std::uint64_t seed,
                                 unsigned replicas = 1);

}  // namespace qevent::epr

#endif  // QEVENT_EPR_HPP
