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

#include "qevent/epr.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include "qevent/error.hpp"

namespace qevent::epr {

namespace {

constexpr double kDirectionTolerance = 1e-12;

const SpaceType kSpin{"spin", 2};
const SpaceType kSetting{"setting", 1};
const SpaceType kRecord{"record", 1};

LabeledVector unit_on(const std::string& link, const SpaceType& space) {
    return single_factor(link, space, {Complex{1.0, 0.0}});
}

LabeledVector spinor_on(const std::string& link, const std::array<Complex, 2>& amps) {
    return single_factor(link, kSpin, {amps[0], amps[1]});
}

CandidateEvent outcome_event(const std::string& name, const std::string& particle_link,
                             const std::string& apparatus_link, const std::string& record_link,
                             const std::array<Complex, 2>& spinor) {
    CandidateEvent e;
    e.name = name;
    e.bra = ProductBra({spinor_on(particle_link, spinor), unit_on(apparatus_link, kSetting)});
    e.c = Complex{1.0, 0.0};
    e.ket = unit_on(record_link, kRecord);
    return e;
}

bool same_direction(const Direction& a, const Direction& b) {
    return std::abs(a.x() - b.x()) <= kDirectionTolerance && std::abs(a.y() - b.y()) <= kDirectionTolerance &&
           std::abs(a.z() - b.z()) <= kDirectionTolerance;
}

}  // namespace

Direction::Direction(double x, double y, double z) : v_{x, y, z} {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (!std::isfinite(n) || std::abs(n - 1.0) > kDirectionTolerance) {
        throw Error(ErrorCode::InvalidArgument, "direction is not a unit vector");
    }
}

Direction Direction::in_plane(double degrees) {
    const double t = degrees * std::numbers::pi / 180.0;
    return Direction(std::sin(t), 0.0, std::cos(t));
}

double Direction::dot(const Direction& o) const noexcept {
    return v_[0] * o.v_[0] + v_[1] * o.v_[1] + v_[2] * o.v_[2];
}

// e.sigma = [[z, x - iy], [x + iy, -z]]. Two charts keep the normalizer away
// from zero; they differ by a global phase only.
std::array<Complex, 2> spin_up_along(const Direction& e) {
    const Complex xy{e.x(), e.y()};
    std::array<Complex, 2> v = e.z() >= 0.0 ? std::array<Complex, 2>{Complex{1.0 + e.z(), 0.0}, xy}
                                            : std::array<Complex, 2>{std::conj(xy), Complex{1.0 - e.z(), 0.0}};
    const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    return {v[0] / n, v[1] / n};
}

std::array<Complex, 2> spin_down_along(const Direction& e) {
    const Complex xy{e.x(), e.y()};
    std::array<Complex, 2> v = e.z() >= 0.0 ? std::array<Complex, 2>{-std::conj(xy), Complex{1.0 + e.z(), 0.0}}
                                            : std::array<Complex, 2>{Complex{1.0 - e.z(), 0.0}, -xy};
    const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    return {v[0] / n, v[1] / n};
}

EprSetup build_epr(const Direction& e1, const Direction& e2) {
    History h;
    // Apparatus settings: one-dimensional links, the direction is metadata.
    h.add_initial_event(tensor_product(unit_on("gamma", kSetting), unit_on("1'", kSetting)), {}, "1");
    h.add_initial_event(tensor_product(unit_on("delta", kSetting), unit_on("2'", kSetting)), {}, "2");
    const double r = 1.0 / std::numbers::sqrt2;
    // (|up,down> - |down,up>) / sqrt2 over (alpha, beta).
    LabeledVector singlet({FactorLabel{"alpha", kSpin}, FactorLabel{"beta", kSpin}},
                          {Complex{0.0}, Complex{r}, Complex{-r}, Complex{0.0}});
    h.add_initial_event(singlet, {}, "3");

    const auto up1 = spin_up_along(e1), down1 = spin_down_along(e1);
    const auto up2 = spin_up_along(e2), down2 = spin_down_along(e2);
    const auto four_plus = outcome_event("4+", "alpha", "gamma", "out4", up1);
    const auto four_minus = outcome_event("4-", "alpha", "gamma", "out4", down1);
    const auto five_plus = outcome_event("5+", "beta", "delta", "out5", up2);
    const auto five_minus = outcome_event("5-", "beta", "delta", "out5", down2);

    AlternativeSet alts;
    alts.exhaustive = true;
    alts.alternatives = {
        Alternative{"++", {four_plus, five_plus}},
        Alternative{"+-", {four_plus, five_minus}},
        Alternative{"-+", {four_minus, five_plus}},
        Alternative{"--", {four_minus, five_minus}},
    };
    return EprSetup{e1, e2, std::move(h), Cut{{"1", "2", "3"}}, std::move(alts)};
}

JointDistribution joint_distribution(const EprSetup& setup) {
    const auto state = cut_state(setup.history, setup.past);
    const auto probs = alternative_probabilities(state, setup.alternatives);
    return {probs[0], probs[1], probs[2], probs[3]};
}

double correlation(const EprSetup& setup) {
    const auto p = joint_distribution(setup);
    // Round-off can push the sum a few ulps past +-1.
    return std::clamp(p[0] + p[3] - p[1] - p[2], -1.0, 1.0);
}

double correlation(const Direction& a, const Direction& b) { return correlation(build_epr(a, b)); }

double chsh(const Direction& a, const Direction& a_prime, const Direction& b, const Direction& b_prime) {
    return correlation(a, b) - correlation(a, b_prime) + correlation(a_prime, b) + correlation(a_prime, b_prime);
}

void ClassicalStrategy::check() const {
    if (strategies.size() != weights.size() || strategies.empty()) {
        throw Error(ErrorCode::InvalidArgument, "strategy/weight count mismatch");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw Error(ErrorCode::InvalidArgument, "negative strategy weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
        throw Error(ErrorCode::InvalidArgument, "strategy weights do not sum to 1");
    }
}

double ClassicalStrategy::chsh_value() const {
    check();
    double s = 0.0;
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        const auto& d = strategies[i];
        s += weights[i] * (d.a * d.b - d.a * d.b_prime + d.a_prime * d.b + d.a_prime * d.b_prime);
    }
    return s;
}

double best_classical(const Direction& a, const Direction& a_prime, const Direction& b,
                      const Direction& b_prime) {
    const bool tie_a = same_direction(a, a_prime);
    const bool tie_b = same_direction(b, b_prime);
    double best = 0.0;
    for (int bits = 0; bits < 16; ++bits) {
        ClassicalStrategy::Deterministic d;
        d.a = (bits & 1) ? 1 : -1;
        d.a_prime = (bits & 2) ? 1 : -1;
        d.b = (bits & 4) ? 1 : -1;
        d.b_prime = (bits & 8) ? 1 : -1;
        if ((tie_a && d.a != d.a_prime) || (tie_b && d.b != d.b_prime)) continue;
        const ClassicalStrategy s{{d}, {1.0}};
        best = std::max(best, std::abs(s.chsh_value()));
    }
    return best;
}

MonteCarloCounts sample_outcomes(const EprSetup& setup, std::uint64_t runs, std::uint64_t seed,
                                 unsigned replicas) {
    if (replicas == 0) throw Error(ErrorCode::InvalidArgument, "replicas must be >= 1");
    const auto probs = joint_distribution(setup);
    const std::vector<double> p(probs.begin(), probs.end());
    auto draw = [&](unsigned r) {
        const std::uint64_t share = runs / replicas + (r < runs % replicas ? 1 : 0);
        ExtensionSampler sampler(p, replica_seed(seed, r));
        std::array<std::uint64_t, 4> counts{};
        for (std::uint64_t i = 0; i < share; ++i) ++counts[sampler.next()];
        return counts;
    };
    std::vector<std::future<std::array<std::uint64_t, 4>>> jobs;
    for (unsigned r = 0; r < replicas; ++r) jobs.push_back(std::async(std::launch::async, draw, r));
    MonteCarloCounts out;
    for (auto& job : jobs) {
        const auto c = job.get();
        for (std::size_t k = 0; k < 4; ++k) out.counts[k] += c[k];
    }
    out.total = runs;
    return out;
}

}  // namespace qevent::epr
