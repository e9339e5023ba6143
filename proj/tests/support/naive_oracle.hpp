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

#ifndef QEVENT_TESTS_NAIVE_ORACLE_HPP
#define QEVENT_TESTS_NAIVE_ORACLE_HPP

// Brute-force reference for the event probability rules. Works on raw
// recipes (labels as listed, row-major amplitudes) and touches no library
// code: every contraction is a loop over full multi-indices.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

struct RawFactor {
    std::string link;
    std::size_t dim = 1;
};

struct RawVector {
    std::vector<RawFactor> labels;
    std::vector<Complex> amps;
};

/// Initial events use `vec`; interior ones absorb `bra` (one factor per
/// link), multiply by `c`, and emit `vec`.
struct RawEvent {
    std::string id;
    bool initial = true;
    RawVector vec;
    std::vector<RawVector> bra;
    Complex c{1.0, 0.0};
};

inline std::size_t volume(const std::vector<RawFactor>& labels) {
    std::size_t n = 1;
    for (const auto& f : labels) n *= f.dim;
    return n;
}

inline std::vector<std::size_t> decode(std::size_t flat, const std::vector<RawFactor>& labels) {
    std::vector<std::size_t> idx(labels.size());
    for (std::size_t i = labels.size(); i-- > 0;) {
        idx[i] = flat % labels[i].dim;
        flat /= labels[i].dim;
    }
    return idx;
}

inline std::size_t encode(const std::vector<std::size_t>& idx, const std::vector<RawFactor>& labels) {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) flat = flat * labels[i].dim + idx[i];
    return flat;
}

inline double norm2(const RawVector& v) {
    double s = 0.0;
    for (const auto& a : v.amps) s += std::norm(a);
    return s;
}

inline RawVector kron(const RawVector& u, const RawVector& v) {
    RawVector out;
    out.labels = u.labels;
    out.labels.insert(out.labels.end(), v.labels.begin(), v.labels.end());
    for (const auto& a : u.amps) {
        for (const auto& b : v.amps) out.amps.push_back(a * b);
    }
    return out;
}

/// Amplitude of psi at the assignment link -> index.
inline Complex value_at(const RawVector& psi, const std::map<std::string, std::size_t>& assignment) {
    std::vector<std::size_t> idx;
    for (const auto& f : psi.labels) idx.push_back(assignment.at(f.link));
    return psi.amps[encode(idx, psi.labels)];
}

/// c |ket> <bra| psi, summing explicitly over every index of psi.
inline RawVector apply(const RawVector& psi, const std::vector<RawVector>& bra, Complex c, const RawVector& ket) {
    std::set<std::string> absorbed;
    for (const auto& f : bra) absorbed.insert(f.labels.at(0).link);
    RawVector rest;
    for (const auto& f : psi.labels) {
        if (!absorbed.count(f.link)) rest.labels.push_back(f);
    }
    if (rest.labels.size() + absorbed.size() != psi.labels.size()) throw std::logic_error("bra link not in state");
    rest.amps.assign(volume(rest.labels), Complex{});
    for (std::size_t flat = 0; flat < psi.amps.size(); ++flat) {
        const auto idx = decode(flat, psi.labels);
        Complex w = psi.amps[flat];
        std::vector<std::size_t> rest_idx;
        for (std::size_t i = 0; i < psi.labels.size(); ++i) {
            const auto& link = psi.labels[i].link;
            if (!absorbed.count(link)) {
                rest_idx.push_back(idx[i]);
                continue;
            }
            for (const auto& f : bra) {
                if (f.labels[0].link == link) w *= std::conj(f.amps[idx[i]]);
            }
        }
        rest.amps[encode(rest_idx, rest.labels)] += w;
    }
    RawVector scaled = kron(rest, ket);
    for (auto& a : scaled.amps) a *= c;
    return scaled;
}

inline RawVector normalized(RawVector v) {
    const double n = std::sqrt(norm2(v));
    for (auto& a : v.amps) a /= n;
    return v;
}

/// State of a cut: events in recipe order (which must be topological),
/// renormalized after every interior event.
inline RawVector cut_state(const std::vector<RawEvent>& recipe, const std::set<std::string>& cut) {
    RawVector psi{{}, {Complex{1.0, 0.0}}};
    for (const auto& e : recipe) {
        if (!cut.count(e.id)) continue;
        psi = e.initial ? kron(psi, e.vec) : normalized(apply(psi, e.bra, e.c, e.vec));
    }
    return psi;
}

/// Squared norm after applying every candidate in order.
inline double joint_probability(const RawVector& state, const std::vector<RawEvent>& candidates) {
    RawVector psi = state;
    for (const auto& e : candidates) psi = apply(psi, e.bra, e.c, e.vec);
    return norm2(psi);
}

}  // namespace oracle

#endif  // QEVENT_TESTS_NAIVE_ORACLE_HPP
