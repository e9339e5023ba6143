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

#ifndef QEVENT_LATTICE_HPP
#define QEVENT_LATTICE_HPP

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "qevent/tensor.hpp"

namespace qevent {

/// Periodic 1-D lattice: sites x_j = j L / N and momenta
/// p_i = (i - N/2) 2 pi hbar / L for i in [0, N).
struct PeriodicGrid {
    std::size_t sites = 0;
    double box_length = 1.0;
    double hbar = 1.0;

    double dx() const noexcept { return box_length / static_cast<double>(sites); }
    double dp() const noexcept { return 2.0 * std::numbers::pi * hbar / box_length; }
    double position(std::size_t j) const noexcept { return static_cast<double>(j) * dx(); }
    double momentum(std::size_t i) const noexcept {
        return (static_cast<double>(i) - static_cast<double>(sites / 2)) * dp();
    }
    /// Signed lattice index k = i - N/2 of momentum slot i.
    long momentum_index(std::size_t i) const noexcept {
        return static_cast<long>(i) - static_cast<long>(sites / 2);
    }
    /// Separation x - c folded into [-L/2, L/2).
    double wrapped_offset(double x, double c) const noexcept;
};

/// Unnormalized DFT: out[m] = sum_j in[j] exp(sign * 2 pi i m j / N), sign = +-1.
/// Backed by FFTW.
std::vector<Complex> dft(std::span<const Complex> in, int sign);

}  // namespace qevent

#endif  // QEVENT_LATTICE_HPP
