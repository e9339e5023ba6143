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

#ifndef QEVENT_ENSEMBLE_HPP
#define QEVENT_ENSEMBLE_HPP

#include <optional>
#include <span>
#include <vector>

#include "qevent/lattice.hpp"

// Two decompositions of one thermal ensemble of a free particle on a periodic
// 1-D lattice: momentum eigenstates with Boltzmann weights, and a uniform
// mixture of minimal Gaussian packets over all lattice positions (and
// optionally over preparation times).
//
// Packets are psi_c(x) ~ exp(-(x - c)^2 / 4 sigma^2), so sigma is the position
// standard deviation of |psi|^2. Momentum amplitudes use the standard sign,
// phi(p) = N^-1/2 sum_j psi(x_j) exp(-i p x_j / hbar). Free evolution over a
// time t multiplies phi(p) by exp(-i p^2 t / 2 m hbar).
//
// Mixtures are accumulated centers-outer, times-inner, in ascending order.

namespace qevent::thermal {

namespace cgs {
inline constexpr double kHbar = 1.054571817e-27;       // erg s
inline constexpr double kBoltzmann = 1.380649e-16;     // erg / K
inline constexpr double kProtonMass = 1.67262192369e-24;  // g
}  // namespace cgs

struct LatticeModel {
    std::size_t sites = 256;
    double box_length = 40.0;
    double mass = 1.0;
    double hbar = 1.0;
    double beta = 1.0;

    /// Throws InvalidArgument on non-positive parameters or fewer than 2 sites.
    void check() const;
    PeriodicGrid grid() const { return PeriodicGrid{sites, box_length, hbar}; }
};

struct MomentumDensity {
    std::vector<double> diagonal;
    /// Row-major N x N density matrix rho(p_a, p_b), when retained.
    std::optional<std::vector<Complex>> matrix;

    double trace() const;
    /// Largest |rho(p_a, p_b)| over a != b; 0 when no matrix is retained.
    double max_off_diagonal() const;
};

struct PacketFamily {
    double sigma = 1.0;
    std::vector<double> centers;
    std::vector<double> times{0.0};

    /// Centers on every lattice site; `time_samples` preparation times spaced by `time_step`.
    static PacketFamily uniform(const LatticeModel& model, double sigma, std::size_t time_samples = 1,
                                double time_step = 0.0);
};

MomentumDensity thermal_density(const LatticeModel& model);

/// Unit-norm momentum amplitudes of one packet, indexed like the momentum grid.
std::vector<Complex> packet_momentum_amplitudes(const LatticeModel& model, double sigma, double center,
                                                double time = 0.0);

MomentumDensity packet_mixture_density(const LatticeModel& model, const PacketFamily& family,
                                       bool keep_matrix = true);

struct WidthMatch {
    double sigma_star = 0.0;
    /// Fitted coefficient b of log w(p) = const - b p^2 on the thermal weights.
    double exponent = 0.0;
    double residual_sup_norm = 0.0;
};

/// Reads the Gaussian exponent off the thermal weights, converts it to the
/// packet width with the same momentum envelope (2 sigma^2 / hbar^2 = b), and
/// reports the sup-norm gap between the two diagonals. Throws NoMatch if the
/// gap exceeds `tolerance`.
WidthMatch matching_width(const LatticeModel& model, double tolerance = 1e-8);

/// hbar/2 * sqrt(beta/m): the closed form of the matched width.
double analytic_matching_width(const LatticeModel& model);

/// h * sqrt(beta / 2m), the order-of-magnitude packet size quoted for this ambiguity.
double quoted_packet_size(const LatticeModel& model);

/// |<psi_a|psi_b>| of two lattice packets.
double packet_overlap(const LatticeModel& model, double sigma, double center_a, double center_b);

struct OverlapReport {
    struct Pair {
        double center_a = 0.0;
        double center_b = 0.0;
        double separation = 0.0;
        double overlap = 0.0;
    };
    std::vector<Pair> neighbors;
    double min_overlap = 0.0;
    double max_overlap = 0.0;
};

/// Overlaps of consecutive centers of the family (cyclically). Needs >= 2 centers.
OverlapReport overlap_report(const LatticeModel& model, const PacketFamily& family);

/// Expectation of f(p_i) under a diagonal.
double expectation(const MomentumDensity& rho, std::span<const double> f);

/// Lattice model for a mass at temperature T in CGS units, with a box of
/// `box_in_widths` matched widths.
LatticeModel physical_model(double mass_g, double temperature_k, std::size_t sites = 256,
                            double box_in_widths = 80.0);

}  // namespace qevent::thermal

#endif  // QEVENT_ENSEMBLE_HPP
