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

#ifndef QEVENT_QUASILOCAL_HPP
#define QEVENT_QUASILOCAL_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "qevent/lattice.hpp"

// Scattering kernel on the total-momentum variable of a periodic 1-D lattice.
//
// Translation acts on momentum amplitudes as (U(x) psi)(P) = exp(i P x / hbar) psi(P),
// so the translate U(x) T U(x)^-1 has kernel tau(P', P) exp(i (P' - P) x / hbar)
// and is centered at +x. A packet centered at c accordingly carries the phase
// exp(+i P c / hbar); see position_to_momentum().
//
// Every box integral or cell piece of a translated kernel has the form
// tau(P', P) * profile(P' - P), where the profile is a lattice Fourier sum
// over x. TransferOperator stores that factorization instead of a dense matrix.

namespace qevent::quasilocal {

using MomentumGrid = PeriodicGrid;

/// Throws InvalidArgument unless sites >= 16, even, and box/hbar positive.
void check_grid(const MomentumGrid& grid);

/// Smooth kernel tau(P', P), evaluated on demand.
class TKernel {
public:
    using Function = std::function<Complex(double p_out, double p_in)>;

    TKernel(MomentumGrid grid, Function tau, double smoothness_scale);

    const MomentumGrid& grid() const noexcept { return grid_; }
    double smoothness_scale() const noexcept { return scale_; }
    Complex value(double p_out, double p_in) const { return tau_(p_out, p_in); }
    Complex at(std::size_t out, std::size_t in) const;
    /// Row-major N x N matrix.
    std::vector<Complex> dense() const;

private:
    MomentumGrid grid_;
    Function tau_;
    double scale_;
};

/// tau(P', P) = exp(-(P'^2 + P^2) / 4 S^2) exp(i twist P' P / S^2).
TKernel gaussian_kernel(const MomentumGrid& grid, double scale, double twist = 0.3);

/// Sum of a few Gaussian bumps of width `scale` with seeded random complex
/// weights and centers; smooth in both arguments.
TKernel random_smooth_kernel(const MomentumGrid& grid, double scale, std::uint64_t seed);

/// Kernel of U(x) T U(x)^-1. Throws InvalidArgument when |x| exceeds the box.
TKernel translate_kernel(const TKernel& kernel, double x);

class TransferOperator {
public:
    /// `profile[m]` multiplies entries with (out - in) = m mod N.
    TransferOperator(std::shared_ptr<const TKernel> kernel, std::vector<Complex> profile);

    const TKernel& kernel() const noexcept { return *kernel_; }
    const std::vector<Complex>& profile() const noexcept { return profile_; }
    std::size_t size() const noexcept { return profile_.size(); }

    Complex at(std::size_t out, std::size_t in) const;
    std::vector<Complex> dense() const;
    std::vector<Complex> apply(std::span<const Complex> psi) const;

private:
    std::shared_ptr<const TKernel> kernel_;
    std::vector<Complex> profile_;
};

/// dx * sum_j f(x_j) exp(i q_m x_j / hbar), indexed by m = 0..N-1.
std::vector<Complex> transfer_profile(const MomentumGrid& grid, std::span<const double> f);

/// Sum over all lattice translates times dx: the momentum-conserving operator.
TransferOperator integrate_over_box(const TKernel& kernel);

/// Smooth partition of unity over the periodic box.
class CellPartition {
public:
    /// `count` cells of width a = L / count starting at `offset`; each is the
    /// indicator of [offset + k a, offset + (k+1) a) convolved with a Gaussian
    /// of width s = smoothing_ratio * a (sharp when 0).
    static CellPartition smoothed(const MomentumGrid& grid, std::size_t count, double smoothing_ratio,
                                  double offset = 0.0);

    /// Arbitrary cell functions; throws PartitionNotUnity unless they sum to 1
    /// at every site within 1e-12.
    static CellPartition from_functions(const MomentumGrid& grid, std::vector<std::vector<double>> cells,
                                        double cell_width);

    const MomentumGrid& grid() const noexcept { return grid_; }
    const std::vector<std::vector<double>>& cells() const noexcept { return cells_; }
    std::size_t size() const noexcept { return cells_.size(); }
    double cell_width() const noexcept { return width_; }
    double smoothing() const noexcept { return smoothing_; }
    double offset() const noexcept { return offset_; }

    /// max_j |sum_k g_k(x_j) - 1|.
    double unity_defect() const;
    /// Largest |g_k| outside cell k widened by 8 smoothing widths per side.
    /// Only meaningful for smoothed() partitions.
    double max_leakage() const;

private:
    MomentumGrid grid_;
    std::vector<std::vector<double>> cells_;
    double width_ = 0.0;
    double smoothing_ = 0.0;
    double offset_ = 0.0;
};

/// One T_k per cell. Throws PartitionNotUnity if the partition's defect exceeds 1e-12.
std::vector<TransferOperator> cell_decompose(const TKernel& kernel, const CellPartition& cells);

struct BranchState {
    std::size_t cell = 0;
    std::vector<Complex> psi;
    std::shared_ptr<const TransferOperator> op;
};

struct BranchReport {
    std::vector<BranchState> branches;
    std::vector<Complex> psi_out;
    /// ||Psi_k||^2 / sum_k ||Psi_k||^2.
    std::vector<double> probabilities;
    /// | ||sum Psi_k||^2 - sum ||Psi_k||^2 |.
    double coherence_defect = 0.0;
};

/// Psi_k = T_k psi_in for every cell. `psi_in` must be unit norm (1e-12).
/// Input columns with |psi_in| <= cutoff * max|psi_in| are skipped (0 keeps all).
BranchReport branch_states(const TKernel& kernel, const CellPartition& cells, std::span<const Complex> psi_in,
                           double cutoff = 0.0);

/// Standard deviation of the momentum transfer P' - P under the weights
/// |tau(P',P) profile(P'-P) psi_in(P)|^2 of the branch's operator. Transfers
/// are lattice-wrapped into [-N/2, N/2). Throws ZeroNormBranch.
double momentum_balance_spread(const BranchState& branch, std::span<const Complex> psi_in, double cutoff = 0.0);

/// Momentum amplitudes of a lattice vector, with this module's sign.
std::vector<Complex> position_to_momentum(const MomentumGrid& grid, std::span<const Complex> psi_x);

/// Unit Gaussian packet exp(-(x - c)^2 / 4 w^2) in momentum amplitudes.
std::vector<Complex> gaussian_packet(const MomentumGrid& grid, double center, double width);

/// Multiplies momentum amplitudes by exp(i P x / hbar).
std::vector<Complex> translate_state(const MomentumGrid& grid, std::span<const Complex> psi, double x);

struct SpreadRow {
    std::size_t cells = 0;
    double cell_width = 0.0;
    double spread = 0.0;
    double spread_times_width_over_h = 0.0;
    double coherence_defect = 0.0;
};

struct SpreadSweep {
    std::vector<SpreadRow> rows;
    double loglog_slope = 0.0;
};

struct SweepConfig {
    MomentumGrid grid{4096, 1.0, 1.0};
    /// 0 selects a quarter of the largest lattice momentum.
    double tau_scale = 0.0;
    double smoothing_ratio = 1.0 / 12.0;
    /// Widths to visit; each is rounded to L / round(L / a).
    std::vector<double> cell_widths;
    /// Input packet: center as a fraction of the box, and position width
    /// (0 selects L / 16).
    double packet_center = 0.5;
    double packet_width = 0.0;
};

/// Default widths: two decades, L/2 down to L/200.
std::vector<double> default_cell_widths(double box_length);

/// Delta P of the most probable branch for each width, and the least-squares
/// slope of log Delta P against log a.
SpreadSweep spread_sweep(const SweepConfig& config);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace qevent::quasilocal

#endif  // QEVENT_QUASILOCAL_HPP
