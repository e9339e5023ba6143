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

#include "qevent/quasilocal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qevent/error.hpp"
#include "qevent/rng.hpp"

namespace qevent::quasilocal {

namespace {

constexpr double kUnityTolerance = 1e-12;
constexpr double kSupportMargin = 8.0;  // smoothing widths

std::size_t wrap_index(long m, std::size_t n) {
    const long nn = static_cast<long>(n);
    return static_cast<std::size_t>(((m % nn) + nn) % nn);
}

// Lattice-wrapped transfer in [-N/2, N/2).
long wrapped_transfer(std::size_t out, std::size_t in, std::size_t n) {
    long m = static_cast<long>(out) - static_cast<long>(in);
    const long half = static_cast<long>(n / 2);
    const long nn = static_cast<long>(n);
    if (m >= half) m -= nn;
    if (m < -half) m += nn;
    return m;
}

std::vector<std::size_t> support_of(std::span<const Complex> psi, double cutoff) {
    double peak = 0.0;
    for (const auto& v : psi) peak = std::max(peak, std::abs(v));
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (cutoff <= 0.0 || std::abs(psi[i]) > cutoff * peak) support.push_back(i);
    }
    return support;
}

double norm2(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return s;
}

double smoothed_step(double y, double s) {
    if (s == 0.0) return y >= 0.0 ? 1.0 : 0.0;
    return 0.5 * (1.0 + std::erf(y / (std::numbers::sqrt2 * s)));
}

}  // namespace

void check_grid(const MomentumGrid& grid) {
    if (grid.sites < 16 || grid.sites % 2 != 0) {
        throw Error(ErrorCode::InvalidArgument, "momentum grid needs an even number of sites >= 16");
    }
    if (!(grid.box_length > 0.0) || !(grid.hbar > 0.0) || !std::isfinite(grid.box_length)) {
        throw Error(ErrorCode::InvalidArgument, "box length and hbar must be positive");
    }
}

TKernel::TKernel(MomentumGrid grid, Function tau, double smoothness_scale)
    : grid_(grid), tau_(std::move(tau)), scale_(smoothness_scale) {
    check_grid(grid_);
    if (!tau_) throw Error(ErrorCode::InvalidArgument, "kernel function is empty");
}

Complex TKernel::at(std::size_t out, std::size_t in) const {
    return tau_(grid_.momentum(out), grid_.momentum(in));
}

std::vector<Complex> TKernel::dense() const {
    const std::size_t n = grid_.sites;
    std::vector<Complex> m(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) m[a * n + b] = at(a, b);
    }
    return m;
}

TKernel gaussian_kernel(const MomentumGrid& grid, double scale, double twist) {
    if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel scale must be positive");
    const double s2 = scale * scale;
    return TKernel(
        grid,
        [s2, twist](double po, double pi) {
            return std::polar(std::exp(-(po * po + pi * pi) / (4.0 * s2)), twist * po * pi / s2);
        },
        scale);
}

TKernel random_smooth_kernel(const MomentumGrid& grid, double scale, std::uint64_t seed) {
    if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel scale must be positive");
    struct Bump {
        Complex weight;
        double center_out, center_in;
    };
    Rng rng(seed);
    std::vector<Bump> bumps(4);
    for (auto& b : bumps) {
        b.weight = Complex{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
        b.center_out = (2.0 * rng.uniform() - 1.0) * scale;
        b.center_in = (2.0 * rng.uniform() - 1.0) * scale;
    }
    const double s2 = scale * scale;
    return TKernel(
        grid,
        [bumps, s2](double po, double pi) {
            Complex v{};
            for (const auto& b : bumps) {
                const double d = (po - b.center_out) * (po - b.center_out) + (pi - b.center_in) * (pi - b.center_in);
                v += b.weight * std::exp(-d / (4.0 * s2));
            }
            return v;
        },
        scale);
}

TKernel translate_kernel(const TKernel& kernel, double x) {
    const auto& grid = kernel.grid();
    if (!(std::abs(x) <= grid.box_length)) {
        throw Error(ErrorCode::InvalidArgument, "translation lies outside the box");
    }
    const double hbar = grid.hbar;
    auto parent = std::make_shared<const TKernel>(kernel);
    auto fn = [parent, x, hbar](double po, double pi) {
        return parent->value(po, pi) * std::polar(1.0, (po - pi) * x / hbar);
    };
    return TKernel(grid, fn, kernel.smoothness_scale());
}

TransferOperator::TransferOperator(std::shared_ptr<const TKernel> kernel, std::vector<Complex> profile)
    : kernel_(std::move(kernel)), profile_(std::move(profile)) {
    if (!kernel_ || profile_.size() != kernel_->grid().sites) {
        throw Error(ErrorCode::DimensionMismatch, "transfer profile does not match the grid");
    }
}

Complex TransferOperator::at(std::size_t out, std::size_t in) const {
    return kernel_->at(out, in) * profile_[wrap_index(static_cast<long>(out) - static_cast<long>(in), size())];
}

std::vector<Complex> TransferOperator::dense() const {
    const std::size_t n = size();
    std::vector<Complex> m(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) m[a * n + b] = at(a, b);
    }
    return m;
}

std::vector<Complex> TransferOperator::apply(std::span<const Complex> psi) const {
    if (psi.size() != size()) throw Error(ErrorCode::DimensionMismatch, "state does not match the grid");
    std::vector<Complex> out(size());
    for (std::size_t a = 0; a < size(); ++a) {
        Complex s{};
        for (std::size_t b = 0; b < size(); ++b) s += at(a, b) * psi[b];
        out[a] = s;
    }
    return out;
}

std::vector<Complex> transfer_profile(const MomentumGrid& grid, std::span<const double> f) {
    if (f.size() != grid.sites) throw Error(ErrorCode::DimensionMismatch, "cell function does not match the grid");
    std::vector<Complex> values(f.begin(), f.end());
    auto profile = dft(values, +1);
    for (auto& v : profile) v *= grid.dx();
    return profile;
}

TransferOperator integrate_over_box(const TKernel& kernel) {
    const std::vector<double> ones(kernel.grid().sites, 1.0);
    return TransferOperator(std::make_shared<const TKernel>(kernel), transfer_profile(kernel.grid(), ones));
}

CellPartition CellPartition::smoothed(const MomentumGrid& grid, std::size_t count, double smoothing_ratio,
                                      double offset) {
    check_grid(grid);
    if (count == 0) throw Error(ErrorCode::InvalidArgument, "partition needs at least one cell");
    if (!(smoothing_ratio >= 0.0)) throw Error(ErrorCode::InvalidArgument, "smoothing ratio must be >= 0");
    CellPartition p;
    p.grid_ = grid;
    p.width_ = grid.box_length / static_cast<double>(count);
    p.smoothing_ = smoothing_ratio * p.width_;
    p.offset_ = offset;
    const double box = grid.box_length;
    p.cells_.assign(count, std::vector<double>(grid.sites, 0.0));
    for (std::size_t k = 0; k < count; ++k) {
        const double left = offset + static_cast<double>(k) * p.width_;
        const double right = left + p.width_;
        for (std::size_t j = 0; j < grid.sites; ++j) {
            const double x = grid.position(j);
            double g = 0.0;
            for (int m = -2; m <= 2; ++m) {
                g += smoothed_step(x - left - m * box, p.smoothing_) - smoothed_step(x - right - m * box, p.smoothing_);
            }
            p.cells_[k][j] = g;
        }
    }
    return p;
}

CellPartition CellPartition::from_functions(const MomentumGrid& grid, std::vector<std::vector<double>> cells,
                                            double cell_width) {
    check_grid(grid);
    CellPartition p;
    p.grid_ = grid;
    p.cells_ = std::move(cells);
    p.width_ = cell_width;
    for (const auto& c : p.cells_) {
        if (c.size() != grid.sites) throw Error(ErrorCode::DimensionMismatch, "cell function size mismatch");
    }
    if (p.cells_.empty() || p.unity_defect() > kUnityTolerance) {
        throw Error(ErrorCode::PartitionNotUnity, "cell functions do not sum to one");
    }
    return p;
}

double CellPartition::unity_defect() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < grid_.sites; ++j) {
        double s = 0.0;
        for (const auto& c : cells_) s += c[j];
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

double CellPartition::max_leakage() const {
    const double half_reach = 0.5 * width_ + kSupportMargin * smoothing_;
    double worst = 0.0;
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        const double mid = offset_ + (static_cast<double>(k) + 0.5) * width_;
        for (std::size_t j = 0; j < grid_.sites; ++j) {
            if (std::abs(grid_.wrapped_offset(grid_.position(j), mid)) > half_reach) {
                worst = std::max(worst, std::abs(cells_[k][j]));
            }
        }
    }
    return worst;
}

std::vector<TransferOperator> cell_decompose(const TKernel& kernel, const CellPartition& cells) {
    if (cells.unity_defect() > kUnityTolerance) {
        throw Error(ErrorCode::PartitionNotUnity, "cell functions do not sum to one");
    }
    if (cells.grid().sites != kernel.grid().sites) {
        throw Error(ErrorCode::DimensionMismatch, "partition and kernel use different grids");
    }
    auto shared = std::make_shared<const TKernel>(kernel);
    std::vector<TransferOperator> out;
    out.reserve(cells.size());
    for (const auto& g : cells.cells()) out.emplace_back(shared, transfer_profile(kernel.grid(), g));
    return out;
}

BranchReport branch_states(const TKernel& kernel, const CellPartition& cells, std::span<const Complex> psi_in,
                           double cutoff) {
    const std::size_t n = kernel.grid().sites;
    if (psi_in.size() != n) throw Error(ErrorCode::DimensionMismatch, "input state does not match the grid");
    if (std::abs(norm2(psi_in) - 1.0) > kUnitTolerance) {
        throw Error(ErrorCode::NonUnitVector, "input state is not unit norm");
    }
    const auto ops = cell_decompose(kernel, cells);
    const auto total = integrate_over_box(kernel);
    const auto support = support_of(psi_in, cutoff);

    BranchReport report;
    report.psi_out.assign(n, Complex{});
    std::vector<std::vector<Complex>> branch(ops.size(), std::vector<Complex>(n));
    std::vector<Complex> row(support.size());
    for (std::size_t out = 0; out < n; ++out) {
        for (std::size_t s = 0; s < support.size(); ++s) row[s] = kernel.at(out, support[s]) * psi_in[support[s]];
        for (std::size_t k = 0; k < ops.size(); ++k) {
            const auto& profile = ops[k].profile();
            Complex acc{};
            for (std::size_t s = 0; s < support.size(); ++s) {
                acc += row[s] * profile[wrap_index(static_cast<long>(out) - static_cast<long>(support[s]), n)];
            }
            branch[k][out] = acc;
        }
        Complex acc{};
        for (std::size_t s = 0; s < support.size(); ++s) {
            acc += row[s] * total.profile()[wrap_index(static_cast<long>(out) - static_cast<long>(support[s]), n)];
        }
        report.psi_out[out] = acc;
    }

    double sum_norms = 0.0;
    std::vector<Complex> coherent(n);
    for (std::size_t k = 0; k < ops.size(); ++k) {
        sum_norms += norm2(branch[k]);
        for (std::size_t i = 0; i < n; ++i) coherent[i] += branch[k][i];
    }
    report.coherence_defect = std::abs(norm2(coherent) - sum_norms);
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const double w = norm2(branch[k]);
        report.probabilities.push_back(sum_norms > 0.0 ? w / sum_norms : 0.0);
        report.branches.push_back(
            BranchState{k, std::move(branch[k]), std::make_shared<const TransferOperator>(ops[k])});
    }
    return report;
}

double momentum_balance_spread(const BranchState& branch, std::span<const Complex> psi_in, double cutoff) {
    if (!branch.op) throw Error(ErrorCode::InvalidArgument, "branch carries no operator");
    const auto& op = *branch.op;
    const std::size_t n = op.size();
    if (psi_in.size() != n) throw Error(ErrorCode::DimensionMismatch, "input state does not match the grid");
    if (!(norm2(branch.psi) > 0.0)) throw Error(ErrorCode::ZeroNormBranch, "branch has zero norm");
    const auto support = support_of(psi_in, cutoff);
    double z = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t out = 0; out < n; ++out) {
        for (std::size_t in : support) {
            const double w = std::norm(op.at(out, in) * psi_in[in]);
            const double q = static_cast<double>(wrapped_transfer(out, in, n));
            z += w;
            m1 += w * q;
            m2 += w * q * q;
        }
    }
    if (!(z > 0.0)) throw Error(ErrorCode::ZeroNormBranch, "branch transfer distribution is empty");
    const double mean = m1 / z;
    const double var = std::max(0.0, m2 / z - mean * mean);
    return std::sqrt(var) * op.kernel().grid().dp();
}

std::vector<Complex> position_to_momentum(const MomentumGrid& grid, std::span<const Complex> psi_x) {
    if (psi_x.size() != grid.sites) throw Error(ErrorCode::DimensionMismatch, "state does not match the grid");
    const auto spectrum = dft(psi_x, +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid.sites));
    std::vector<Complex> out(grid.sites);
    for (std::size_t i = 0; i < grid.sites; ++i) {
        out[i] = spectrum[wrap_index(grid.momentum_index(i), grid.sites)] * scale;
    }
    return out;
}

std::vector<Complex> gaussian_packet(const MomentumGrid& grid, double center, double width) {
    if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "packet width must be positive");
    std::vector<Complex> psi(grid.sites);
    double n2 = 0.0;
    for (std::size_t j = 0; j < grid.sites; ++j) {
        const double d = grid.wrapped_offset(grid.position(j), center);
        const double a = std::exp(-d * d / (4.0 * width * width));
        psi[j] = a;
        n2 += a * a;
    }
    for (auto& v : psi) v /= std::sqrt(n2);
    return position_to_momentum(grid, psi);
}

std::vector<Complex> translate_state(const MomentumGrid& grid, std::span<const Complex> psi, double x) {
    if (psi.size() != grid.sites) throw Error(ErrorCode::DimensionMismatch, "state does not match the grid");
    std::vector<Complex> out(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) out[i] = psi[i] * std::polar(1.0, grid.momentum(i) * x / grid.hbar);
    return out;
}

std::vector<double> default_cell_widths(double box_length) {
    std::vector<double> widths;
    for (int count : {2, 3, 4, 6, 8, 12, 16, 25, 32, 50, 64, 100, 128, 200}) widths.push_back(box_length / count);
    return widths;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "slope needs >= 2 points");
    double s1 = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "log of non-positive value");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        s1 += 1;
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (s1 * sxy - sx * sy) / (s1 * sxx - sx * sx);
}

SpreadSweep spread_sweep(const SweepConfig& config) {
    const auto& grid = config.grid;
    check_grid(grid);
    const double p_max = grid.dp() * static_cast<double>(grid.sites / 2);
    const double scale = config.tau_scale > 0.0 ? config.tau_scale : p_max / 4.0;
    const auto kernel = gaussian_kernel(grid, scale);
    const double width = config.packet_width > 0.0 ? config.packet_width : grid.box_length / 16.0;
    const auto psi = gaussian_packet(grid, config.packet_center * grid.box_length, width);
    const auto widths = config.cell_widths.empty() ? default_cell_widths(grid.box_length) : config.cell_widths;
    const double h = 2.0 * std::numbers::pi * grid.hbar;
    constexpr double kColumnCutoff = 1e-10;

    SpreadSweep sweep;
    std::vector<double> xs, ys;
    for (double a : widths) {
        if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "cell width must be positive");
        const auto count = static_cast<std::size_t>(std::max(1.0, std::round(grid.box_length / a)));
        const auto cells = CellPartition::smoothed(grid, count, config.smoothing_ratio);
        const auto report = branch_states(kernel, cells, psi, kColumnCutoff);
        const auto dominant = static_cast<std::size_t>(
            std::max_element(report.probabilities.begin(), report.probabilities.end()) - report.probabilities.begin());
        SpreadRow row;
        row.cells = count;
        row.cell_width = cells.cell_width();
        row.spread = momentum_balance_spread(report.branches[dominant], psi, kColumnCutoff);
        row.spread_times_width_over_h = row.spread * row.cell_width / h;
        row.coherence_defect = report.coherence_defect;
        if (count >= 2) {
            xs.push_back(row.cell_width);
            ys.push_back(row.spread);
        }
        sweep.rows.push_back(row);
    }
    sweep.loglog_slope = xs.size() >= 2 ? loglog_slope(xs, ys) : 0.0;
    return sweep;
}

}  // namespace qevent::quasilocal
