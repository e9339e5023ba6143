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

#include "qevent/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qevent/error.hpp"

namespace qevent::thermal {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive and finite");
    }
}

std::vector<Complex> position_packet(const PeriodicGrid& grid, double sigma, double center) {
    std::vector<Complex> psi(grid.sites);
    double n2 = 0.0;
    for (std::size_t j = 0; j < grid.sites; ++j) {
        const double d = grid.wrapped_offset(grid.position(j), center);
        const double a = std::exp(-d * d / (4.0 * sigma * sigma));
        psi[j] = a;
        n2 += a * a;
    }
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& v : psi) v *= scale;
    return psi;
}

}  // namespace

void LatticeModel::check() const {
    if (sites < 2) throw Error(ErrorCode::InvalidArgument, "lattice needs at least 2 sites");
    require_positive(box_length, "box length");
    require_positive(mass, "mass");
    require_positive(hbar, "hbar");
    require_positive(beta, "beta");
}

double MomentumDensity::trace() const {
    double t = 0.0;
    for (double w : diagonal) t += w;
    return t;
}

double MomentumDensity::max_off_diagonal() const {
    if (!matrix) return 0.0;
    const std::size_t n = diagonal.size();
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a != b) worst = std::max(worst, std::abs((*matrix)[a * n + b]));
        }
    }
    return worst;
}

PacketFamily PacketFamily::uniform(const LatticeModel& model, double sigma, std::size_t time_samples,
                                   double time_step) {
    model.check();
    require_positive(sigma, "packet width");
    if (time_samples == 0) throw Error(ErrorCode::InvalidArgument, "need at least one preparation time");
    PacketFamily f;
    f.sigma = sigma;
    const auto grid = model.grid();
    for (std::size_t j = 0; j < grid.sites; ++j) f.centers.push_back(grid.position(j));
    f.times.clear();
    for (std::size_t t = 0; t < time_samples; ++t) f.times.push_back(static_cast<double>(t) * time_step);
    return f;
}

MomentumDensity thermal_density(const LatticeModel& model) {
    model.check();
    const auto grid = model.grid();
    MomentumDensity rho;
    rho.diagonal.resize(grid.sites);
    double z = 0.0;
    for (std::size_t i = 0; i < grid.sites; ++i) {
        const double p = grid.momentum(i);
        rho.diagonal[i] = std::exp(-model.beta * p * p / (2.0 * model.mass));
        z += rho.diagonal[i];
    }
    for (auto& w : rho.diagonal) w /= z;
    std::vector<Complex> m(grid.sites * grid.sites);
    for (std::size_t i = 0; i < grid.sites; ++i) m[i * grid.sites + i] = rho.diagonal[i];
    rho.matrix = std::move(m);
    return rho;
}

std::vector<Complex> packet_momentum_amplitudes(const LatticeModel& model, double sigma, double center,
                                                double time) {
    model.check();
    require_positive(sigma, "packet width");
    const auto grid = model.grid();
    const auto spectrum = dft(position_packet(grid, sigma, center), -1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid.sites));
    const long n = static_cast<long>(grid.sites);
    std::vector<Complex> phi(grid.sites);
    for (std::size_t i = 0; i < grid.sites; ++i) {
        const long m = ((grid.momentum_index(i) % n) + n) % n;
        const double p = grid.momentum(i);
        const double phase = -p * p * time / (2.0 * model.mass * model.hbar);
        phi[i] = spectrum[static_cast<std::size_t>(m)] * scale * std::polar(1.0, phase);
    }
    return phi;
}

MomentumDensity packet_mixture_density(const LatticeModel& model, const PacketFamily& family,
                                       bool keep_matrix) {
    model.check();
    if (family.centers.empty() || family.times.empty()) {
        throw Error(ErrorCode::InvalidArgument, "packet family is empty");
    }
    const std::size_t n = model.sites;
    const double weight = 1.0 / static_cast<double>(family.centers.size() * family.times.size());
    MomentumDensity rho;
    rho.diagonal.assign(n, 0.0);
    std::vector<Complex> m;
    if (keep_matrix) m.assign(n * n, Complex{});
    for (double c : family.centers) {
        for (double t : family.times) {
            const auto phi = packet_momentum_amplitudes(model, family.sigma, c, t);
            for (std::size_t a = 0; a < n; ++a) {
                rho.diagonal[a] += weight * std::norm(phi[a]);
                if (!keep_matrix) continue;
                const Complex wa = weight * phi[a];
                for (std::size_t b = 0; b < n; ++b) m[a * n + b] += wa * std::conj(phi[b]);
            }
        }
    }
    if (keep_matrix) rho.matrix = std::move(m);
    return rho;
}

double analytic_matching_width(const LatticeModel& model) {
    model.check();
    return 0.5 * model.hbar * std::sqrt(model.beta / model.mass);
}

double quoted_packet_size(const LatticeModel& model) {
    model.check();
    return 2.0 * std::numbers::pi * model.hbar * std::sqrt(model.beta / (2.0 * model.mass));
}

WidthMatch matching_width(const LatticeModel& model, double tolerance) {
    const auto thermal = thermal_density(model);
    const auto grid = model.grid();
    const double peak = *std::max_element(thermal.diagonal.begin(), thermal.diagonal.end());

    // Least squares of log w against p^2 over weights well above underflow.
    double s1 = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < grid.sites; ++i) {
        const double w = thermal.diagonal[i];
        if (w < 1e-200 * peak) continue;
        const double p = grid.momentum(i);
        const double x = p * p, y = std::log(w);
        s1 += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = s1 * sxx - sx * sx;
    if (!(denom > 0.0)) throw Error(ErrorCode::NoMatch, "thermal weights do not resolve a Gaussian exponent");
    WidthMatch out;
    out.exponent = -(s1 * sxy - sx * sy) / denom;
    if (!(out.exponent > 0.0)) throw Error(ErrorCode::NoMatch, "thermal weights are not decreasing in |p|");
    out.sigma_star = model.hbar * std::sqrt(out.exponent / 2.0);

    const auto mixture = packet_mixture_density(model, PacketFamily::uniform(model, out.sigma_star), false);
    for (std::size_t i = 0; i < grid.sites; ++i) {
        out.residual_sup_norm =
            std::max(out.residual_sup_norm, std::abs(thermal.diagonal[i] - mixture.diagonal[i]));
    }
    if (out.residual_sup_norm > tolerance) {
        std::ostringstream msg;
        msg << "packet mixture misses the thermal diagonal by " << out.residual_sup_norm
            << " (box or lattice too small for sigma* = " << out.sigma_star << ")";
        throw Error(ErrorCode::NoMatch, msg.str());
    }
    return out;
}

double packet_overlap(const LatticeModel& model, double sigma, double center_a, double center_b) {
    model.check();
    require_positive(sigma, "packet width");
    const auto grid = model.grid();
    const auto a = position_packet(grid, sigma, center_a);
    const auto b = position_packet(grid, sigma, center_b);
    Complex s{};
    for (std::size_t j = 0; j < grid.sites; ++j) s += std::conj(a[j]) * b[j];
    return std::abs(s);
}

OverlapReport overlap_report(const LatticeModel& model, const PacketFamily& family) {
    if (family.centers.size() < 2) throw Error(ErrorCode::InvalidArgument, "overlap report needs >= 2 packets");
    const auto grid = model.grid();
    OverlapReport report;
    report.min_overlap = 1.0;
    const std::size_t n = family.centers.size();
    for (std::size_t i = 0; i < n; ++i) {
        // A two-packet family has a single neighbor pair.
        if (n == 2 && i == 1) break;
        const double a = family.centers[i], b = family.centers[(i + 1) % n];
        OverlapReport::Pair pair{a, b, std::abs(grid.wrapped_offset(b, a)),
                                 packet_overlap(model, family.sigma, a, b)};
        report.min_overlap = std::min(report.min_overlap, pair.overlap);
        report.max_overlap = std::max(report.max_overlap, pair.overlap);
        report.neighbors.push_back(pair);
    }
    return report;
}

double expectation(const MomentumDensity& rho, std::span<const double> f) {
    if (f.size() != rho.diagonal.size()) throw Error(ErrorCode::DimensionMismatch, "observable size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += rho.diagonal[i] * f[i];
    return s;
}

LatticeModel physical_model(double mass_g, double temperature_k, std::size_t sites, double box_in_widths) {
    require_positive(mass_g, "mass");
    require_positive(temperature_k, "temperature");
    require_positive(box_in_widths, "box size");
    LatticeModel m;
    m.sites = sites;
    m.mass = mass_g;
    m.hbar = cgs::kHbar;
    m.beta = 1.0 / (cgs::kBoltzmann * temperature_k);
    m.box_length = box_in_widths * analytic_matching_width(m);
    return m;
}

}  // namespace qevent::thermal
