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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qevent/error.hpp"
#include "qevent/quasilocal.hpp"

using namespace qevent;
using namespace qevent::quasilocal;

namespace {

MomentumGrid grid(std::size_t n = 128) { return MomentumGrid{n, 1.0, 1.0}; }

double p_max(const MomentumGrid& g) { return g.dp() * static_cast<double>(g.sites / 2); }

double max_gap(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double w = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
    return w;
}

double norm2(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return s;
}

// dx sum_j f(x_j) exp(i q_m x_j / hbar), summed directly.
std::vector<Complex> direct_profile(const MomentumGrid& g, const std::vector<double>& f) {
    std::vector<Complex> out(g.sites);
    for (std::size_t m = 0; m < g.sites; ++m) {
        for (std::size_t j = 0; j < g.sites; ++j) {
            out[m] += g.dx() * f[j] * std::polar(1.0, g.dp() * double(m) * g.position(j) / g.hbar);
        }
    }
    return out;
}

// Sum of the operators of a decomposition, entrywise.
std::vector<Complex> summed(const std::vector<TransferOperator>& ops) {
    std::vector<Complex> s = ops.front().dense();
    for (std::size_t k = 1; k < ops.size(); ++k) {
        const auto d = ops[k].dense();
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += d[i];
    }
    return s;
}

}  // namespace

TEST_CASE("grid preconditions") {
    CHECK_THROWS_AS(check_grid(MomentumGrid{8, 1.0, 1.0}), Error);
    CHECK_THROWS_AS(check_grid(MomentumGrid{17, 1.0, 1.0}), Error);
    CHECK_NOTHROW(check_grid(grid()));
    const auto g = grid(16);
    CHECK(g.momentum(0) == doctest::Approx(-p_max(g)));
    CHECK(g.momentum(8) == 0.0);
}

TEST_CASE("translated kernels") {
    const auto g = grid(64);
    const auto t = random_smooth_kernel(g, p_max(g) / 4, 12);
    CHECK(max_gap(translate_kernel(t, 0.0).dense(), t.dense()) == 0.0);
    const auto moved = translate_kernel(t, 0.3);
    for (std::size_t i = 0; i < g.sites; ++i) CHECK(std::abs(moved.at(i, i) - t.at(i, i)) < 1e-15);
    CHECK(max_gap(translate_kernel(moved, -0.3).dense(), t.dense()) < 1e-12);
    const auto p = g.momentum(40), q = g.momentum(21);
    CHECK(std::abs(moved.at(40, 21) - t.at(40, 21) * std::polar(1.0, (p - q) * 0.3)) < 1e-14);
    CHECK_THROWS_AS(translate_kernel(t, 1.5), Error);
}

TEST_CASE("integrating over the box restores momentum conservation") {
    const auto g = grid(64);
    const auto t = random_smooth_kernel(g, p_max(g) / 4, 3);
    const auto total = integrate_over_box(t).dense();
    double diag_scale = 0.0;
    for (std::size_t i = 0; i < g.sites; ++i) diag_scale = std::max(diag_scale, std::abs(total[i * g.sites + i]));
    for (std::size_t a = 0; a < g.sites; ++a) {
        for (std::size_t b = 0; b < g.sites; ++b) {
            if (a != b) CHECK(std::abs(total[a * g.sites + b]) < 1e-12 * diag_scale);
        }
        // Direct sum over every lattice translate.
        Complex s{};
        for (std::size_t j = 0; j < g.sites; ++j) s += g.dx() * translate_kernel(t, g.position(j)).at(a, a);
        CHECK(std::abs(total[a * g.sites + a] - s) < 1e-13);
        CHECK(std::abs(total[a * g.sites + a] - g.box_length * t.at(a, a)) < 1e-13);
    }
    const TKernel ones(g, [](double, double) { return Complex{1.0, 0.0}; }, 1.0);
    const auto id = integrate_over_box(ones).dense();
    for (std::size_t a = 0; a < g.sites; ++a) {
        for (std::size_t b = 0; b < g.sites; ++b) {
            CHECK(std::abs(id[a * g.sites + b] - (a == b ? 1.0 : 0.0)) < 1e-13);
        }
    }
}

TEST_CASE("cell decompositions reconstruct the integrated operator") {
    const auto g = grid(128);
    const auto t = gaussian_kernel(g, p_max(g) / 4);
    const auto total = integrate_over_box(t).dense();

    SUBCASE("single full cell") {
        const auto one = CellPartition::from_functions(g, {std::vector<double>(g.sites, 1.0)}, 1.0);
        CHECK(max_gap(cell_decompose(t, one)[0].dense(), total) < 1e-13);
    }
    SUBCASE("two sharp halves") {
        std::vector<double> left(g.sites), right(g.sites);
        for (std::size_t j = 0; j < g.sites; ++j) (j < g.sites / 2 ? left : right)[j] = 1.0;
        const auto halves = CellPartition::from_functions(g, {left, right}, 0.5);
        CHECK(max_gap(summed(cell_decompose(t, halves)), total) < 1e-12);
    }
    SUBCASE("smoothed partitions") {
        for (std::size_t count : {3, 5, 8, 16}) {
            const auto cells = CellPartition::smoothed(g, count, 1.0 / 12.0, 0.01);
            CHECK(cells.unity_defect() < 1e-12);
            CHECK(cells.max_leakage() < 1e-12);
            const auto ops = cell_decompose(t, cells);
            CHECK(max_gap(summed(ops), total) < 1e-12);
            for (std::size_t k = 0; k < count; ++k) {
                CHECK(max_gap(ops[k].profile(), direct_profile(g, cells.cells()[k])) < 1e-12);
            }
        }
    }
    SUBCASE("broken partitions are refused") {
        std::vector<double> most(g.sites, 0.9);
        CHECK_THROWS_AS(CellPartition::from_functions(g, {most}, 1.0), Error);
    }
}

TEST_CASE("cell transforms concentrate within a few h/a") {
    const MomentumGrid g{1024, 1.0, 1.0};
    const double h = 2 * std::numbers::pi;
    for (std::size_t count : {4, 16, 64}) {
        const auto cells = CellPartition::smoothed(g, count, 1.0 / 12.0);
        const auto prof = transfer_profile(g, cells.cells()[0]);
        const double a = cells.cell_width();
        double inside = 0.0, all = 0.0;
        for (std::size_t m = 0; m < g.sites; ++m) {
            const long k = m < g.sites / 2 ? long(m) : long(m) - long(g.sites);
            const double q = std::abs(double(k)) * g.dp();
            all += std::norm(prof[m]);
            if (q <= 3 * h / a) inside += std::norm(prof[m]);
        }
        CHECK(inside / all > 0.99);
    }
}

TEST_CASE("branch states") {
    const auto g = grid(256);
    const auto t = gaussian_kernel(g, p_max(g) / 4);
    const auto cells = CellPartition::smoothed(g, 4, 1.0 / 12.0);

    SUBCASE("branches add up to the outgoing state") {
        const auto psi = gaussian_packet(g, 0.4, 0.2);
        const auto report = branch_states(t, cells, psi);
        std::vector<Complex> sum(g.sites);
        double norms = 0.0;
        for (const auto& b : report.branches) {
            for (std::size_t i = 0; i < g.sites; ++i) sum[i] += b.psi[i];
            norms += norm2(b.psi);
        }
        CHECK(max_gap(sum, report.psi_out) < 1e-12);
        CHECK(max_gap(report.psi_out, integrate_over_box(t).apply(psi)) < 1e-12);
        // Broad input: the interference term is real and matches direct norms.
        CHECK(report.coherence_defect == doctest::Approx(std::abs(norm2(sum) - norms)).epsilon(1e-10));
        CHECK(report.coherence_defect > 1e-3);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(max_gap(report.branches[k].psi, report.branches[k].op->apply(psi)) < 1e-12);
        }
    }
    SUBCASE("a packet inside one cell leaks nowhere else") {
        const auto psi = gaussian_packet(g, 0.375, 0.01);  // middle of cell 1
        const auto report = branch_states(t, cells, psi);
        const double own = norm2(report.branches[1].psi);
        for (std::size_t k : {0, 2, 3}) CHECK(norm2(report.branches[k].psi) / own < 1e-8);
    }
    SUBCASE("which-cell frequencies of packet centers") {
        for (double c : {0.1, 0.35, 0.6, 0.9}) {
            const auto report = branch_states(t, cells, gaussian_packet(g, c, 0.008));
            const auto cell = static_cast<std::size_t>(c / 0.25);
            CHECK(report.probabilities[cell] > 1.0 - 1e-6);
        }
    }
    SUBCASE("translation covariance") {
        const auto psi = gaussian_packet(g, 0.3, 0.05);
        const double x = 37 * g.dx();
        const auto base = branch_states(t, cells, psi);
        const auto moved =
            branch_states(t, CellPartition::smoothed(g, 4, 1.0 / 12.0, x), translate_state(g, psi, x));
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(max_gap(moved.branches[k].psi, translate_state(g, base.branches[k].psi, x)) < 1e-12);
        }
    }
    SUBCASE("input must be a unit vector") {
        auto psi = gaussian_packet(g, 0.3, 0.05);
        for (auto& v : psi) v *= 2.0;
        CHECK_THROWS_AS(branch_states(t, cells, psi), Error);
    }
}

TEST_CASE("momentum balance spread") {
    const auto g = grid(256);
    const auto t = gaussian_kernel(g, p_max(g) / 4);
    const auto psi = gaussian_packet(g, 0.5, 1.0 / 16);

    const auto whole = CellPartition::from_functions(g, {std::vector<double>(g.sites, 1.0)}, 1.0);
    const auto one = branch_states(t, whole, psi);
    CHECK(momentum_balance_spread(one.branches[0], psi) < 1e-6 * g.dp());

    const auto cells = CellPartition::smoothed(g, 8, 1.0 / 12.0);
    const auto report = branch_states(t, cells, psi);
    const double h = 2 * std::numbers::pi;
    const double spread = momentum_balance_spread(report.branches[3], psi);
    CHECK(spread * cells.cell_width() / h > 0.3);
    CHECK(spread * cells.cell_width() / h < 3.0);

    // Direct weighted standard deviation over the dense operator.
    const auto dense = report.branches[3].op->dense();
    double z = 0, m1 = 0, m2 = 0;
    for (std::size_t a = 0; a < g.sites; ++a) {
        for (std::size_t b = 0; b < g.sites; ++b) {
            long q = long(a) - long(b);
            if (q >= long(g.sites / 2)) q -= long(g.sites);
            if (q < -long(g.sites / 2)) q += long(g.sites);
            const double w = std::norm(dense[a * g.sites + b] * psi[b]);
            z += w;
            m1 += w * q;
            m2 += w * q * q;
        }
    }
    const double direct = std::sqrt(m2 / z - (m1 / z) * (m1 / z)) * g.dp();
    CHECK(spread == doctest::Approx(direct).epsilon(1e-10));

    BranchState empty{0, std::vector<Complex>(g.sites), report.branches[0].op};
    CHECK_THROWS_AS(momentum_balance_spread(empty, psi), Error);
}

TEST_CASE("log-log slope and a small sweep") {
    const std::vector<double> x{1, 2, 4, 8}, y{3, 1.5, 0.75, 0.375};
    CHECK(loglog_slope(x, y) == doctest::Approx(-1.0));
    SweepConfig c;
    c.grid = MomentumGrid{512, 1.0, 1.0};
    c.cell_widths = {0.5, 0.25, 0.125, 0.0625};
    const auto sweep = spread_sweep(c);
    REQUIRE(sweep.rows.size() == 4);
    for (const auto& r : sweep.rows) {
        CHECK(r.spread_times_width_over_h > 0.3);
        CHECK(r.spread_times_width_over_h < 3.0);
    }
    CHECK(std::abs(sweep.loglog_slope + 1.0) < 0.05);
}
