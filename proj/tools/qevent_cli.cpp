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

// qevent command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 success, 2 usage or parse error, 3 scenario invariant violation.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qevent/qevent.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitViolation = 3;

struct Common {
    std::uint64_t seed = 0;
    std::uint64_t runs = 100000;
    std::uint32_t replicas = 1;
    std::string out = "-";
    std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, bool sampling) {
    cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    if (sampling) {
        cmd->add_option("--runs", c.runs, "Monte Carlo draws")->capture_default_str();
        cmd->add_option("--replicas", c.replicas, "independently seeded streams, run in parallel")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }
    cmd->add_option("--out", c.out, "output file ('-' for stdout)")->capture_default_str();
    cmd->add_option("--format", c.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

qev_run_options options_of(const Common& c) {
    qev_run_options o;
    qev_run_options_init(&o);
    o.seed = c.seed;
    o.runs = c.runs;
    o.replicas = c.replicas;
    o.format = c.format == "csv" ? QEV_FORMAT_CSV : QEV_FORMAT_JSON;
    return o;
}

int exit_code_for(qev_status s) {
    switch (s) {
        case QEV_OK: return kExitOk;
        case QEV_INVALID_ARGUMENT:
        case QEV_PARSE: return kExitUsage;
        default: return kExitViolation;
    }
}

int finish(qev_status s, char* text, const Common& c) {
    if (s != QEV_OK) {
        std::cerr << "qevent: " << qev_status_name(s) << ": " << qev_last_error() << "\n";
        return exit_code_for(s);
    }
    std::string body(text);
    qev_string_free(text);
    if (c.out == "-") {
        std::cout << body;
        std::cout.flush();
        return kExitOk;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f || !(f << body)) {
        std::cerr << "qevent: cannot write '" << c.out << "'\n";
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-pattern quantum simulator: EPR, CHSH, scenarios, thermal ambiguity, cell sweeps"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qev_version()));

    Common common;

    auto* epr = app.add_subcommand("epr", "singlet joint probabilities and Monte Carlo frequencies");
    double theta = 90.0;
    epr->add_option("--theta", theta, "angle between the two measurement directions, degrees")
        ->capture_default_str();
    add_common(epr, common, true);

    auto* chsh = app.add_subcommand("chsh", "quantum and best classical CHSH values");
    double a = 0.0, ap = 90.0, b = 45.0, bp = 135.0;
    chsh->add_option("--a", a, "side-1 setting a, degrees")->capture_default_str();
    chsh->add_option("--a-prime", ap, "side-1 setting a', degrees")->capture_default_str();
    chsh->add_option("--b", b, "side-2 setting b, degrees")->capture_default_str();
    chsh->add_option("--b-prime", bp, "side-2 setting b', degrees")->capture_default_str();
    add_common(chsh, common, false);

    auto* sim = app.add_subcommand("simulate", "sample alternative sets of a scenario file");
    std::string scenario;
    sim->add_option("scenario", scenario, "scenario JSON file")->required();
    add_common(sim, common, true);

    auto* thermal = app.add_subcommand("thermal-ambiguity", "thermal momentum diagonal versus packet mixture");
    qev_thermal_args targs;
    qev_thermal_args_init(&targs);
    thermal->add_option("--sites", targs.sites, "lattice sites")->capture_default_str();
    thermal->add_option("--box", targs.box_length, "box length")->capture_default_str();
    thermal->add_option("--mass", targs.mass, "particle mass")->capture_default_str();
    thermal->add_option("--hbar", targs.hbar, "reduced Planck constant")->capture_default_str();
    thermal->add_option("--beta", targs.beta, "inverse temperature")->capture_default_str();
    thermal->add_option("--temperature", targs.temperature_k,
                        "use CGS units at this temperature in kelvin (overrides box/mass/hbar/beta)");
    thermal->add_option("--mass-g", targs.mass_g, "CGS mass in grams (default: proton)");
    thermal->add_option("--time-samples", targs.time_samples, "preparation times averaged over")
        ->capture_default_str();
    thermal->add_option("--time-step", targs.time_step, "spacing of preparation times")->capture_default_str();
    add_common(thermal, common, false);

    auto* cells = app.add_subcommand("cells", "momentum-balance spread against cell width");
    qev_cells_args cargs;
    qev_cells_args_init(&cargs);
    std::vector<double> widths;
    cells->add_option("--sites", cargs.sites, "lattice sites")->capture_default_str();
    cells->add_option("--box", cargs.box_length, "box length")->capture_default_str();
    cells->add_option("--hbar", cargs.hbar, "reduced Planck constant")->capture_default_str();
    cells->add_option("--tau-scale", cargs.tau_scale, "kernel smoothness scale (0: automatic)")
        ->capture_default_str();
    cells->add_option("--smoothing", cargs.smoothing_ratio, "cell edge width over cell width")
        ->capture_default_str();
    cells->add_option("--cell-width", widths, "cell width to visit (repeatable; default: two decades)");
    cells->add_option("--packet-center", cargs.packet_center, "input packet center, fraction of the box")
        ->capture_default_str();
    cells->add_option("--packet-width", cargs.packet_width, "input packet width (0: box/16)")
        ->capture_default_str();
    add_common(cells, common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const auto opts = options_of(common);
    char* text = nullptr;
    qev_status s = QEV_OK;
    if (*epr) {
        s = qev_run_epr(theta, &opts, &text);
    } else if (*chsh) {
        s = qev_run_chsh(a, ap, b, bp, &opts, &text);
    } else if (*sim) {
        std::ifstream f(scenario, std::ios::binary);
        if (!f) {
            std::cerr << "qevent: cannot read '" << scenario << "'\n";
            return kExitUsage;
        }
        std::ostringstream buf;
        buf << f.rdbuf();
        s = qev_run_simulate(buf.str().c_str(), scenario.c_str(), &opts, &text);
    } else if (*thermal) {
        s = qev_run_thermal(&targs, &opts, &text);
    } else if (*cells) {
        cargs.cell_widths = widths.empty() ? nullptr : widths.data();
        cargs.cell_width_count = widths.size();
        s = qev_run_cells(&cargs, &opts, &text);
    }
    return finish(s, text, common);
}
