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

#ifndef QEVENT_REPORTS_HPP
#define QEVENT_REPORTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qevent/ensemble.hpp"
#include "qevent/quasilocal.hpp"

// Run drivers behind the command-line front end and the C API. Each returns a
// "qevent.report/1" document:
//   {"schema", "subcommand", "config": {...}, "results": {...},
//    "table": {"columns": [...], "rows": [[...], ...]}, "duration_ms"}
// Everything except duration_ms is a pure function of the config.

namespace qevent::report {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "qevent.report/1";

enum class Format { json, csv };

struct EprArgs {
    double theta_deg = 90.0;
    std::uint64_t runs = 100000;
    std::uint64_t seed = 0;
    unsigned replicas = 1;
};

struct ChshArgs {
    double a_deg = 0.0;
    double a_prime_deg = 90.0;
    double b_deg = 45.0;
    double b_prime_deg = 135.0;
};

struct SimulateArgs {
    std::string scenario_text;
    /// Echoed only; the text is what gets parsed.
    std::string scenario_path;
    std::uint64_t runs = 10000;
    std::uint64_t seed = 0;
    unsigned replicas = 1;
    /// Number of realized histories reported per alternative set.
    std::size_t samples = 3;
};

struct ThermalArgs {
    thermal::LatticeModel model;
    /// When set, the model is replaced by physical_model(mass_g, temperature_k).
    std::optional<double> temperature_k;
    std::optional<double> mass_g;
    std::size_t time_samples = 1;
    double time_step = 0.0;
};

struct CellsArgs {
    quasilocal::SweepConfig sweep;
};

/// theta must lie in [0, 180] (InvalidArgument otherwise).
Json run_epr(const EprArgs& args);
Json run_chsh(const ChshArgs& args);
/// Throws Parse for bad scenarios and NotExhaustiveError for sets that do
/// not sum to one.
Json run_simulate(const SimulateArgs& args);
Json run_thermal(const ThermalArgs& args);
Json run_cells(const CellsArgs& args);

/// The report's table as CSV (header line, then one line per row).
std::string to_csv(const Json& report);

/// Report text in the requested format; JSON is indented by 2.
std::string render(const Json& report, Format format);

/// Copy of the report without duration_ms, for determinism checks.
Json without_timing(Json report);

}  // namespace qevent::report

#endif  // QEVENT_REPORTS_HPP
