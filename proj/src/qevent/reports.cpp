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

#include "qevent/reports.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include "qevent/dynamics.hpp"
#include "qevent/epr.hpp"
#include "qevent/error.hpp"
#include "qevent/json_io.hpp"
#include "qevent/rng.hpp"

namespace qevent::report {

namespace {

using Clock = std::chrono::steady_clock;

Json skeleton(const char* subcommand, Json config) {
    return {{"schema", kReportSchema},
            {"subcommand", subcommand},
            {"config", std::move(config)},
            {"results", Json::object()},
            {"table", {{"columns", Json::array()}, {"rows", Json::array()}}}};
}

void stamp(Json& report, Clock::time_point start) {
    report["duration_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_replicas(unsigned replicas) {
    if (replicas == 0) throw Error(ErrorCode::InvalidArgument, "replicas must be >= 1");
}

double binomial_sigma(double p, std::uint64_t n) {
    return n == 0 ? 0.0 : std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

// Counts of `runs` draws from `probs`, split over independently seeded replicas
// and summed in replica order.
std::vector<std::uint64_t> draw_counts(const std::vector<double>& probs, std::uint64_t runs, std::uint64_t seed,
                                       unsigned replicas) {
    auto job = [&](unsigned r) {
        const std::uint64_t share = runs / replicas + (r < runs % replicas ? 1 : 0);
        ExtensionSampler sampler(probs, replica_seed(seed, r));
        std::vector<std::uint64_t> counts(probs.size(), 0);
        for (std::uint64_t i = 0; i < share; ++i) ++counts[sampler.next()];
        return counts;
    };
    // Validates the set (and raises NotExhaustive) before any thread starts.
    ExtensionSampler check(probs, seed);
    std::vector<std::future<std::vector<std::uint64_t>>> jobs;
    for (unsigned r = 0; r < replicas; ++r) jobs.push_back(std::async(std::launch::async, job, r));
    std::vector<std::uint64_t> total(probs.size(), 0);
    for (auto& j : jobs) {
        const auto c = j.get();
        for (std::size_t k = 0; k < c.size(); ++k) total[k] += c[k];
    }
    return total;
}

std::string csv_cell(const Json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + "\"";
    }
    if (v.is_null()) return "";
    return v.dump();
}

}  // namespace

Json run_epr(const EprArgs& args) {
    const auto start = Clock::now();
    if (!(args.theta_deg >= 0.0 && args.theta_deg <= 180.0)) {
        throw Error(ErrorCode::InvalidArgument, "theta must lie in [0, 180] degrees");
    }
    require_replicas(args.replicas);
    Json report = skeleton("epr", {{"theta_deg", args.theta_deg},
                                   {"runs", args.runs},
                                   {"seed", args.seed},
                                   {"replicas", args.replicas}});

    // Side 1 measures along +z, side 2 at theta from it.
    const auto setup = epr::build_epr(epr::Direction::in_plane(0.0), epr::Direction::in_plane(args.theta_deg));
    const auto p = epr::joint_distribution(setup);
    const auto mc = epr::sample_outcomes(setup, args.runs, args.seed, args.replicas);

    static constexpr const char* kNames[4] = {"++", "+-", "-+", "--"};
    static constexpr const char* kKeys[4] = {"p_pp", "p_pm", "p_mp", "p_mm"};
    auto& res = report["results"];
    double max_dev = 0.0;
    bool all_within = true;
    Json freqs = Json::object();
    report["table"]["columns"] = {"outcome", "probability", "count", "frequency", "sigma", "within_3sigma"};
    for (std::size_t k = 0; k < 4; ++k) {
        res[kKeys[k]] = p[k];
        const double f = args.runs ? static_cast<double>(mc.counts[k]) / static_cast<double>(args.runs) : 0.0;
        const double sigma = binomial_sigma(p[k], args.runs);
        const double dev = std::abs(f - p[k]);
        const bool within = args.runs == 0 || dev <= 3.0 * sigma;
        max_dev = std::max(max_dev, dev);
        all_within = all_within && within;
        freqs[kNames[k]] = f;
        report["table"]["rows"].push_back({kNames[k], p[k], mc.counts[k], f, sigma, within});
    }
    res["theta_deg"] = args.theta_deg;
    res["E"] = epr::correlation(setup);
    res["frequencies"] = std::move(freqs);
    res["max_deviation"] = max_dev;
    res["all_within_3sigma"] = all_within;
    stamp(report, start);
    return report;
}

Json run_chsh(const ChshArgs& args) {
    const auto start = Clock::now();
    Json report = skeleton("chsh", {{"a_deg", args.a_deg},
                                    {"a_prime_deg", args.a_prime_deg},
                                    {"b_deg", args.b_deg},
                                    {"b_prime_deg", args.b_prime_deg}});
    using epr::Direction;
    const auto a = Direction::in_plane(args.a_deg), ap = Direction::in_plane(args.a_prime_deg);
    const auto b = Direction::in_plane(args.b_deg), bp = Direction::in_plane(args.b_prime_deg);
    const double s = epr::chsh(a, ap, b, bp);
    const double classical = epr::best_classical(a, ap, b, bp);
    auto& res = report["results"];
    res["S_quantum"] = s;
    res["S_quantum_abs"] = std::abs(s);
    res["S_classical_max"] = classical;
    res["gap"] = std::abs(s) - classical;
    res["tsirelson_bound"] = 2.0 * std::numbers::sqrt2;
    report["table"]["columns"] = {"pair", "E"};
    report["table"]["rows"] = Json::array({Json::array({"a,b", epr::correlation(a, b)}),
                                           Json::array({"a,b'", epr::correlation(a, bp)}),
                                           Json::array({"a',b", epr::correlation(ap, b)}),
                                           Json::array({"a',b'", epr::correlation(ap, bp)})});
    stamp(report, start);
    return report;
}

Json run_simulate(const SimulateArgs& args) {
    const auto start = Clock::now();
    require_replicas(args.replicas);
    Json report = skeleton("simulate", {{"scenario", args.scenario_path},
                                        {"runs", args.runs},
                                        {"seed", args.seed},
                                        {"replicas", args.replicas},
                                        {"samples", args.samples}});
    const auto scenario = io::parse_scenario(args.scenario_text);
    report["table"]["columns"] = {"set", "alternative", "probability", "count", "frequency", "sigma",
                                  "within_3sigma"};
    Json sets = Json::array();
    double worst_chain = 0.0;
    for (std::size_t si = 0; si < scenario.alternative_sets.size(); ++si) {
        const auto& named = scenario.alternative_sets[si];
        const auto& cut = scenario.cuts.at(named.cut);
        const auto state = cut_state(scenario.history, cut);
        const auto probs = alternative_probabilities(state, named.set);
        double sum = 0.0;
        for (double p : probs) sum += p;

        Json set = {{"name", named.name}, {"cut", named.cut}, {"exhaustive", named.set.exhaustive},
                    {"probability_sum", sum}};
        set["contributing_events"] = state.contributing_events;

        // Chain rule: joint probability against sequential conditioning.
        double chain = 0.0;
        for (const auto& alt : named.set.alternatives) {
            double product = 1.0;
            CutState s = state;
            for (std::size_t k = 0; k < alt.events.size(); ++k) {
                const double p = event_probability(s, alt.events[k]);
                product *= p;
                if (k + 1 < alt.events.size()) {
                    if (p <= kZeroProbability) {
                        product = 0.0;
                        break;
                    }
                    s = conditioned(s, alt.events[k]);
                }
            }
            chain = std::max(chain, std::abs(product - joint_probability(state, alt.events)));
        }
        worst_chain = std::max(worst_chain, chain);
        set["chain_rule_max_error"] = chain;

        Json alts = Json::array();
        std::vector<std::uint64_t> counts;
        if (named.set.exhaustive) counts = draw_counts(probs, args.runs, args.seed ^ si, args.replicas);
        for (std::size_t k = 0; k < probs.size(); ++k) {
            Json a = {{"name", named.set.alternatives[k].name}, {"probability", probs[k]}};
            if (!counts.empty()) {
                const double f = args.runs ? static_cast<double>(counts[k]) / static_cast<double>(args.runs) : 0.0;
                const double sigma = binomial_sigma(probs[k], args.runs);
                const bool within = args.runs == 0 || std::abs(f - probs[k]) <= 3.0 * sigma;
                a["count"] = counts[k];
                a["frequency"] = f;
                a["within_3sigma"] = within;
                report["table"]["rows"].push_back(
                    {named.name, named.set.alternatives[k].name, probs[k], counts[k], f, sigma, within});
            }
            alts.push_back(std::move(a));
        }
        set["alternatives"] = std::move(alts);

        // A few realized continuations from a stream disjoint from the replicas.
        Json realized = Json::array();
        if (named.set.exhaustive && args.samples > 0) {
            ExtensionSampler sampler(probs, replica_seed(args.seed ^ si, std::numeric_limits<std::uint64_t>::max()));
            for (std::size_t n = 0; n < args.samples; ++n) {
                const auto k = sampler.next();
                History h = scenario.history;
                const auto ids = realize_all(h, cut, named.set.alternatives[k]);
                Cut after = cut;
                after.events.insert(ids.begin(), ids.end());
                Json saturated = Json::array(), unsaturated = Json::array();
                for (const auto& [id, e] : h.events()) {
                    (h.saturation_status(id) == Saturation::saturated ? saturated : unsaturated).push_back(id);
                }
                const auto free = h.free_links(after);
                realized.push_back({{"alternative", named.set.alternatives[k].name},
                                    {"new_events", ids},
                                    {"saturated", std::move(saturated)},
                                    {"unsaturated", std::move(unsaturated)},
                                    {"free_links", std::vector<std::string>(free.begin(), free.end())},
                                    {"violations", h.validate().size()}});
            }
        }
        set["realized"] = std::move(realized);
        sets.push_back(std::move(set));
    }
    auto& res = report["results"];
    res["alternative_sets"] = std::move(sets);
    res["chain_rule_max_error"] = worst_chain;
    res["chain_rule_ok"] = worst_chain <= 1e-12;
    stamp(report, start);
    return report;
}

Json run_thermal(const ThermalArgs& args) {
    const auto start = Clock::now();
    thermal::LatticeModel model = args.model;
    Json config = {{"time_samples", args.time_samples}, {"time_step", args.time_step}};
    if (args.temperature_k) {
        const double mass = args.mass_g.value_or(thermal::cgs::kProtonMass);
        model = thermal::physical_model(mass, *args.temperature_k, args.model.sites);
        config["temperature_k"] = *args.temperature_k;
        config["mass_g"] = mass;
        config["units"] = "cgs";
    }
    model.check();
    if (args.time_samples == 0) throw Error(ErrorCode::InvalidArgument, "time samples must be >= 1");
    config["sites"] = model.sites;
    config["box_length"] = model.box_length;
    config["mass"] = model.mass;
    config["hbar"] = model.hbar;
    config["beta"] = model.beta;
    Json report = skeleton("thermal-ambiguity", std::move(config));

    constexpr double kTolerance = 1e-8;
    const auto match = thermal::matching_width(model, std::numeric_limits<double>::infinity());
    const auto thermal_rho = thermal::thermal_density(model);
    const auto mixture =
        thermal::packet_mixture_density(model, thermal::PacketFamily::uniform(model, match.sigma_star), true);
    double time_shift = 0.0;
    if (args.time_samples > 1) {
        const auto timed = thermal::packet_mixture_density(
            model, thermal::PacketFamily::uniform(model, match.sigma_star, args.time_samples, args.time_step),
            true);
        for (std::size_t i = 0; i < timed.matrix->size(); ++i) {
            time_shift = std::max(time_shift, std::abs((*timed.matrix)[i] - (*mixture.matrix)[i]));
        }
    }
    const auto family = thermal::PacketFamily::uniform(model, match.sigma_star);
    const auto overlaps = thermal::overlap_report(model, family);

    auto& res = report["results"];
    res["sigma_star"] = match.sigma_star;
    res["sigma_star_closed_form"] = thermal::analytic_matching_width(model);
    res["exponent"] = match.exponent;
    res["residual_sup_norm"] = match.residual_sup_norm;
    res["tolerance"] = kTolerance;
    res["matched"] = match.residual_sup_norm < kTolerance;
    res["mixture_max_off_diagonal"] = mixture.max_off_diagonal();
    res["time_average_max_change"] = time_shift;
    res["neighbor_overlap_min"] = overlaps.min_overlap;
    res["neighbor_overlap_max"] = overlaps.max_overlap;
    // h sqrt(beta / 2m) and its ratio to the matched width.
    res["paper_lambda"] = thermal::quoted_packet_size(model);
    res["ratio"] = thermal::quoted_packet_size(model) / match.sigma_star;

    const auto grid = model.grid();
    report["table"]["columns"] = {"index", "p", "thermal", "mixture", "difference"};
    for (std::size_t i = 0; i < grid.sites; ++i) {
        report["table"]["rows"].push_back({i, grid.momentum(i), thermal_rho.diagonal[i], mixture.diagonal[i],
                                           thermal_rho.diagonal[i] - mixture.diagonal[i]});
    }
    stamp(report, start);
    return report;
}

Json run_cells(const CellsArgs& args) {
    const auto start = Clock::now();
    const auto& c = args.sweep;
    Json report = skeleton("cells", {{"sites", c.grid.sites},
                                     {"box_length", c.grid.box_length},
                                     {"hbar", c.grid.hbar},
                                     {"tau_scale", c.tau_scale},
                                     {"smoothing_ratio", c.smoothing_ratio},
                                     {"cell_widths", c.cell_widths},
                                     {"packet_center", c.packet_center},
                                     {"packet_width", c.packet_width}});
    const auto sweep = quasilocal::spread_sweep(c);
    const double h = 2.0 * std::numbers::pi * c.grid.hbar;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    report["table"]["columns"] = {"cells", "a", "delta_p", "delta_p_a_over_h", "coherence_defect"};
    for (const auto& r : sweep.rows) {
        lo = std::min(lo, r.spread_times_width_over_h);
        hi = std::max(hi, r.spread_times_width_over_h);
        report["table"]["rows"].push_back(
            {r.cells, r.cell_width, r.spread, r.spread_times_width_over_h, r.coherence_defect});
    }
    auto& res = report["results"];
    res["loglog_slope"] = sweep.loglog_slope;
    res["h"] = h;
    res["delta_p_a_over_h_min"] = lo;
    res["delta_p_a_over_h_max"] = hi;
    res["width_decades"] = sweep.rows.empty()
                               ? 0.0
                               : std::log10(sweep.rows.front().cell_width / sweep.rows.back().cell_width);
    stamp(report, start);
    return report;
}

std::string to_csv(const Json& report) {
    std::ostringstream out;
    const auto& table = report.at("table");
    bool first = true;
    for (const auto& col : table.at("columns")) {
        out << (first ? "" : ",") << csv_cell(col);
        first = false;
    }
    out << '\n';
    for (const auto& row : table.at("rows")) {
        first = true;
        for (const auto& cell : row) {
            out << (first ? "" : ",") << csv_cell(cell);
            first = false;
        }
        out << '\n';
    }
    return out.str();
}

std::string render(const Json& report, Format format) {
    return format == Format::csv ? to_csv(report) : report.dump(2) + "\n";
}

Json without_timing(Json report) {
    report.erase("duration_ms");
    return report;
}

}  // namespace qevent::report
