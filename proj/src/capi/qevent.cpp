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

#include "qevent/qevent.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "qevent/dynamics.hpp"
#include "qevent/error.hpp"
#include "qevent/json_io.hpp"
#include "qevent/reports.hpp"

struct qev_history {
    qevent::History h;
};

struct qev_scenario {
    qevent::io::Scenario s;
};

namespace {

using qevent::io::Json;

thread_local std::string last_error;

qev_status fail(qev_status status, const char* what) {
    last_error = what;
    return status;
}

// Runs `body`, translating exceptions to status codes.
template <class F>
qev_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return QEV_OK;
    } catch (const qevent::Error& e) {
        return fail(static_cast<qev_status>(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(QEV_PARSE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(QEV_OUT_OF_MEMORY, "out of memory");
    } catch (const std::exception& e) {
        return fail(QEV_INTERNAL, e.what());
    } catch (...) {
        return fail(QEV_INTERNAL, "unknown failure");
    }
}

void require(const void* p, const char* what) {
    if (!p) throw qevent::Error(qevent::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* copy_out(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.data(), s.size() + 1);
    return p;
}

qevent::Cut cut_from(const char* cut_json) {
    require(cut_json, "cut");
    const Json j = qevent::io::parse_text(cut_json);
    if (!j.is_array()) throw qevent::Error(qevent::ErrorCode::Parse, "/: cut must be an array of event ids");
    qevent::Cut cut;
    for (const auto& id : j) {
        if (!id.is_string()) throw qevent::Error(qevent::ErrorCode::Parse, "/: event ids must be strings");
        cut.events.insert(id.get<std::string>());
    }
    return cut;
}

qevent::CandidateEvent candidate_from(const char* json) {
    require(json, "candidate");
    return qevent::io::candidate_from_json(qevent::io::parse_text(json));
}

qevent::report::Format format_of(const qev_run_options* o) {
    return o->format == QEV_FORMAT_CSV ? qevent::report::Format::csv : qevent::report::Format::json;
}

qev_run_options defaults_if_null(const qev_run_options* o) {
    if (o) return *o;
    qev_run_options d;
    qev_run_options_init(&d);
    return d;
}

}  // namespace

extern "C" {

const char* qev_version(void) { return "0.1.0"; }

const char* qev_status_name(qev_status status) {
    switch (status) {
        case QEV_OK: return "OK";
        case QEV_OUT_OF_MEMORY: return "OutOfMemory";
        case QEV_INTERNAL: return "Internal";
        default: break;
    }
    if (status >= QEV_INVALID_ARGUMENT && status <= QEV_ZERO_NORM_BRANCH) {
        return qevent::error_code_name(static_cast<qevent::ErrorCode>(status)).data();
    }
    return "Unknown";
}

const char* qev_last_error(void) { return last_error.c_str(); }

void qev_string_free(char* s) { std::free(s); }

qev_status qev_history_new(qev_history** out) {
    return guarded([&] {
        require(out, "out");
        *out = new qev_history{};
    });
}

qev_status qev_history_from_json(const char* json, qev_history** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        auto h = qevent::io::history_from_string(json);
        *out = new qev_history{std::move(h)};
    });
}

qev_status qev_history_clone(const qev_history* h, qev_history** out) {
    return guarded([&] {
        require(h, "history");
        require(out, "out");
        *out = new qev_history{h->h};
    });
}

void qev_history_free(qev_history* h) { delete h; }

qev_status qev_history_to_json(const qev_history* h, char** out) {
    return guarded([&] {
        require(h, "history");
        require(out, "out");
        *out = copy_out(qevent::io::history_to_string(h->h));
    });
}

qev_status qev_history_add_initial_event(qev_history* h, const char* vector_json, const char* requested_id,
                                         char** out_id) {
    return guarded([&] {
        require(h, "history");
        require(vector_json, "vector");
        const auto vec = qevent::io::vector_from_json(qevent::io::parse_text(vector_json));
        std::optional<std::string> id;
        if (requested_id) id = requested_id;
        const auto got = h->h.add_initial_event(vec, std::nullopt, id);
        if (out_id) *out_id = copy_out(got);
    });
}

qev_status qev_history_saturated(const qev_history* h, const char* event_id, int* out_saturated) {
    return guarded([&] {
        require(h, "history");
        require(event_id, "event id");
        require(out_saturated, "out");
        *out_saturated = h->h.saturation_status(event_id) == qevent::Saturation::saturated ? 1 : 0;
    });
}

qev_status qev_history_free_links(const qev_history* h, const char* cut_json, char** out_json) {
    return guarded([&] {
        require(h, "history");
        require(out_json, "out");
        const auto links = h->h.free_links(cut_from(cut_json));
        *out_json = copy_out(Json(std::vector<std::string>(links.begin(), links.end())).dump());
    });
}

qev_status qev_history_validate(const qev_history* h, char** out_json) {
    return guarded([&] {
        require(h, "history");
        require(out_json, "out");
        Json out = Json::array();
        for (const auto& v : h->h.validate()) out.push_back({{"kind", v.kind}, {"id", v.id}, {"message", v.message}});
        *out_json = copy_out(out.dump());
    });
}

qev_status qev_event_probability(const qev_history* h, const char* cut_json, const char* candidate_json,
                                 double* out) {
    return guarded([&] {
        require(h, "history");
        require(out, "out");
        const auto e = candidate_from(candidate_json);
        *out = qevent::event_probability(qevent::cut_state(h->h, cut_from(cut_json)), e);
    });
}

qev_status qev_joint_probability(const qev_history* h, const char* cut_json, const char* candidates_json,
                                 double* out) {
    return guarded([&] {
        require(h, "history");
        require(out, "out");
        require(candidates_json, "candidates");
        const Json arr = qevent::io::parse_text(candidates_json);
        if (!arr.is_array()) throw qevent::Error(qevent::ErrorCode::Parse, "/: expected an array of candidates");
        std::vector<qevent::CandidateEvent> es;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            es.push_back(qevent::io::candidate_from_json(arr[i], "/" + std::to_string(i)));
        }
        *out = qevent::joint_probability(qevent::cut_state(h->h, cut_from(cut_json)), es);
    });
}

qev_status qev_history_realize(qev_history* h, const char* cut_json, const char* candidate_json, char** out_id) {
    return guarded([&] {
        require(h, "history");
        const auto e = candidate_from(candidate_json);
        const auto id = qevent::realize(h->h, cut_from(cut_json), e);
        if (out_id) *out_id = copy_out(id);
    });
}

qev_status qev_scenario_parse(const char* text, qev_scenario** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        auto s = qevent::io::parse_scenario(text);
        *out = new qev_scenario{std::move(s)};
    });
}

void qev_scenario_free(qev_scenario* s) { delete s; }

qev_status qev_scenario_history(const qev_scenario* s, qev_history** out) {
    return guarded([&] {
        require(s, "scenario");
        require(out, "out");
        *out = new qev_history{s->s.history};
    });
}

size_t qev_scenario_alternative_set_count(const qev_scenario* s) {
    return s ? s->s.alternative_sets.size() : 0;
}

void qev_run_options_init(qev_run_options* o) {
    if (!o) return;
    o->seed = 0;
    o->runs = 100000;
    o->replicas = 1;
    o->format = QEV_FORMAT_JSON;
}

void qev_thermal_args_init(qev_thermal_args* a) {
    if (!a) return;
    const qevent::thermal::LatticeModel m;
    a->sites = m.sites;
    a->box_length = m.box_length;
    a->mass = m.mass;
    a->hbar = m.hbar;
    a->beta = m.beta;
    a->temperature_k = 0.0;
    a->mass_g = 0.0;
    a->time_samples = 1;
    a->time_step = 0.0;
}

void qev_cells_args_init(qev_cells_args* a) {
    if (!a) return;
    const qevent::quasilocal::SweepConfig c;
    a->sites = c.grid.sites;
    a->box_length = c.grid.box_length;
    a->hbar = c.grid.hbar;
    a->tau_scale = c.tau_scale;
    a->smoothing_ratio = c.smoothing_ratio;
    a->cell_widths = nullptr;
    a->cell_width_count = 0;
    a->packet_center = c.packet_center;
    a->packet_width = c.packet_width;
}

qev_status qev_run_epr(double theta_deg, const qev_run_options* o, char** out) {
    return guarded([&] {
        require(out, "out");
        const auto opt = defaults_if_null(o);
        qevent::report::EprArgs args{theta_deg, opt.runs, opt.seed, opt.replicas};
        *out = copy_out(qevent::report::render(qevent::report::run_epr(args), format_of(&opt)));
    });
}

qev_status qev_run_chsh(double a_deg, double a_prime_deg, double b_deg, double b_prime_deg,
                        const qev_run_options* o, char** out) {
    return guarded([&] {
        require(out, "out");
        const auto opt = defaults_if_null(o);
        qevent::report::ChshArgs args{a_deg, a_prime_deg, b_deg, b_prime_deg};
        *out = copy_out(qevent::report::render(qevent::report::run_chsh(args), format_of(&opt)));
    });
}

qev_status qev_run_simulate(const char* scenario_text, const char* scenario_path, const qev_run_options* o,
                            char** out) {
    return guarded([&] {
        require(scenario_text, "scenario text");
        require(out, "out");
        const auto opt = defaults_if_null(o);
        qevent::report::SimulateArgs args;
        args.scenario_text = scenario_text;
        args.scenario_path = scenario_path ? scenario_path : "";
        args.runs = opt.runs;
        args.seed = opt.seed;
        args.replicas = opt.replicas;
        *out = copy_out(qevent::report::render(qevent::report::run_simulate(args), format_of(&opt)));
    });
}

qev_status qev_run_thermal(const qev_thermal_args* a, const qev_run_options* o, char** out) {
    return guarded([&] {
        require(a, "thermal args");
        require(out, "out");
        const auto opt = defaults_if_null(o);
        qevent::report::ThermalArgs args;
        args.model.sites = a->sites;
        args.model.box_length = a->box_length;
        args.model.mass = a->mass;
        args.model.hbar = a->hbar;
        args.model.beta = a->beta;
        if (a->temperature_k > 0.0) {
            args.temperature_k = a->temperature_k;
            if (a->mass_g > 0.0) args.mass_g = a->mass_g;
        }
        args.time_samples = a->time_samples;
        args.time_step = a->time_step;
        *out = copy_out(qevent::report::render(qevent::report::run_thermal(args), format_of(&opt)));
    });
}

qev_status qev_run_cells(const qev_cells_args* a, const qev_run_options* o, char** out) {
    return guarded([&] {
        require(a, "cells args");
        require(out, "out");
        const auto opt = defaults_if_null(o);
        qevent::report::CellsArgs args;
        auto& c = args.sweep;
        c.grid = qevent::PeriodicGrid{a->sites, a->box_length, a->hbar};
        c.tau_scale = a->tau_scale;
        c.smoothing_ratio = a->smoothing_ratio;
        if (a->cell_widths) c.cell_widths.assign(a->cell_widths, a->cell_widths + a->cell_width_count);
        c.packet_center = a->packet_center;
        c.packet_width = a->packet_width;
        *out = copy_out(qevent::report::render(qevent::report::run_cells(args), format_of(&opt)));
    });
}

}  // extern "C"
