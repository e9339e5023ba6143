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

/*
 * C interface to the qevent library.
 *
 * Every function returning qev_status reports failures through the status and
 * a thread-local message (qev_last_error). Strings handed out through char**
 * are heap-allocated, NUL-terminated, and must be released with
 * qev_string_free. Handles are opaque and owned by the caller.
 *
 * Cuts are passed as JSON arrays of event ids, candidate events as
 *   {"id": "4", "c": [re, im], "bra": [V, ...], "ket": V}
 * and vectors V as
 *   {"labels": [{"link": "a", "space": "spin", "dim": 2}], "amps": [[re, im], ...]}.
 */
#ifndef QEVENT_QEVENT_H
#define QEVENT_QEVENT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QEVENT_BUILDING_LIBRARY)
#    define QEV_API __declspec(dllexport)
#  else
#    define QEV_API __declspec(dllimport)
#  endif
#else
#  define QEV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qev_status {
    QEV_OK = 0,
    QEV_INVALID_ARGUMENT = 1,
    QEV_DUPLICATE_LABEL = 2,
    QEV_MISSING_LABEL = 3,
    QEV_DIMENSION_MISMATCH = 4,
    QEV_NON_UNIT_VECTOR = 5,
    QEV_LABEL_COLLISION = 6,
    QEV_UNKNOWN_EVENT = 7,
    QEV_DUPLICATE_EVENT = 8,
    QEV_INVALID_CUT = 9,
    QEV_OVERLAPPING_BACKWARD_LINKS = 10,
    QEV_NOT_EXHAUSTIVE = 11,
    QEV_PROBABILITY_OVERFLOW = 12,
    QEV_ZERO_PROBABILITY_EVENT = 13,
    QEV_LINK_ALREADY_ESTABLISHED = 14,
    QEV_PARSE = 15,
    QEV_NO_MATCH = 16,
    QEV_PARTITION_NOT_UNITY = 17,
    QEV_ZERO_NORM_BRANCH = 18,
    QEV_OUT_OF_MEMORY = 98,
    QEV_INTERNAL = 99
} qev_status;

typedef enum qev_format { QEV_FORMAT_JSON = 0, QEV_FORMAT_CSV = 1 } qev_format;

typedef struct qev_history qev_history;
typedef struct qev_scenario qev_scenario;

QEV_API const char* qev_version(void);
QEV_API const char* qev_status_name(qev_status status);
/* Message of the last failure on this thread; "" after a success. */
QEV_API const char* qev_last_error(void);
QEV_API void qev_string_free(char* s);

/* ---- histories ---- */

QEV_API qev_status qev_history_new(qev_history** out);
QEV_API qev_status qev_history_from_json(const char* json, qev_history** out);
QEV_API qev_status qev_history_clone(const qev_history* h, qev_history** out);
QEV_API void qev_history_free(qev_history* h);
QEV_API qev_status qev_history_to_json(const qev_history* h, char** out);

/* requested_id may be NULL for an automatic id. */
QEV_API qev_status qev_history_add_initial_event(qev_history* h, const char* vector_json, const char* requested_id,
                                                 char** out_id);
/* *out_saturated is 1 when every forward link of the event is established. */
QEV_API qev_status qev_history_saturated(const qev_history* h, const char* event_id, int* out_saturated);
QEV_API qev_status qev_history_free_links(const qev_history* h, const char* cut_json, char** out_json);
/* JSON array of {"kind", "id", "message"}; empty when the history is sound. */
QEV_API qev_status qev_history_validate(const qev_history* h, char** out_json);

QEV_API qev_status qev_event_probability(const qev_history* h, const char* cut_json, const char* candidate_json,
                                         double* out);
/* candidates_json is a JSON array of candidate events. */
QEV_API qev_status qev_joint_probability(const qev_history* h, const char* cut_json, const char* candidates_json,
                                         double* out);
QEV_API qev_status qev_history_realize(qev_history* h, const char* cut_json, const char* candidate_json,
                                       char** out_id);

/* ---- scenarios ---- */

QEV_API qev_status qev_scenario_parse(const char* text, qev_scenario** out);
QEV_API void qev_scenario_free(qev_scenario* s);
/* Copy of the scenario's initial history. */
QEV_API qev_status qev_scenario_history(const qev_scenario* s, qev_history** out);
QEV_API size_t qev_scenario_alternative_set_count(const qev_scenario* s);

/* ---- report runs ---- */

typedef struct qev_run_options {
    uint64_t seed;     /* default 0 */
    uint64_t runs;     /* Monte Carlo draws; default 100000 */
    uint32_t replicas; /* independent seeded streams, >= 1; default 1 */
    qev_format format; /* default JSON */
} qev_run_options;

QEV_API void qev_run_options_init(qev_run_options* o);

typedef struct qev_thermal_args {
    size_t sites;       /* default 256 */
    double box_length;  /* default 40 */
    double mass;        /* default 1 */
    double hbar;        /* default 1 */
    double beta;        /* default 1 */
    /* When > 0, replaces the model by a CGS model at this temperature. */
    double temperature_k;
    /* Mass in grams for the CGS model; <= 0 selects the proton mass. */
    double mass_g;
    size_t time_samples; /* default 1 */
    double time_step;    /* default 0 */
} qev_thermal_args;

QEV_API void qev_thermal_args_init(qev_thermal_args* a);

typedef struct qev_cells_args {
    size_t sites;            /* default 4096 */
    double box_length;       /* default 1 */
    double hbar;             /* default 1 */
    double tau_scale;        /* 0: a quarter of the largest lattice momentum */
    double smoothing_ratio;  /* default 1/12 */
    const double* cell_widths; /* NULL: the default two-decade sweep */
    size_t cell_width_count;
    double packet_center;    /* fraction of the box; default 0.5 */
    double packet_width;     /* 0: a sixteenth of the box */
} qev_cells_args;

QEV_API void qev_cells_args_init(qev_cells_args* a);

QEV_API qev_status qev_run_epr(double theta_deg, const qev_run_options* o, char** out);
QEV_API qev_status qev_run_chsh(double a_deg, double a_prime_deg, double b_deg, double b_prime_deg,
                                const qev_run_options* o, char** out);
/* scenario_path is only echoed in the report and may be NULL. */
QEV_API qev_status qev_run_simulate(const char* scenario_text, const char* scenario_path, const qev_run_options* o,
                                    char** out);
QEV_API qev_status qev_run_thermal(const qev_thermal_args* a, const qev_run_options* o, char** out);
QEV_API qev_status qev_run_cells(const qev_cells_args* a, const qev_run_options* o, char** out);

#ifdef __cplusplus
}
#endif

#endif /* QEVENT_QEVENT_H */
