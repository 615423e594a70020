/* SPDX-License-Identifier: Apache-2.0 */
#ifndef EMSKIN_EMSKIN_H
#define EMSKIN_EMSKIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(EMSKIN_BUILDING_LIBRARY)
#define EMS_API __attribute__((visibility("default")))
#else
#define EMS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ems_status {
  EMS_OK = 0,
  EMS_ERR_INVALID_ARGUMENT = 1,
  EMS_ERR_RANGE = 2,
  EMS_ERR_CONFIG = 3,
  EMS_ERR_NUMERICAL = 4,
  EMS_ERR_IO = 5,
  EMS_ERR_INTERNAL = 6
} ems_status;

typedef enum ems_format { EMS_FORMAT_CSV = 0, EMS_FORMAT_JSON = 1 } ems_format;

/* Field models accepted by ems_reflected_field. */
typedef enum ems_field_model {
  EMS_MODEL_GENERALIZED = 0,
  EMS_MODEL_FAR_FIELD = 1,
  EMS_MODEL_ORACLE = 2
} ems_field_model;

typedef enum ems_method { EMS_METHOD_USM = 0, EMS_METHOD_FFM = 1 } ems_method;

typedef struct ems_scenario ems_scenario;
typedef struct ems_bundle ems_bundle;
typedef struct ems_table ems_table;

/* Message of the last failing call on this thread; never NULL. */
EMS_API const char* ems_last_error(void);
EMS_API const char* ems_version(void);
/* 0 restores the hardware default. */
EMS_API ems_status ems_set_threads(unsigned threads);

/* Any output pointer may be NULL. */
EMS_API ems_status ems_region_boundaries(size_t m, size_t n, double dx, double dy, double frequency,
                                         double* r_nf, double* r_ff, double* diameter);
EMS_API ems_status ems_direction_cosines(double theta, double phi, double* u, double* v, double* w);

EMS_API ems_status ems_scenario_load(const char* path, ems_scenario** out);
EMS_API ems_status ems_scenario_set_seed(ems_scenario* scenario, uint64_t seed);
/* Writes the 16-hex-digit canonical config hash plus terminator (buf_len >= 17). */
EMS_API ems_status ems_scenario_hash(const ems_scenario* scenario, char* buf, size_t buf_len);
EMS_API void ems_scenario_free(ems_scenario* scenario);

EMS_API ems_status ems_run_analyze(const ems_scenario* scenario, ems_bundle** out);
EMS_API ems_status ems_run_synthesize(const ems_scenario* scenario, ems_bundle** out);
EMS_API ems_status ems_run_sweep(const ems_scenario* scenario, ems_bundle** out);

EMS_API ems_status ems_bundle_emit(const ems_bundle* bundle, const char* dir, ems_format format);
EMS_API size_t ems_bundle_table_count(const ems_bundle* bundle);
/* Borrowed pointers valid until ems_bundle_free. NULL when out of range. */
EMS_API const char* ems_bundle_table_name(const ems_bundle* bundle, size_t index);
EMS_API const char* ems_bundle_config_hash(const ems_bundle* bundle);
EMS_API double ems_bundle_wall_time(const ems_bundle* bundle);
EMS_API ems_status ems_bundle_table_shape(const ems_bundle* bundle, const char* table, size_t* rows,
                                          size_t* cols);
EMS_API const char* ems_bundle_column_name(const ems_bundle* bundle, const char* table, size_t col);
/* Numeric cell; EMS_ERR_INVALID_ARGUMENT for text cells. */
EMS_API ems_status ems_bundle_table_value(const ems_bundle* bundle, const char* table, size_t row,
                                          size_t col, double* out);
/* Any cell rendered as text (numbers with 17 significant digits). */
EMS_API ems_status ems_bundle_table_text(const ems_bundle* bundle, const char* table, size_t row,
                                         size_t col, char* buf, size_t buf_len);
EMS_API void ems_bundle_free(ems_bundle* bundle);

EMS_API ems_status ems_table_surrogate(double g_min, double g_max, size_t entries, double resonance_center,
                                       double q_factor, double frequency, ems_table** out);
EMS_API ems_status ems_table_load_csv(const char* path, ems_table** out);
EMS_API ems_status ems_table_save_csv(const ems_table* table, const char* path);
EMS_API ems_status ems_table_range(const ems_table* table, double* g_min, double* g_max, size_t* entries);
/* psi: re/im pairs of e_xx, e_yy, e_zz, h_xx, h_yy, h_zz (12 doubles);
   gamma: re/im pairs of pp, ps, sp, ss (8 doubles). */
EMS_API ems_status ems_table_lookup(const ems_table* table, double g, double* psi, double* gamma);
EMS_API void ems_table_free(ems_table* table);

/* currents: 8 doubles per cell (re/im of Jex, Jey, Jhx, Jhy), cell index m*n_count + n.
   out: re/im of F_theta then F_phi. valid may be NULL. */
EMS_API ems_status ems_reflected_field(size_t m, size_t n, double dx, double dy, double frequency,
                                       const double* currents, double r, double theta, double phi,
                                       ems_field_model model, double* out, int* valid);
/* out: m*n wrapped phases in radians. */
EMS_API ems_status ems_target_phase(size_t m, size_t n, double dx, double dy, double frequency, double r,
                                    double theta, double phi, ems_method method, double* out);

#ifdef __cplusplus
}
#endif

#endif
