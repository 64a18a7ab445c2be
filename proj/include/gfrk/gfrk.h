/* gfrk — linear energy-stable Runge-Kutta simulator for gradient-flow PDEs.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed by the library; every fallible call returns a gfrk_status
 * and a human-readable message is kept per thread in gfrk_last_error().
 */
#ifndef GFRK_H
#define GFRK_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gfrk_status {
    GFRK_OK = 0,
    GFRK_ERR = 1,        /* invalid argument / internal failure */
    GFRK_ERR_CONFIG = 2, /* configuration rejected */
    GFRK_ERR_SOLVER = 3, /* Krylov or Picard iteration failed */
    GFRK_ERR_IO = 5      /* file could not be read or written */
} gfrk_status;

const char* gfrk_version(void);
/* Message of the most recent failure on this thread; never NULL. */
const char* gfrk_last_error(void);
void gfrk_string_free(char* s);

/* --- configuration -------------------------------------------------- */

typedef struct gfrk_config gfrk_config;

gfrk_status gfrk_config_parse(const char* text, gfrk_config** out);
gfrk_status gfrk_config_load(const char* path, gfrk_config** out);
/* Canonical "key = value" form; free with gfrk_string_free. */
gfrk_status gfrk_config_format(const gfrk_config* cfg, char** out);
void gfrk_config_free(gfrk_config* cfg);

/* --- single runs ------------------------------------------------------ */

typedef struct gfrk_series gfrk_series;

gfrk_status gfrk_run_single(const gfrk_config* cfg, gfrk_series** out);
size_t gfrk_series_size(const gfrk_series* s);
/* row = { t, energy, energy_eq, mass, roughness } */
gfrk_status gfrk_series_row(const gfrk_series* s, size_t i, double row[5]);
gfrk_status gfrk_series_write_csv(const gfrk_series* s, const char* path);
void gfrk_series_free(gfrk_series* s);

/* --- refinement study -------------------------------------------------- */

typedef struct gfrk_refinement gfrk_refinement;

gfrk_status gfrk_run_refinement(const gfrk_config* cfg, const double* dts, size_t ndt,
                                gfrk_refinement** out);
size_t gfrk_refinement_levels(const gfrk_refinement* r);
gfrk_status gfrk_refinement_level(const gfrk_refinement* r, size_t i, double* dt, double* l2,
                                  double* linf);
gfrk_status gfrk_refinement_orders(const gfrk_refinement* r, double* order_l2,
                                   double* order_linf);
gfrk_status gfrk_refinement_write_csv(const gfrk_refinement* r, const char* path);
void gfrk_refinement_free(gfrk_refinement* r);

/* --- maximum stable time step study ------------------------------------ */

typedef struct gfrk_maxdt gfrk_maxdt;

gfrk_status gfrk_run_max_stable_dt(const gfrk_config* cfg, const double* dts, size_t ndt,
                                   double ref_dt, double threshold, gfrk_maxdt** out);
size_t gfrk_maxdt_rows(const gfrk_maxdt* m);
/* verdict: 1 correct, 0 incorrect, -1 solver failure at that dt */
gfrk_status gfrk_maxdt_row(const gfrk_maxdt* m, size_t i, double* dt, double* deviation,
                           int* verdict);
void gfrk_maxdt_free(gfrk_maxdt* m);

/* --- coarsening study ---------------------------------------------------- */

gfrk_status gfrk_run_coarsening(const gfrk_config* cfg, double window_lo, double window_hi,
                                gfrk_series** series_out, double* energy_slope,
                                double* roughness_slope);

/* --- tableau certification ---------------------------------------------- */

typedef struct gfrk_tableau_report gfrk_tableau_report;

/* name_or_path: "gauss4", "dirk4", or the path of a plain-text tableau file
 * (line 1: stage count s, then s rows of a, then one line of b). */
gfrk_status gfrk_tableau_check(const char* name_or_path, gfrk_tableau_report** out);
int gfrk_tableau_report_stages(const gfrk_tableau_report* r);
int gfrk_tableau_report_dirk(const gfrk_tableau_report* r);
double gfrk_tableau_report_m(const gfrk_tableau_report* r, int i, int j);
double gfrk_tableau_report_m_eigenvalue(const gfrk_tableau_report* r, int i);
double gfrk_tableau_report_m_min_eigenvalue(const gfrk_tableau_report* r);
/* flag: "weights_nonneg" | "algebraically_stable" | "a_psd" | "diag_positive"
 *       | "order4"; returns 0/1, or -1 for an unknown flag. */
int gfrk_tableau_report_flag(const gfrk_tableau_report* r, const char* flag);
void gfrk_tableau_report_free(gfrk_tableau_report* r);

#ifdef __cplusplus
}
#endif

#endif /* GFRK_H */
