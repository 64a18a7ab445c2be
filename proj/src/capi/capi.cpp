#include "gfrk/gfrk.h"

#include <cstring>
#include <string>

#include "core/config.hpp"
#include "core/diagnostics.hpp"
#include "core/experiments.hpp"
#include "core/tableau.hpp"

namespace {

thread_local std::string g_last_error = "no error";

gfrk_status set_error(gfrk_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
gfrk_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const gfrk::ConfigError& e) {
        return set_error(GFRK_ERR_CONFIG, e.what());
    } catch (const gfrk::SolverError& e) {
        return set_error(GFRK_ERR_SOLVER, e.what());
    } catch (const std::exception& e) {
        return set_error(GFRK_ERR, e.what());
    } catch (...) {
        return set_error(GFRK_ERR, "unknown error");
    }
}

}  // namespace

struct gfrk_config {
    gfrk::RunConfig cfg;
};
struct gfrk_series {
    gfrk::TimeSeries series;
};
struct gfrk_refinement {
    gfrk::RefinementResult result;
};
struct gfrk_maxdt {
    std::vector<gfrk::MaxDtRow> rows;
};
struct gfrk_tableau_report {
    gfrk::ButcherTableau tableau;
    gfrk::StabilityReport report;
    bool order4 = false;
};

extern "C" {

const char* gfrk_version(void) { return "0.1.0"; }

const char* gfrk_last_error(void) { return g_last_error.c_str(); }

void gfrk_string_free(char* s) { delete[] s; }

gfrk_status gfrk_config_parse(const char* text, gfrk_config** out) {
    if (!text || !out) return set_error(GFRK_ERR, "gfrk_config_parse: NULL argument");
    return guarded([&] {
        *out = new gfrk_config{gfrk::parse_config(text)};
        return GFRK_OK;
    });
}

gfrk_status gfrk_config_load(const char* path, gfrk_config** out) {
    if (!path || !out) return set_error(GFRK_ERR, "gfrk_config_load: NULL argument");
    return guarded([&] {
        *out = new gfrk_config{gfrk::load_config(path)};
        return GFRK_OK;
    });
}

gfrk_status gfrk_config_format(const gfrk_config* cfg, char** out) {
    if (!cfg || !out) return set_error(GFRK_ERR, "gfrk_config_format: NULL argument");
    return guarded([&] {
        std::string s = gfrk::print_config(cfg->cfg);
        *out = new char[s.size() + 1];
        std::memcpy(*out, s.c_str(), s.size() + 1);
        return GFRK_OK;
    });
}

void gfrk_config_free(gfrk_config* cfg) { delete cfg; }

gfrk_status gfrk_run_single(const gfrk_config* cfg, gfrk_series** out) {
    if (!cfg || !out) return set_error(GFRK_ERR, "gfrk_run_single: NULL argument");
    return guarded([&] {
        *out = new gfrk_series{gfrk::run_single(cfg->cfg).series};
        return GFRK_OK;
    });
}

size_t gfrk_series_size(const gfrk_series* s) { return s ? s->series.rows.size() : 0; }

gfrk_status gfrk_series_row(const gfrk_series* s, size_t i, double row[5]) {
    if (!s || !row) return set_error(GFRK_ERR, "gfrk_series_row: NULL argument");
    if (i >= s->series.rows.size()) return set_error(GFRK_ERR, "gfrk_series_row: index out of range");
    const gfrk::SeriesRow& r = s->series.rows[i];
    row[0] = r.t;
    row[1] = r.energy;
    row[2] = r.energy_eq;
    row[3] = r.mass;
    row[4] = r.roughness;
    return GFRK_OK;
}

gfrk_status gfrk_series_write_csv(const gfrk_series* s, const char* path) {
    if (!s || !path) return set_error(GFRK_ERR, "gfrk_series_write_csv: NULL argument");
    return guarded([&] {
        gfrk::write_series_csv(path, s->series);
        return GFRK_OK;
    });
}

void gfrk_series_free(gfrk_series* s) { delete s; }

gfrk_status gfrk_run_refinement(const gfrk_config* cfg, const double* dts, size_t ndt,
                                gfrk_refinement** out) {
    if (!cfg || !dts || !out) return set_error(GFRK_ERR, "gfrk_run_refinement: NULL argument");
    return guarded([&] {
        std::vector<double> v(dts, dts + ndt);
        *out = new gfrk_refinement{gfrk::run_refinement(cfg->cfg, v)};
        return GFRK_OK;
    });
}

size_t gfrk_refinement_levels(const gfrk_refinement* r) { return r ? r->result.dts.size() : 0; }

gfrk_status gfrk_refinement_level(const gfrk_refinement* r, size_t i, double* dt, double* l2,
                                  double* linf) {
    if (!r) return set_error(GFRK_ERR, "gfrk_refinement_level: NULL argument");
    if (i >= r->result.dts.size())
        return set_error(GFRK_ERR, "gfrk_refinement_level: index out of range");
    if (dt) *dt = r->result.dts[i];
    if (l2) *l2 = r->result.l2_errors[i];
    if (linf) *linf = r->result.linf_errors[i];
    return GFRK_OK;
}

gfrk_status gfrk_refinement_orders(const gfrk_refinement* r, double* order_l2,
                                   double* order_linf) {
    if (!r) return set_error(GFRK_ERR, "gfrk_refinement_orders: NULL argument");
    if (order_l2) *order_l2 = r->result.fitted_order_l2;
    if (order_linf) *order_linf = r->result.fitted_order_linf;
    return GFRK_OK;
}

gfrk_status gfrk_refinement_write_csv(const gfrk_refinement* r, const char* path) {
    if (!r || !path) return set_error(GFRK_ERR, "gfrk_refinement_write_csv: NULL argument");
    return guarded([&] {
        gfrk::write_refinement_csv(path, r->result);
        return GFRK_OK;
    });
}

void gfrk_refinement_free(gfrk_refinement* r) { delete r; }

gfrk_status gfrk_run_max_stable_dt(const gfrk_config* cfg, const double* dts, size_t ndt,
                                   double ref_dt, double threshold, gfrk_maxdt** out) {
    if (!cfg || !dts || !out) return set_error(GFRK_ERR, "gfrk_run_max_stable_dt: NULL argument");
    return guarded([&] {
        std::vector<double> v(dts, dts + ndt);
        *out = new gfrk_maxdt{gfrk::run_max_stable_dt(cfg->cfg, v, ref_dt, threshold)};
        return GFRK_OK;
    });
}

size_t gfrk_maxdt_rows(const gfrk_maxdt* m) { return m ? m->rows.size() : 0; }

gfrk_status gfrk_maxdt_row(const gfrk_maxdt* m, size_t i, double* dt, double* deviation,
                           int* verdict) {
    if (!m) return set_error(GFRK_ERR, "gfrk_maxdt_row: NULL argument");
    if (i >= m->rows.size()) return set_error(GFRK_ERR, "gfrk_maxdt_row: index out of range");
    const gfrk::MaxDtRow& r = m->rows[i];
    if (dt) *dt = r.dt;
    if (deviation) *deviation = r.deviation;
    if (verdict) *verdict = r.verdict == "correct" ? 1 : (r.verdict == "incorrect" ? 0 : -1);
    return GFRK_OK;
}

void gfrk_maxdt_free(gfrk_maxdt* m) { delete m; }

gfrk_status gfrk_run_coarsening(const gfrk_config* cfg, double window_lo, double window_hi,
                                gfrk_series** series_out, double* energy_slope,
                                double* roughness_slope) {
    if (!cfg) return set_error(GFRK_ERR, "gfrk_run_coarsening: NULL argument");
    return guarded([&] {
        gfrk::CoarseningResult res = gfrk::run_coarsening(cfg->cfg, window_lo, window_hi);
        if (energy_slope) *energy_slope = res.energy_slope;
        if (roughness_slope) *roughness_slope = res.roughness_slope;
        if (series_out) *series_out = new gfrk_series{std::move(res.series)};
        return GFRK_OK;
    });
}

gfrk_status gfrk_tableau_check(const char* name_or_path, gfrk_tableau_report** out) {
    if (!name_or_path || !out) return set_error(GFRK_ERR, "gfrk_tableau_check: NULL argument");
    return guarded([&] {
        std::string arg = name_or_path;
        gfrk::ButcherTableau t;
        if (arg == "gauss4" || arg == "dirk4")
            t = gfrk::tableau_by_name(arg);
        else
            t = gfrk::tableau_from_file(arg);
        auto rep = gfrk::stability_report(t);
        bool order4 = gfrk::check_order_conditions(t, 4);
        *out = new gfrk_tableau_report{std::move(t), std::move(rep), order4};
        return GFRK_OK;
    });
}

int gfrk_tableau_report_stages(const gfrk_tableau_report* r) { return r ? r->tableau.s : 0; }

int gfrk_tableau_report_dirk(const gfrk_tableau_report* r) {
    return r && r->tableau.kind == gfrk::TableauKind::DiagonallyImplicit ? 1 : 0;
}

double gfrk_tableau_report_m(const gfrk_tableau_report* r, int i, int j) {
    if (!r || i < 0 || j < 0 || i >= r->tableau.s || j >= r->tableau.s) return 0.0;
    return r->report.m[i * r->tableau.s + j];
}

double gfrk_tableau_report_m_eigenvalue(const gfrk_tableau_report* r, int i) {
    if (!r || i < 0 || i >= r->tableau.s) return 0.0;
    return r->report.m_eigenvalues[i];
}

double gfrk_tableau_report_m_min_eigenvalue(const gfrk_tableau_report* r) {
    return r ? r->report.m_min_eigenvalue : 0.0;
}

int gfrk_tableau_report_flag(const gfrk_tableau_report* r, const char* flag) {
    if (!r || !flag) return -1;
    std::string f = flag;
    if (f == "weights_nonneg") return r->report.weights_nonneg ? 1 : 0;
    if (f == "algebraically_stable") return r->report.algebraically_stable ? 1 : 0;
    if (f == "a_psd") return r->report.a_psd ? 1 : 0;
    if (f == "diag_positive") return r->report.diag_positive ? 1 : 0;
    if (f == "order4") return r->order4 ? 1 : 0;
    return -1;
}

void gfrk_tableau_report_free(gfrk_tableau_report* r) { delete r; }

}  // extern "C"
