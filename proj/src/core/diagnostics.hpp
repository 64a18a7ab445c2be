#pragma once

#include <string>
#include <vector>

#include "core/integrator.hpp"
#include "core/model.hpp"
#include "core/tableau.hpp"

namespace gfrk {

struct SeriesRow {
    double t;
    double energy;     // original free energy
    double energy_eq;  // quadratized free energy
    double mass;
    double roughness;
};

struct TimeSeries {
    std::vector<SeriesRow> rows;
    void append(const SeriesRow& r);  // enforces strictly increasing t
};

// Header "t,energy,energy_eq,mass,roughness", 17 significant digits.
std::string series_to_csv(const TimeSeries& s);
void write_series_csv(const std::string& path, const TimeSeries& s);
TimeSeries parse_series_csv(const std::string& text);

struct RefinementResult {
    std::vector<double> dts;  // strictly decreasing
    std::vector<double> l2_errors;
    std::vector<double> linf_errors;
    double fitted_order_l2 = 0.0;
    double fitted_order_linf = 0.0;
};

// Header "dt,l2,linf".
std::string refinement_to_csv(const RefinementResult& r);
void write_refinement_csv(const std::string& path, const RefinementResult& r);
RefinementResult parse_refinement_csv(const std::string& text);

double l2_error(const Field& num, const Field& exact);
double linf_error(const Field& num, const Field& exact);
// RMS deviation from the spatial mean.
double roughness(const Field& phi);
double mass(const Field& phi);

// Least-squares slope of log(error) vs log(dt); needs >= 3 levels.
std::pair<double, double> fit_order(const RefinementResult& r);
// Generic log-log least-squares slope, used by the coarsening study.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// |F^{n+1} - F^n - dt sum_i b_i (mu_i, G mu_i)| with mu_i rebuilt from the
// stage record; defined for the Gauss table only (M = 0 makes it an identity).
double gauss_dissipation_residual(const GradientFlowModel& m, SpectralWorkspace& ws,
                                  const ButcherTableau& t, const StageRecord& rec,
                                  const EQState& before, const EQState& after, double dt);

}  // namespace gfrk
