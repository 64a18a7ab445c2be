#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/diagnostics.hpp"

namespace gfrk {

GradientFlowModel make_model(const RunConfig& cfg, const GridPtr& grid);

// mms -> sin(x)sin(y); cosine_combo -> the benchmark cosine profile with
// coordinates scaled to the domain; random(a, seed) -> a * uniform(-1, 1)
// per node from SplitMix64 in row-major order; file -> snapshot loader.
Field build_initial(const RunConfig& cfg, const GridPtr& grid, SpectralWorkspace& ws);

struct RunOutput {
    TimeSeries series;
    Field final_phi;
    double final_t = 0.0;
};

// Startup step, then uniform stepping to t_end; samples the series every
// step, writes snapshots at the configured times and the series CSV when a
// path is set. Solver failures are rethrown with the failing step index.
RunOutput run_single(const RunConfig& cfg);

// One run per dt against the manufactured solution, errors at t_end, then a
// least-squares order fit. Requires initial = mms and forcing = mms.
RefinementResult run_refinement(const RunConfig& cfg, const std::vector<double>& dts);

struct MaxDtRow {
    double dt = 0.0;
    double deviation = 0.0;  // relative L2 distance from the reference at t_end
    std::string verdict;     // "correct" | "incorrect" | "solver_failed"
};

// Sweeps dts (descending) against a fine-step reference run of the same
// configuration; "correct" when the relative L2 deviation is below the
// threshold. A solver failure at a probe dt is recorded, not fatal.
std::vector<MaxDtRow> run_max_stable_dt(const RunConfig& cfg, const std::vector<double>& dts,
                                        double ref_dt, double threshold = 0.05);

struct CoarseningResult {
    TimeSeries series;
    double energy_slope = 0.0;
    double roughness_slope = 0.0;
};

// Log-log least-squares slopes of energy and roughness over the window.
CoarseningResult run_coarsening(const RunConfig& cfg, double window_lo, double window_hi);

}  // namespace gfrk
