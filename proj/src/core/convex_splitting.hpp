#pragma once

#include "core/integrator.hpp"
#include "core/model.hpp"

namespace gfrk {

// Second-order convex-splitting baselines. Both treat the convex part
// implicitly at the midpoint and extrapolate the concave part with
// 3/2 phi^n - 1/2 phi^{n-1}; the nonlinear midpoint product is resolved by
// Picard iteration, each inner solve one constant-coefficient spectral
// inversion. The first step of a run substitutes phi^{n-1} := phi^n.
//
// If the plain iteration is detected diverging it restarts once with a
// constant stabilization shift (same fixed point) within the same iteration
// budget; PicardNonConvergence is raised after 200 total iterations.

struct Cs2Options {
    double tol = 1e-10;
    int max_iters = 200;
};

Field cs2_step_ch(const GradientFlowModel& m, SpectralWorkspace& ws, const Field& phi_n,
                  const Field& phi_nm1, double dt, const Field* forcing_mid = nullptr,
                  const Cs2Options& opt = {});

Field cs2_step_mbe(const GradientFlowModel& m, SpectralWorkspace& ws, const Field& phi_n,
                   const Field& phi_nm1, double dt, const Field* forcing_mid = nullptr,
                   const Cs2Options& opt = {});

}  // namespace gfrk
