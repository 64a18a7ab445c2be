#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "core/gmres.hpp"
#include "core/model.hpp"
#include "core/tableau.hpp"

namespace gfrk {

struct SolverConfig {
    double krylov_rel_tol = 1e-12;
    int krylov_max_iters = 500;
    int gmres_restart = 50;
    int pc_iters = 5;     // prediction sweeps M
    double pc_tol = 1e-10;  // early-stop TOL on max_i ||phi_i^{m+1} - phi_i^m||_inf
};

struct SolverError : std::runtime_error {
    enum class Kind { KrylovNonConvergence, PicardNonConvergence };
    SolverError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
    Kind kind;
};

/// Stage data of one completed step: stage values, slopes, and the frozen
/// extrapolants the variable coefficients were evaluated at.
struct StageRecord {
    std::vector<Field> phi_stages;
    std::vector<Field> q_stages;
    std::vector<Field> k;
    std::vector<Field> l;
    std::vector<Field> phi_star;
    int gmres_iters = 0;
    int pc_sweeps = 0;
    double pc_last_increment = 0.0;
};

/// What the extrapolation needs from step n-1: the state at its start and
/// its stage record. Invalid before the first completed step.
struct History {
    EQState prev_state;
    StageRecord prev_stages;
    bool valid = false;
};

/// Linear energy-quadratized Runge-Kutta stepping for one model/tableau
/// pair. Owns the transform workspace and the per-tableau extrapolation
/// stencils; a stepper advances one simulation sequentially.
class LeqrkStepper {
  public:
    LeqrkStepper(const GradientFlowModel& model, ButcherTableau tableau, SolverConfig cfg);

    // Forcing added to the phi equation, evaluated at stage times.
    void set_forcing(std::function<Field(double)> forcing) { forcing_ = std::move(forcing); }

    const ButcherTableau& tableau() const { return tableau_; }
    const SolverConfig& config() const { return cfg_; }
    SpectralWorkspace& workspace() { return ws_; }

    // Extrapolants at t_n + c_i dt from the previous step's stages; the
    // same stencil is applied to the phi and q families.
    std::pair<std::vector<Field>, std::vector<Field>> extrapolate(const History& h,
                                                                  const EQState& cur) const;

    // One step with extrapolated frozen coefficients (no prediction).
    std::pair<EQState, StageRecord> leqrk_step(const EQState& state, const History& h, double dt);

    // Prediction-correction step: cfg.pc_iters constant-coefficient sweeps
    // (early stop at pc_tol), then one variable-coefficient correction.
    // Falls back to constant predictors when the history is invalid.
    std::pair<EQState, StageRecord> leqrk_pc_step(const EQState& state, const History& h,
                                                  double dt);

    // Startup: prediction-correction from constant predictors with at least
    // five sweeps; the returned record seeds a valid History.
    std::pair<EQState, StageRecord> first_step(const EQState& state0, double dt);

    // Solves the coupled linear stage system for given frozen extrapolants.
    StageRecord solve_stage_system(const EQState& state, const std::vector<Field>& phi_star,
                                   double dt);

    // Max-norm residual of the k equations for a solved record (diagnostic).
    double stage_equation_residual(const EQState& state, const StageRecord& rec, double dt);
    // Max-norm defect of phi_i = phi^n + dt sum_j a_ij k_j.
    double stage_consistency_residual(const EQState& state, const StageRecord& rec, double dt);

    const GmresResult& last_gmres() const { return last_gmres_; }

    static History make_history(const EQState& before, const StageRecord& rec);

  private:
    enum class Source { PrevState, Stage, CurState };
    struct StencilTerm {
        Source source;
        int stage = 0;
        double weight = 0.0;
    };

    std::pair<EQState, StageRecord> step_impl(const EQState& state, const History* h, double dt,
                                              int sweeps, bool constant_predictors);
    // Per-mode solve of (I - dt*sym*A) with sym the plain G∘L symbol (the
    // prediction systems) or an augmented one (preconditioning).
    void mode_block_solve(const std::vector<Field>& rhs, double dt,
                          const std::vector<double>& sym, std::vector<Field>& out);
    void constant_stage_solve(const std::vector<Field>& rhs, double dt, std::vector<Field>& out);
    // G(L + mean frozen coefficient) symbol; collapses to gl_table when the
    // extrapolants vanish and keeps the correction solve well preconditioned
    // on developed (plateau) states.
    std::vector<double> preconditioner_symbol(const std::vector<StarData>& stars) const;
    std::vector<Field> stage_forcing(double t, double dt) const;

    const GradientFlowModel& model_;
    ButcherTableau tableau_;
    SolverConfig cfg_;
    SpectralWorkspace ws_;
    std::function<Field(double)> forcing_;
    std::vector<std::vector<StencilTerm>> stencil_;  // per stage
    GmresResult last_gmres_;
};

}  // namespace gfrk
