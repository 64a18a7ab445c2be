#include "core/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "core/convex_splitting.hpp"
#include "core/snapshot.hpp"

namespace gfrk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::string snapshot_path(const RunConfig& cfg, int step) {
    char name[64];
    std::snprintf(name, sizeof(name), "/snapshot_step%06d.gfk", step);
    return cfg.snapshot_dir + name;
}

}  // namespace

GradientFlowModel make_model(const RunConfig& cfg, const GridPtr& grid) {
    if (cfg.model == "cahn_hilliard")
        return GradientFlowModel::cahn_hilliard_eps_sq(grid, cfg.lambda, cfg.eps_sq(), cfg.gamma);
    return GradientFlowModel::mbe_eps_sq(grid, cfg.lambda, cfg.eps_sq(), cfg.gamma);
}

Field build_initial(const RunConfig& cfg, const GridPtr& grid, SpectralWorkspace& ws) {
    (void)ws;
    if (cfg.initial == "mms") return GradientFlowModel::mms_exact(grid, 0.0);

    if (cfg.initial == "cosine_combo") {
        Field f(grid);
        for (int i = 0; i < grid->nx(); ++i) {
            double x = kTwoPi * grid->x(i) / grid->lx();
            for (int j = 0; j < grid->ny(); ++j) {
                double y = kTwoPi * grid->y(j) / grid->ly();
                double c43 = std::cos(4.0 * x) * std::cos(3.0 * y);
                f(i, j) = 0.05 * (std::cos(3.0 * x) * std::cos(4.0 * y) + c43 * c43 +
                                  std::cos(x - 5.0 * y) * std::cos(2.0 * x - y));
            }
        }
        return f;
    }

    if (cfg.initial == "random") {
        Field f(grid);
        std::uint64_t state = cfg.initial_seed;
        for (int n = 0; n < f.size(); ++n) {
            double u = (splitmix64(state) >> 11) * 0x1.0p-53;  // [0, 1)
            f[n] = cfg.initial_amplitude * (2.0 * u - 1.0);
        }
        return f;
    }

    Snapshot snap = read_snapshot(cfg.initial_file);
    if (!snap.field.grid()->same_as(*grid))
        throw ConfigError("initial file '" + cfg.initial_file +
                          "' does not match the configured grid");
    return snap.field;
}

RunOutput run_single(const RunConfig& cfg) {
    auto grid = Grid::make(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    GradientFlowModel model = make_model(cfg, grid);
    const int nsteps = cfg.steps();

    std::vector<int> snapshot_steps;
    for (double t : cfg.snapshot_times)
        snapshot_steps.push_back(static_cast<int>(std::llround(t / cfg.dt)));

    RunOutput out;
    auto snapshot_if_due = [&](int step, const Field& phi) {
        for (std::size_t i = 0; i < snapshot_steps.size(); ++i)
            if (snapshot_steps[i] == step)
                write_snapshot(snapshot_path(cfg, step), phi, cfg.snapshot_times[i]);
    };

    try {
        if (cfg.scheme == "cs2") {
            SpectralWorkspace ws(grid);
            Field phi = build_initial(cfg, grid, ws);
            Field phi_prev = phi;  // first step substitutes phi^{n-1} := phi^n
            auto sample = [&](double t, const Field& p) {
                EQState s{p, model.init_q(ws, p), t};
                out.series.append({t, model.energy_original(ws, p),
                                   model.energy_quadratized(ws, s), mass(p), roughness(p)});
            };
            sample(0.0, phi);
            snapshot_if_due(0, phi);
            for (int step = 1; step <= nsteps; ++step) {
                double t_prev = (step - 1) * cfg.dt;
                Field f;
                const Field* fp = nullptr;
                if (cfg.forcing == "mms") {
                    f = model.mms_forcing(t_prev + 0.5 * cfg.dt);
                    fp = &f;
                }
                Field next = model.kind() == ModelKind::CahnHilliard
                                 ? cs2_step_ch(model, ws, phi, phi_prev, cfg.dt, fp)
                                 : cs2_step_mbe(model, ws, phi, phi_prev, cfg.dt, fp);
                phi_prev = std::move(phi);
                phi = std::move(next);
                sample(step * cfg.dt, phi);
                snapshot_if_due(step, phi);
            }
            out.final_phi = std::move(phi);
        } else {
            LeqrkStepper stepper(model, tableau_by_name(cfg.tableau), cfg.solver_config());
            if (cfg.forcing == "mms")
                stepper.set_forcing([&model](double t) { return model.mms_forcing(t); });

            EQState state;
            state.phi = build_initial(cfg, grid, stepper.workspace());
            state.q = model.init_q(stepper.workspace(), state.phi);
            state.t = 0.0;
            auto sample = [&](const EQState& s) {
                out.series.append({s.t, model.energy_original(stepper.workspace(), s.phi),
                                   model.energy_quadratized(stepper.workspace(), s), mass(s.phi),
                                   roughness(s.phi)});
            };
            sample(state);
            snapshot_if_due(0, state.phi);

            History h;
            for (int step = 1; step <= nsteps; ++step) {
                auto [next, rec] = h.valid ? stepper.leqrk_pc_step(state, h, cfg.dt)
                                           : stepper.first_step(state, cfg.dt);
                h = LeqrkStepper::make_history(state, rec);
                state = std::move(next);
                state.t = step * cfg.dt;
                sample(state);
                snapshot_if_due(step, state.phi);
            }
            out.final_phi = std::move(state.phi);
        }
    } catch (const SolverError& e) {
        throw SolverError(e.kind, std::string(e.what()) + " (step " +
                                      std::to_string(out.series.rows.size()) + " of " +
                                      std::to_string(nsteps) + ")");
    }

    out.final_t = nsteps * cfg.dt;
    if (!cfg.series_path.empty()) write_series_csv(cfg.series_path, out.series);
    return out;
}

RefinementResult run_refinement(const RunConfig& cfg, const std::vector<double>& dts) {
    if (cfg.forcing != "mms" || cfg.initial != "mms")
        throw ConfigError("run_refinement requires initial = mms and forcing = mms");
    if (dts.size() < 3) throw ConfigError("run_refinement needs at least 3 time steps");
    for (std::size_t i = 1; i < dts.size(); ++i)
        if (dts[i] >= dts[i - 1]) throw ConfigError("refinement dts must be strictly decreasing");

    RefinementResult r;
    auto grid = Grid::make(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    for (double dt : dts) {
        RunConfig c = cfg;
        c.dt = dt;
        c.series_path.clear();
        c.snapshot_times.clear();
        RunOutput run = run_single(c);
        Field exact = GradientFlowModel::mms_exact(grid, cfg.t_end);
        r.dts.push_back(dt);
        r.l2_errors.push_back(l2_error(run.final_phi, exact));
        r.linf_errors.push_back(linf_error(run.final_phi, exact));
    }
    auto [o2, oinf] = fit_order(r);
    r.fitted_order_l2 = o2;
    r.fitted_order_linf = oinf;
    return r;
}

std::vector<MaxDtRow> run_max_stable_dt(const RunConfig& cfg, const std::vector<double>& dts,
                                        double ref_dt, double threshold) {
    if (dts.empty()) throw ConfigError("run_max_stable_dt: empty dt list");
    for (std::size_t i = 1; i < dts.size(); ++i)
        if (dts[i] >= dts[i - 1]) throw ConfigError("maxdt dts must be strictly decreasing");
    if (!(ref_dt <= dts.back()))
        throw ConfigError("reference dt must not exceed any probed dt");

    RunConfig ref_cfg = cfg;
    ref_cfg.dt = ref_dt;
    ref_cfg.series_path.clear();
    ref_cfg.snapshot_times.clear();
    RunOutput ref = run_single(ref_cfg);
    double ref_norm = std::sqrt(inner(ref.final_phi, ref.final_phi));

    std::vector<MaxDtRow> rows;
    for (double dt : dts) {
        RunConfig c = cfg;
        c.dt = dt;
        c.series_path.clear();
        c.snapshot_times.clear();
        MaxDtRow row;
        row.dt = dt;
        try {
            RunOutput run = run_single(c);
            row.deviation = l2_error(run.final_phi, ref.final_phi) / ref_norm;
            row.verdict = row.deviation < threshold ? "correct" : "incorrect";
        } catch (const SolverError&) {
            row.deviation = std::numeric_limits<double>::infinity();
            row.verdict = "solver_failed";
        }
        rows.push_back(row);
    }
    return rows;
}

CoarseningResult run_coarsening(const RunConfig& cfg, double window_lo, double window_hi) {
    if (!(window_lo > 0.0) || !(window_lo < window_hi) || window_hi > cfg.t_end * (1.0 + 1e-12))
        throw ConfigError("coarsening window must satisfy 0 < lo < hi <= t_end");

    CoarseningResult res;
    res.series = run_single(cfg).series;
    std::vector<double> ts, energies, roughs;
    for (const SeriesRow& r : res.series.rows) {
        if (r.t < window_lo || r.t > window_hi) continue;
        ts.push_back(r.t);
        energies.push_back(r.energy);
        roughs.push_back(r.roughness);
    }
    if (ts.size() < 2) throw ConfigError("coarsening window contains fewer than 2 samples");
    res.energy_slope = loglog_slope(ts, energies);
    res.roughness_slope = loglog_slope(ts, roughs);
    return res;
}

}  // namespace gfrk
