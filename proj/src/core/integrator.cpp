#include "core/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "core/smallmat.hpp"

namespace gfrk {

namespace {

void axpy(Field& y, double alpha, const Field& x) {
    for (int n = 0; n < y.size(); ++n) y[n] += alpha * x[n];
}

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (int n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
    return m;
}

}  // namespace

LeqrkStepper::LeqrkStepper(const GradientFlowModel& model, ButcherTableau tableau,
                           SolverConfig cfg)
    : model_(model), tableau_(std::move(tableau)), cfg_(cfg), ws_(model.grid()) {
    validate_tableau(tableau_);
    const int s = tableau_.s;
    stencil_.resize(s);

    if (tableau_.name == "gauss4") {
        // Closed-form stencils through {t_{n-1}, t_{n-1}+c_1 dt, t_{n-1}+c_2 dt}.
        const double r3 = std::sqrt(3.0);
        stencil_[0] = {{Source::PrevState, 0, 6.0 - 2.0 * r3},
                       {Source::Stage, 0, 1.0 - 3.0 * r3},
                       {Source::Stage, 1, 5.0 * r3 - 6.0}};
        stencil_[1] = {{Source::PrevState, 0, 6.0 + 2.0 * r3},
                       {Source::Stage, 0, -(5.0 * r3 + 6.0)},
                       {Source::Stage, 1, 1.0 + 3.0 * r3}};
        return;
    }

    // Generic Lagrange stencil through {t_{n-1}, t_{n-1}+c_j dt, t_n} in
    // units of dt from t_{n-1}; duplicate nodes coalesce, first listed wins.
    // Stage nodes outside [t_{n-1}, t_n] are skipped: extrapolating through
    // them to t_n + c_i dt amplifies stage perturbations by two to three
    // orders of magnitude (for dirk4, keeping them multiplies errors by up
    // to ~575 per step and the recursion diverges). Stage values carry only
    // O(dt^2) accuracy for non-collocation tables, so the reduced stencil
    // costs no order.
    std::vector<double> nodes;
    std::vector<std::pair<Source, int>> sources;
    auto add_node = [&](double u, Source src, int stage) {
        for (double v : nodes)
            if (std::abs(u - v) < 1e-12) return;
        nodes.push_back(u);
        sources.emplace_back(src, stage);
    };
    add_node(0.0, Source::PrevState, 0);
    for (int j = 0; j < s; ++j) {
        double c = tableau_.c[j];
        if (c >= -1e-12 && c <= 1.0 + 1e-12) add_node(c, Source::Stage, j);
    }
    add_node(1.0, Source::CurState, 0);

    for (int i = 0; i < s; ++i) {
        auto w = lagrange_weights(nodes, 1.0 + tableau_.c[i]);
        stencil_[i].resize(nodes.size());
        for (std::size_t m = 0; m < nodes.size(); ++m)
            stencil_[i][m] = {sources[m].first, sources[m].second, w[m]};
    }
}

std::pair<std::vector<Field>, std::vector<Field>> LeqrkStepper::extrapolate(
    const History& h, const EQState& cur) const {
    if (!h.valid)
        throw std::logic_error("extrapolate: history is invalid; use the startup path");
    if (static_cast<int>(h.prev_stages.phi_stages.size()) != tableau_.s ||
        static_cast<int>(h.prev_stages.q_stages.size()) != tableau_.s)
        throw std::logic_error("extrapolate: history stage count does not match the tableau");
    const int s = tableau_.s;
    std::vector<Field> phi_n(s), q_n(s);
    for (int i = 0; i < s; ++i) {
        Field p(model_.grid()), q(model_.grid());
        for (const StencilTerm& term : stencil_[i]) {
            const Field* src_phi = nullptr;
            const Field* src_q = nullptr;
            switch (term.source) {
                case Source::PrevState:
                    src_phi = &h.prev_state.phi;
                    src_q = &h.prev_state.q;
                    break;
                case Source::Stage:
                    src_phi = &h.prev_stages.phi_stages[term.stage];
                    src_q = &h.prev_stages.q_stages[term.stage];
                    break;
                case Source::CurState:
                    src_phi = &cur.phi;
                    src_q = &cur.q;
                    break;
            }
            axpy(p, term.weight, *src_phi);
            axpy(q, term.weight, *src_q);
        }
        phi_n[i] = std::move(p);
        q_n[i] = std::move(q);
    }
    return {std::move(phi_n), std::move(q_n)};
}

std::vector<Field> LeqrkStepper::stage_forcing(double t, double dt) const {
    std::vector<Field> f;
    if (!forcing_) return f;
    f.reserve(tableau_.s);
    for (int i = 0; i < tableau_.s; ++i) f.push_back(forcing_(t + tableau_.c[i] * dt));
    return f;
}

void LeqrkStepper::mode_block_solve(const std::vector<Field>& rhs, double dt,
                                    const std::vector<double>& sym, std::vector<Field>& out) {
    const int s = tableau_.s;
    const int n = model_.grid()->size();

    std::vector<SpectralField> hat;
    hat.reserve(s);
    for (int i = 0; i < s; ++i) hat.push_back(ws_.forward(rhs[i]));

    std::complex<double> bvec[kSmallMatMax], xvec[kSmallMatMax];
    for (int m = 0; m < n; ++m) {
        for (int i = 0; i < s; ++i) bvec[i] = hat[i].data()[m];
        solve_shifted_complex(tableau_.a.data(), s, dt * sym[m], bvec, xvec);
        for (int i = 0; i < s; ++i) hat[i].data()[m] = xvec[i];
    }

    out.clear();
    out.reserve(s);
    for (int i = 0; i < s; ++i) out.push_back(ws_.inverse(hat[i]));
}

void LeqrkStepper::constant_stage_solve(const std::vector<Field>& rhs, double dt,
                                        std::vector<Field>& out) {
    mode_block_solve(rhs, dt, model_.gl_table(), out);
}

std::vector<double> LeqrkStepper::preconditioner_symbol(
    const std::vector<StarData>& stars) const {
    const Grid& g = *model_.grid();
    const int n = g.size();
    double cbar = 0.0;
    for (const StarData& star : stars) {
        double acc = 0.0;
        if (model_.kind() == ModelKind::CahnHilliard) {
            for (int t = 0; t < n; ++t) acc += star.phi_star[t] * star.phi_star[t];
            cbar += 2.0 * acc / n;
        } else {
            for (int t = 0; t < n; ++t)
                acc += star.gx[t] * star.gx[t] + star.gy[t] * star.gy[t];
            cbar += acc / n;
        }
    }
    cbar /= static_cast<double>(stars.size());

    const std::vector<double>& l = model_.l_table();
    const std::vector<double>& gt = model_.g_table();
    std::vector<double> sym(n);
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) {
            int m = i * g.ny() + j;
            double aug = model_.kind() == ModelKind::CahnHilliard
                             ? cbar
                             : cbar * (g.kx(i) * g.kx(i) + g.ky(j) * g.ky(j));
            sym[m] = gt[m] * (l[m] + aug);
        }
    return sym;
}

StageRecord LeqrkStepper::solve_stage_system(const EQState& state,
                                             const std::vector<Field>& phi_star, double dt) {
    const int s = tableau_.s;
    const int n = model_.grid()->size();

    std::vector<StarData> stars;
    stars.reserve(s);
    for (int i = 0; i < s; ++i) stars.push_back(model_.make_star(ws_, phi_star[i]));
    std::vector<Field> f = stage_forcing(state.t, dt);

    StageRecord rec;
    rec.phi_star = phi_star;
    rec.k.resize(s);
    rec.l.resize(s);
    last_gmres_ = GmresResult{};

    if (tableau_.kind == TableauKind::DiagonallyImplicit) {
        // Sequential single-stage solves exploiting lower triangularity.
        for (int i = 0; i < s; ++i) {
            Field phi_acc = state.phi;
            Field q_acc = state.q;
            for (int j = 0; j < i; ++j) {
                axpy(phi_acc, dt * tableau_.aij(i, j), rec.k[j]);
                axpy(q_acc, dt * tableau_.aij(i, j), rec.l[j]);
            }
            Field rhs = model_.apply_mobility(
                ws_, model_.chemical_potential(ws_, phi_acc, q_acc, stars[i]));
            if (!f.empty()) axpy(rhs, 1.0, f[i]);

            const double aii = tableau_.aij(i, i);
            std::vector<double> prec_sym = preconditioner_symbol({stars[i]});
            auto apply_op = [&](const double* xin, double* xout) {
                Field x(model_.grid());
                std::memcpy(x.data(), xin, n * sizeof(double));
                Field lx = ws_.apply_symbol_table(x, model_.l_table());
                Field nl = model_.nonlinear_term(ws_, stars[i], model_.l_slope(ws_, stars[i], x));
                for (int t = 0; t < n; ++t) lx[t] += nl[t];
                Field gx = model_.apply_mobility(ws_, lx);
                for (int t = 0; t < n; ++t) xout[t] = x[t] - dt * aii * gx[t];
            };
            auto apply_prec = [&](const double* xin, double* xout) {
                Field x(model_.grid());
                std::memcpy(x.data(), xin, n * sizeof(double));
                SpectralField hat = ws_.forward(x);
                for (int m = 0; m < n; ++m) hat.data()[m] /= 1.0 - dt * aii * prec_sym[m];
                Field y = ws_.inverse(hat);
                std::memcpy(xout, y.data(), n * sizeof(double));
            };

            Field k(model_.grid());
            GmresResult g = gmres(n, apply_op, apply_prec, rhs.data(), k.data(),
                                  cfg_.krylov_rel_tol, cfg_.krylov_max_iters, cfg_.gmres_restart);
            last_gmres_.iterations += g.iterations;
            last_gmres_.rel_residual = std::max(last_gmres_.rel_residual, g.rel_residual);
            last_gmres_.converged = g.converged;
            if (!g.converged)
                throw SolverError(SolverError::Kind::KrylovNonConvergence,
                                  "stage solve: Krylov iteration budget exhausted (stage " +
                                      std::to_string(i + 1) + ")");
            rec.k[i] = std::move(k);
            rec.l[i] = model_.l_slope(ws_, stars[i], rec.k[i]);
        }
    } else {
        // Coupled solve on the stacked stage slopes.
        std::vector<double> rhs(static_cast<std::size_t>(s) * n);
        for (int i = 0; i < s; ++i) {
            Field r = model_.apply_mobility(
                ws_, model_.chemical_potential(ws_, state.phi, state.q, stars[i]));
            if (!f.empty()) axpy(r, 1.0, f[i]);
            std::memcpy(rhs.data() + static_cast<std::size_t>(i) * n, r.data(),
                        n * sizeof(double));
        }

        auto apply_op = [&](const double* xin, double* xout) {
            std::vector<Field> x(s, Field(model_.grid()));
            for (int i = 0; i < s; ++i)
                std::memcpy(x[i].data(), xin + static_cast<std::size_t>(i) * n,
                            n * sizeof(double));
            std::vector<Field> lin(s);
            for (int j = 0; j < s; ++j) lin[j] = model_.l_slope(ws_, stars[j], x[j]);
            for (int i = 0; i < s; ++i) {
                Field u(model_.grid()), v(model_.grid());
                for (int j = 0; j < s; ++j) {
                    axpy(u, tableau_.aij(i, j), x[j]);
                    axpy(v, tableau_.aij(i, j), lin[j]);
                }
                Field chem = ws_.apply_symbol_table(u, model_.l_table());
                Field nl = model_.nonlinear_term(ws_, stars[i], v);
                for (int t = 0; t < n; ++t) chem[t] += nl[t];
                Field g = model_.apply_mobility(ws_, chem);
                double* out = xout + static_cast<std::size_t>(i) * n;
                for (int t = 0; t < n; ++t) out[t] = x[i][t] - dt * g[t];
            }
        };
        std::vector<double> prec_sym = preconditioner_symbol(stars);
        auto apply_prec = [&](const double* xin, double* xout) {
            std::vector<Field> x(s, Field(model_.grid()));
            for (int i = 0; i < s; ++i)
                std::memcpy(x[i].data(), xin + static_cast<std::size_t>(i) * n,
                            n * sizeof(double));
            std::vector<Field> y;
            mode_block_solve(x, dt, prec_sym, y);
            for (int i = 0; i < s; ++i)
                std::memcpy(xout + static_cast<std::size_t>(i) * n, y[i].data(),
                            n * sizeof(double));
        };

        std::vector<double> sol(static_cast<std::size_t>(s) * n, 0.0);
        GmresResult g = gmres(static_cast<std::size_t>(s) * n, apply_op, apply_prec, rhs.data(),
                              sol.data(), cfg_.krylov_rel_tol, cfg_.krylov_max_iters,
                              cfg_.gmres_restart);
        last_gmres_ = g;
        if (!g.converged)
            throw SolverError(SolverError::Kind::KrylovNonConvergence,
                              "stage solve: Krylov iteration budget exhausted");
        for (int i = 0; i < s; ++i) {
            rec.k[i] = Field(model_.grid());
            std::memcpy(rec.k[i].data(), sol.data() + static_cast<std::size_t>(i) * n,
                        n * sizeof(double));
            rec.l[i] = model_.l_slope(ws_, stars[i], rec.k[i]);
        }
    }

    rec.gmres_iters = last_gmres_.iterations;
    rec.phi_stages.assign(s, Field());
    rec.q_stages.assign(s, Field());
    for (int i = 0; i < s; ++i) {
        Field p = state.phi;
        Field q = state.q;
        for (int j = 0; j < s; ++j) {
            double a = tableau_.aij(i, j);
            if (a == 0.0) continue;
            axpy(p, dt * a, rec.k[j]);
            axpy(q, dt * a, rec.l[j]);
        }
        rec.phi_stages[i] = std::move(p);
        rec.q_stages[i] = std::move(q);
    }
    return rec;
}

std::pair<EQState, StageRecord> LeqrkStepper::step_impl(const EQState& state, const History* h,
                                                        double dt, int sweeps,
                                                        bool constant_predictors) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const int s = tableau_.s;

    std::vector<Field> phi_pred, q_pred;
    if (constant_predictors) {
        phi_pred.assign(s, state.phi);
        q_pred.assign(s, state.q);
    } else {
        auto [p, q] = extrapolate(*h, state);
        phi_pred = std::move(p);
        q_pred = std::move(q);
    }

    std::vector<Field> f = stage_forcing(state.t, dt);
    int done_sweeps = 0;
    double last_inc = 0.0;

    if (sweeps > 0) {
        // Lagged nonlinear terms on the right make every sweep one
        // constant-coefficient solve per Fourier mode.
        Field gl_phi_n = ws_.apply_symbol_table(state.phi, model_.gl_table());
        double prev_inc = std::numeric_limits<double>::infinity();
        for (int m = 0; m < sweeps; ++m) {
            std::vector<Field> rhs(s);
            for (int i = 0; i < s; ++i) {
                StarData star = model_.make_star(ws_, phi_pred[i]);
                Field nl = model_.nonlinear_term(ws_, star, q_pred[i]);
                Field r = model_.apply_mobility(ws_, nl);
                axpy(r, 1.0, gl_phi_n);
                if (!f.empty()) axpy(r, 1.0, f[i]);
                rhs[i] = std::move(r);
            }
            std::vector<Field> k;
            constant_stage_solve(rhs, dt, k);

            std::vector<Field> phi_new(s);
            for (int i = 0; i < s; ++i) {
                Field p = state.phi;
                for (int j = 0; j < s; ++j) axpy(p, dt * tableau_.aij(i, j), k[j]);
                phi_new[i] = std::move(p);
            }
            std::vector<Field> l(s);
            for (int i = 0; i < s; ++i) l[i] = model_.l_slope(ws_, phi_new[i], k[i]);
            std::vector<Field> q_new(s);
            for (int i = 0; i < s; ++i) {
                Field q = state.q;
                for (int j = 0; j < s; ++j) axpy(q, dt * tableau_.aij(i, j), l[j]);
                q_new[i] = std::move(q);
            }

            double inc = 0.0;
            for (int i = 0; i < s; ++i)
                inc = std::max(inc, max_abs_diff(phi_new[i], phi_pred[i]));
            // The sweep map has no convergence guarantee at large steps.
            // Once the increment stops shrinking the iteration is diverging:
            // keep the last contracting iterate instead of a blown-up one.
            if (!(inc < prev_inc)) break;
            prev_inc = inc;
            last_inc = inc;
            phi_pred = std::move(phi_new);
            q_pred = std::move(q_new);
            ++done_sweeps;
            if (last_inc < cfg_.pc_tol) break;
        }
    }

    StageRecord rec = solve_stage_system(state, phi_pred, dt);
    rec.pc_sweeps = done_sweeps;
    rec.pc_last_increment = last_inc;

    EQState next;
    next.phi = state.phi;
    next.q = state.q;
    for (int i = 0; i < s; ++i) {
        axpy(next.phi, dt * tableau_.b[i], rec.k[i]);
        axpy(next.q, dt * tableau_.b[i], rec.l[i]);
    }
    next.t = state.t + dt;
    return {std::move(next), std::move(rec)};
}

std::pair<EQState, StageRecord> LeqrkStepper::leqrk_step(const EQState& state, const History& h,
                                                         double dt) {
    return step_impl(state, &h, dt, 0, false);
}

std::pair<EQState, StageRecord> LeqrkStepper::leqrk_pc_step(const EQState& state,
                                                            const History& h, double dt) {
    if (!h.valid) return step_impl(state, nullptr, dt, cfg_.pc_iters, true);
    return step_impl(state, &h, dt, cfg_.pc_iters, false);
}

std::pair<EQState, StageRecord> LeqrkStepper::first_step(const EQState& state0, double dt) {
    return step_impl(state0, nullptr, dt, std::max(cfg_.pc_iters, 5), true);
}

History LeqrkStepper::make_history(const EQState& before, const StageRecord& rec) {
    History h;
    h.prev_state = before;
    h.prev_stages = rec;
    h.valid = true;
    return h;
}

double LeqrkStepper::stage_equation_residual(const EQState& state, const StageRecord& rec,
                                             double dt) {
    std::vector<Field> f = stage_forcing(state.t, dt);
    double res = 0.0;
    for (int i = 0; i < tableau_.s; ++i) {
        StarData star = model_.make_star(ws_, rec.phi_star[i]);
        Field rhs = model_.apply_mobility(
            ws_, model_.chemical_potential(ws_, rec.phi_stages[i], rec.q_stages[i], star));
        if (!f.empty()) axpy(rhs, 1.0, f[i]);
        res = std::max(res, max_abs_diff(rec.k[i], rhs));
    }
    return res;
}

double LeqrkStepper::stage_consistency_residual(const EQState& state, const StageRecord& rec,
                                                double dt) {
    double res = 0.0;
    for (int i = 0; i < tableau_.s; ++i) {
        Field p = state.phi;
        for (int j = 0; j < tableau_.s; ++j) axpy(p, dt * tableau_.aij(i, j), rec.k[j]);
        res = std::max(res, max_abs_diff(p, rec.phi_stages[i]));
    }
    return res;
}

}  // namespace gfrk
