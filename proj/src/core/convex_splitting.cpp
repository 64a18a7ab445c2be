#include "core/convex_splitting.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace gfrk {

namespace {

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (int n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
    return m;
}

struct K2Tables {
    std::vector<double> k2;  // |k|^2 per mode
    K2Tables(const Grid& g) : k2(g.size()) {
        for (int i = 0; i < g.nx(); ++i)
            for (int j = 0; j < g.ny(); ++j)
                k2[i * g.ny() + j] = g.kx(i) * g.kx(i) + g.ky(j) * g.ky(j);
    }
};

bool diverging(int iter, double inc, double inc0) {
    return !std::isfinite(inc) || (iter >= 3 && inc > 10.0 * inc0) || inc > 1e8;
}

}  // namespace

Field cs2_step_ch(const GradientFlowModel& m, SpectralWorkspace& ws, const Field& phi_n,
                  const Field& phi_nm1, double dt, const Field* forcing_mid,
                  const Cs2Options& opt) {
    if (m.kind() != ModelKind::CahnHilliard)
        throw std::invalid_argument("cs2_step_ch: model is not Cahn-Hilliard");
    const GridPtr grid = m.grid();
    const int n = grid->size();
    const double lambda = m.lambda(), eps_sq = m.eps_sq();
    K2Tables tab(*grid);

    Field lap_phi_n = ws.laplacian(phi_n);
    Field expl(grid);  // 3/2 phi^n - 1/2 phi^{n-1}
    for (int t = 0; t < n; ++t) expl[t] = 1.5 * phi_n[t] - 0.5 * phi_nm1[t];

    SpectralField phin_hat = ws.forward(phi_n);
    SpectralField f_hat;
    if (forcing_mid) f_hat = ws.forward(*forcing_mid);

    Field v = phi_n;
    double shift = 0.0;  // stabilization, engaged only on detected divergence
    bool restarted = false;
    double inc0 = 0.0;

    for (int iter = 0; iter < opt.max_iters; ++iter) {
        // bracket = -eps^2/2 lap(phi^n) + midpoint product - extrapolated part
        Field bracket(grid);
        for (int t = 0; t < n; ++t) {
            double prod = 0.25 * (phi_n[t] * phi_n[t] + v[t] * v[t]) * (phi_n[t] + v[t]);
            bracket[t] = -0.5 * eps_sq * lap_phi_n[t] + prod - expl[t];
        }
        SpectralField b_hat = ws.forward(bracket);
        SpectralField v_hat = ws.forward(v);
        SpectralField u_hat(grid);
        for (int t = 0; t < n; ++t) {
            double k2 = tab.k2[t];
            std::complex<double> rhs = phin_hat.data()[t] / dt - lambda * k2 * b_hat.data()[t];
            if (forcing_mid) rhs += f_hat.data()[t];
            if (shift > 0.0) rhs += lambda * shift * k2 * v_hat.data()[t];
            double denom = 1.0 / dt + 0.5 * lambda * eps_sq * k2 * k2 + lambda * shift * k2;
            u_hat.data()[t] = rhs / denom;
        }
        Field u = ws.inverse(u_hat);
        double inc = max_abs_diff(u, v);
        if (iter == 0) inc0 = std::max(inc, 1e-300);
        v = std::move(u);
        if (inc < opt.tol) return v;
        if (!restarted && diverging(iter, inc, inc0)) {
            restarted = true;
            double s = 0.0;
            for (int t = 0; t < n; ++t) {
                double w = std::max(std::abs(phi_n[t]), std::abs(v[t]));
                s = std::max(s, 1.5 * w * w);
            }
            shift = 2.0 * std::max(s, 1.0);
            v = phi_n;
        }
    }
    throw SolverError(SolverError::Kind::PicardNonConvergence,
                      "cs2_step_ch: Picard iteration did not converge");
}

Field cs2_step_mbe(const GradientFlowModel& m, SpectralWorkspace& ws, const Field& phi_n,
                   const Field& phi_nm1, double dt, const Field* forcing_mid,
                   const Cs2Options& opt) {
    if (m.kind() != ModelKind::Mbe)
        throw std::invalid_argument("cs2_step_mbe: model is not MBE");
    const GridPtr grid = m.grid();
    const int n = grid->size();
    const double lambda = m.lambda(), eps_sq = m.eps_sq();
    K2Tables tab(*grid);

    auto [gnx, gny] = ws.gradient(phi_n);
    Field expl(grid);
    for (int t = 0; t < n; ++t) expl[t] = 1.5 * phi_n[t] - 0.5 * phi_nm1[t];
    SpectralField expl_hat = ws.forward(expl);
    SpectralField phin_hat = ws.forward(phi_n);
    SpectralField f_hat;
    if (forcing_mid) f_hat = ws.forward(*forcing_mid);

    Field v = phi_n;
    double shift = 0.0;
    bool restarted = false;
    double inc0 = 0.0;

    for (int iter = 0; iter < opt.max_iters; ++iter) {
        auto [gvx, gvy] = ws.gradient(v);
        Field wx(grid), wy(grid);
        for (int t = 0; t < n; ++t) {
            double coeff = 0.5 * (gvx[t] * gvx[t] + gvy[t] * gvy[t] + gnx[t] * gnx[t] +
                                  gny[t] * gny[t]);
            wx[t] = coeff * 0.5 * (gnx[t] + gvx[t]);
            wy[t] = coeff * 0.5 * (gny[t] + gvy[t]);
        }
        Field flux = ws.divergence(wx, wy);
        SpectralField flux_hat = ws.forward(flux);
        SpectralField v_hat = ws.forward(v);
        SpectralField u_hat(grid);
        for (int t = 0; t < n; ++t) {
            double k2 = tab.k2[t];
            std::complex<double> rhs = phin_hat.data()[t] * (1.0 / dt - 0.5 * lambda * eps_sq * k2 * k2) +
                                       lambda * flux_hat.data()[t] +
                                       lambda * k2 * expl_hat.data()[t];
            if (forcing_mid) rhs += f_hat.data()[t];
            if (shift > 0.0) rhs += lambda * shift * k2 * v_hat.data()[t];
            double denom = 1.0 / dt + 0.5 * lambda * eps_sq * k2 * k2 + lambda * shift * k2;
            u_hat.data()[t] = rhs / denom;
        }
        Field u = ws.inverse(u_hat);
        double inc = max_abs_diff(u, v);
        if (iter == 0) inc0 = std::max(inc, 1e-300);
        v = std::move(u);
        if (inc < opt.tol) return v;
        if (!restarted && diverging(iter, inc, inc0)) {
            restarted = true;
            double s = 1.0;
            for (int t = 0; t < n; ++t)
                s = std::max(s, gnx[t] * gnx[t] + gny[t] * gny[t]);
            shift = 3.0 * s;
            v = phi_n;
        }
    }
    throw SolverError(SolverError::Kind::PicardNonConvergence,
                      "cs2_step_mbe: Picard iteration did not converge");
}

}  // namespace gfrk
