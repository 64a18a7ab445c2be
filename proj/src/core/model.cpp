#include "core/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gfrk {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

GradientFlowModel::GradientFlowModel(ModelKind kind, GridPtr grid, double lambda, double eps_sq,
                                     double gamma)
    : kind_(kind),
      name_(kind == ModelKind::CahnHilliard ? "cahn_hilliard" : "mbe"),
      grid_(std::move(grid)),
      lambda_(lambda),
      eps_sq_(eps_sq),
      gamma_(gamma) {
    if (!(lambda_ > 0.0)) throw std::invalid_argument(name_ + ": lambda must be positive");
    if (!(eps_sq_ > 0.0)) throw std::invalid_argument(name_ + ": epsilon must be positive");
    if (gamma_ < 0.0) throw std::invalid_argument(name_ + ": gamma must be nonnegative");

    const Grid& g = *grid_;
    l_table_.resize(g.size());
    g_table_.resize(g.size());
    gl_table_.resize(g.size());
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            int n = i * g.ny() + j;
            l_table_[n] = l_symbol(g.kx(i), g.ky(j));
            g_table_[n] = g_symbol(g.kx(i), g.ky(j));
            gl_table_[n] = g_table_[n] * l_table_[n];
        }
    }
}

GradientFlowModel GradientFlowModel::cahn_hilliard(GridPtr grid, double lambda, double epsilon,
                                                   double gamma) {
    return cahn_hilliard_eps_sq(std::move(grid), lambda, epsilon * epsilon, gamma);
}

GradientFlowModel GradientFlowModel::mbe(GridPtr grid, double lambda, double epsilon,
                                         double gamma) {
    return mbe_eps_sq(std::move(grid), lambda, epsilon * epsilon, gamma);
}

GradientFlowModel GradientFlowModel::cahn_hilliard_eps_sq(GridPtr grid, double lambda,
                                                          double eps_sq, double gamma) {
    return GradientFlowModel(ModelKind::CahnHilliard, std::move(grid), lambda, eps_sq, gamma);
}

GradientFlowModel GradientFlowModel::mbe_eps_sq(GridPtr grid, double lambda, double eps_sq,
                                                double gamma) {
    return GradientFlowModel(ModelKind::Mbe, std::move(grid), lambda, eps_sq, gamma);
}

double GradientFlowModel::l_symbol(double kx, double ky) const {
    double k2 = kx * kx + ky * ky;
    if (kind_ == ModelKind::CahnHilliard) return eps_sq_ * k2 + gamma_;
    return eps_sq_ * k2 * k2 + gamma_ * k2;
}

double GradientFlowModel::g_symbol(double kx, double ky) const {
    if (kind_ == ModelKind::CahnHilliard) return -lambda_ * (kx * kx + ky * ky);
    return -lambda_;
}

double GradientFlowModel::energy_offset() const {
    return -(gamma_ * gamma_ + 2.0 * gamma_) / 4.0 * grid_->area();
}

Field GradientFlowModel::filter_product(SpectralWorkspace& ws, Field f) const {
    if (!dealias) return f;
    SpectralField hat = ws.forward(f);
    truncate_two_thirds(hat);
    return ws.inverse(hat);
}

Field GradientFlowModel::init_q(SpectralWorkspace& ws, const Field& phi0) const {
    Field q(grid_);
    if (kind_ == ModelKind::CahnHilliard) {
        for (int n = 0; n < q.size(); ++n)
            q[n] = 0.5 * (phi0[n] * phi0[n] - 1.0 - gamma_);
    } else {
        auto [gx, gy] = ws.gradient(phi0);
        for (int n = 0; n < q.size(); ++n)
            q[n] = 0.5 * (gx[n] * gx[n] + gy[n] * gy[n] - 1.0 - gamma_);
    }
    return q;
}

StarData GradientFlowModel::make_star(SpectralWorkspace& ws, const Field& phi_star) const {
    StarData star;
    star.phi_star = phi_star;
    if (kind_ == ModelKind::Mbe) {
        auto [gx, gy] = ws.gradient(phi_star);
        star.gx = std::move(gx);
        star.gy = std::move(gy);
    }
    return star;
}

Field GradientFlowModel::l_slope(SpectralWorkspace& ws, const StarData& star,
                                 const Field& k) const {
    Field out(grid_);
    if (kind_ == ModelKind::CahnHilliard) {
        for (int n = 0; n < out.size(); ++n) out[n] = star.phi_star[n] * k[n];
    } else {
        auto [kx, ky] = ws.gradient(k);
        for (int n = 0; n < out.size(); ++n) out[n] = star.gx[n] * kx[n] + star.gy[n] * ky[n];
    }
    return filter_product(ws, std::move(out));
}

Field GradientFlowModel::l_slope(SpectralWorkspace& ws, const Field& phi_star,
                                 const Field& k) const {
    return l_slope(ws, make_star(ws, phi_star), k);
}

Field GradientFlowModel::nonlinear_term(SpectralWorkspace& ws, const StarData& star,
                                        const Field& q) const {
    if (kind_ == ModelKind::CahnHilliard) {
        Field out(grid_);
        for (int n = 0; n < out.size(); ++n) out[n] = 2.0 * q[n] * star.phi_star[n];
        return filter_product(ws, std::move(out));
    }
    Field wx(grid_), wy(grid_);
    for (int n = 0; n < wx.size(); ++n) {
        wx[n] = 2.0 * q[n] * star.gx[n];
        wy[n] = 2.0 * q[n] * star.gy[n];
    }
    wx = filter_product(ws, std::move(wx));
    wy = filter_product(ws, std::move(wy));
    Field div = ws.divergence(wx, wy);
    for (int n = 0; n < div.size(); ++n) div[n] = -div[n];
    return div;
}

Field GradientFlowModel::chemical_potential(SpectralWorkspace& ws, const Field& phi,
                                            const Field& q, const StarData& star) const {
    Field mu = ws.apply_symbol_table(phi, l_table_);
    Field nl = nonlinear_term(ws, star, q);
    for (int n = 0; n < mu.size(); ++n) mu[n] += nl[n];
    return mu;
}

Field GradientFlowModel::chemical_potential(SpectralWorkspace& ws, const Field& phi,
                                            const Field& q, const Field& phi_star) const {
    return chemical_potential(ws, phi, q, make_star(ws, phi_star));
}

Field GradientFlowModel::apply_mobility(SpectralWorkspace& ws, const Field& mu) const {
    if (kind_ == ModelKind::CahnHilliard) return ws.apply_symbol_table(mu, g_table_);
    Field out(grid_);
    for (int n = 0; n < out.size(); ++n) out[n] = -lambda_ * mu[n];
    return out;
}

double GradientFlowModel::energy_original(SpectralWorkspace& ws, const Field& phi) const {
    if (kind_ == ModelKind::CahnHilliard) {
        auto [gx, gy] = ws.gradient(phi);
        double grad2 = inner(gx, gx) + inner(gy, gy);
        Field w(grid_);
        for (int n = 0; n < w.size(); ++n) w[n] = phi[n] * phi[n] - 1.0;
        return 0.5 * eps_sq_ * grad2 + 0.25 * inner(w, w);
    }
    Field lap = ws.laplacian(phi);
    auto [gx, gy] = ws.gradient(phi);
    Field w(grid_);
    for (int n = 0; n < w.size(); ++n) w[n] = gx[n] * gx[n] + gy[n] * gy[n] - 1.0;
    return 0.5 * eps_sq_ * inner(lap, lap) + 0.25 * inner(w, w);
}

double GradientFlowModel::energy_quadratized(SpectralWorkspace& ws, const EQState& s) const {
    SpectralField hat = ws.forward(s.phi);
    double quad = 0.0;
    for (int n = 0; n < hat.size(); ++n) quad += l_table_[n] * std::norm(hat.data()[n]);
    quad *= 0.5 * grid_->area();
    return quad + inner(s.q, s.q) + energy_offset();
}

Field GradientFlowModel::mms_exact(const GridPtr& grid, double t) {
    Field f(grid);
    const Grid& g = *grid;
    double ct = std::cos(t);
    for (int i = 0; i < g.nx(); ++i) {
        double sx = std::sin(g.x(i));
        for (int j = 0; j < g.ny(); ++j) f(i, j) = sx * std::sin(g.y(j)) * ct;
    }
    return f;
}

Field GradientFlowModel::mms_forcing(double t) const {
    const Grid& g = *grid_;
    if (std::abs(g.lx() - kTwoPi) > 1e-12 || std::abs(g.ly() - kTwoPi) > 1e-12)
        throw std::invalid_argument("mms_forcing requires the [0,2pi]^2 domain");
    Field f(grid_);
    const double st = std::sin(t), ct = std::cos(t), ct3 = ct * ct * ct;
    for (int i = 0; i < g.nx(); ++i) {
        const double x = g.x(i);
        const double sx = std::sin(x), cx = std::cos(x);
        for (int j = 0; j < g.ny(); ++j) {
            const double y = g.y(j);
            const double sy = std::sin(y), cy = std::cos(y);
            const double S = sx * sy;
            if (kind_ == ModelKind::CahnHilliard) {
                // f = dphi/dt - lambda*Lap(-eps^2*Lap(phi) + phi^3 - phi), phi = S cos t
                f(i, j) = -S * st + lambda_ * (4.0 * eps_sq_ - 2.0) * S * ct -
                          6.0 * lambda_ * ct3 * (sx * sy * sy * sy + sx * sx * sx * sy) +
                          18.0 * lambda_ * ct3 * sx * sx * sx * sy * sy * sy;
            } else {
                // f = dphi/dt + lambda*(eps^2*Lap^2(phi) - div((|grad phi|^2 - 1) grad phi))
                const double s2x = std::sin(2.0 * x), c2x = std::cos(2.0 * x);
                const double s2y = std::sin(2.0 * y), c2y = std::cos(2.0 * y);
                const double P = cx * cx * sy * sy + sx * sx * cy * cy;
                f(i, j) = -S * st + 4.0 * lambda_ * eps_sq_ * S * ct - 2.0 * lambda_ * S * ct -
                          lambda_ * ct3 * (s2x * c2y * cx * sy + c2x * s2y * sx * cy - 2.0 * S * P);
            }
        }
    }
    return f;
}

}  // namespace gfrk
