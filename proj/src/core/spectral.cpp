#include "core/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gfrk {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Grid::Grid(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    hx_ = lx_ / nx_;
    hy_ = ly_ / ny_;
    kx_.resize(nx_);
    ky_.resize(ny_);
    for (int i = 0; i < nx_; ++i) {
        int m = (i <= nx_ / 2) ? i : i - nx_;
        kx_[i] = kTwoPi / lx_ * m;
    }
    for (int j = 0; j < ny_; ++j) {
        int m = (j <= ny_ / 2) ? j : j - ny_;
        ky_[j] = kTwoPi / ly_ * m;
    }
}

std::shared_ptr<const Grid> Grid::make(int nx, int ny, double lx, double ly) {
    if (nx <= 0 || ny <= 0 || nx % 2 != 0 || ny % 2 != 0)
        throw std::invalid_argument("Grid: nx, ny must be positive even integers");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw std::invalid_argument("Grid: lx, ly must be positive");
    return std::shared_ptr<const Grid>(new Grid(nx, ny, lx, ly));
}

bool Grid::same_as(const Grid& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ && lx_ == other.lx_ && ly_ == other.ly_;
}

bool Field::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

std::complex<double> SpectralField::mode(int mx, int my) const {
    int i = mx >= 0 ? mx : mx + grid_->nx();
    int j = my >= 0 ? my : my + grid_->ny();
    return c_[i * grid_->ny() + j];
}

SpectralField apply_symbol(const SpectralField& f,
                           const std::function<double(double, double)>& sym) {
    const Grid& g = *f.grid();
    SpectralField out(f.grid());
    for (int i = 0; i < g.nx(); ++i) {
        double kx = g.kx(i);
        for (int j = 0; j < g.ny(); ++j)
            out(i, j) = f(i, j) * sym(kx, g.ky(j));
    }
    return out;
}

double inner(const Field& f, const Field& g) {
    if (!f.grid()->same_as(*g.grid()))
        throw std::invalid_argument("inner: fields live on different grids");
    double acc = 0.0;
    const double* a = f.data();
    const double* b = g.data();
    for (int n = 0; n < f.size(); ++n) acc += a[n] * b[n];
    return f.grid()->hx() * f.grid()->hy() * acc;
}

double linf_norm(const Field& f) {
    double m = 0.0;
    for (int n = 0; n < f.size(); ++n) m = std::max(m, std::abs(f[n]));
    return m;
}

double field_mean(const Field& f) {
    double acc = 0.0;
    for (int n = 0; n < f.size(); ++n) acc += f[n];
    return acc / f.size();
}

void truncate_two_thirds(SpectralField& f) {
    const Grid& g = *f.grid();
    for (int i = 0; i < g.nx(); ++i) {
        int mx = (i <= g.nx() / 2) ? i : i - g.nx();
        for (int j = 0; j < g.ny(); ++j) {
            int my = (j <= g.ny() / 2) ? j : j - g.ny();
            if (3 * std::abs(mx) > g.nx() || 3 * std::abs(my) > g.ny()) f(i, j) = 0.0;
        }
    }
}

SpectralWorkspace::SpectralWorkspace(GridPtr grid)
    : grid_(std::move(grid)), buf_(grid_->size()) {
    auto* buf = reinterpret_cast<fftw_complex*>(buf_.data());
    plan_fwd_ = fftw_plan_dft_2d(grid_->nx(), grid_->ny(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_2d(grid_->nx(), grid_->ny(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("SpectralWorkspace: fftw plan failed");
}

SpectralWorkspace::~SpectralWorkspace() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SpectralWorkspace::fft_forward_raw(const Field& f, std::complex<double>* out) {
    const int n = grid_->size();
    for (int i = 0; i < n; ++i) buf_[i] = f[i];
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     reinterpret_cast<fftw_complex*>(buf_.data()),
                     reinterpret_cast<fftw_complex*>(buf_.data()));
    const double scale = 1.0 / n;
    for (int i = 0; i < n; ++i) out[i] = buf_[i] * scale;
}

Field SpectralWorkspace::fft_backward_raw(std::complex<double>* in, bool check_residue) {
    const int n = grid_->size();
    for (int i = 0; i < n; ++i) buf_[i] = in[i];
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                     reinterpret_cast<fftw_complex*>(buf_.data()),
                     reinterpret_cast<fftw_complex*>(buf_.data()));
    Field out(grid_);
    double max_abs = 0.0, max_imag = 0.0;
    for (int i = 0; i < n; ++i) {
        out[i] = buf_[i].real();
        max_abs = std::max(max_abs, std::abs(buf_[i]));
        max_imag = std::max(max_imag, std::abs(buf_[i].imag()));
    }
    if (check_residue && max_imag > 1e-8 * max_abs)
        throw std::runtime_error("inverse transform: imaginary residue exceeds 1e-8 of the field norm (corrupted spectral data)");
    return out;
}

SpectralField SpectralWorkspace::forward(const Field& f) {
    if (!f.grid()->same_as(*grid_))
        throw std::invalid_argument("forward: field grid does not match workspace");
    SpectralField out(grid_);
    fft_forward_raw(f, out.data());
    return out;
}

Field SpectralWorkspace::inverse(const SpectralField& f) {
    if (!f.grid()->same_as(*grid_))
        throw std::invalid_argument("inverse: field grid does not match workspace");
    std::vector<std::complex<double>> tmp(f.data(), f.data() + grid_->size());
    return fft_backward_raw(tmp.data(), true);
}

Field SpectralWorkspace::apply_symbol_to_field(const Field& f,
                                               const std::function<double(double, double)>& sym) {
    const int ny = grid_->ny();
    std::vector<std::complex<double>> hat(grid_->size());
    fft_forward_raw(f, hat.data());
    for (int i = 0; i < grid_->nx(); ++i) {
        double kx = grid_->kx(i);
        for (int j = 0; j < ny; ++j) hat[i * ny + j] *= sym(kx, grid_->ky(j));
    }
    return fft_backward_raw(hat.data(), false);
}

Field SpectralWorkspace::apply_symbol_table(const Field& f, const std::vector<double>& table) {
    if (static_cast<int>(table.size()) != grid_->size())
        throw std::invalid_argument("apply_symbol_table: table size mismatch");
    std::vector<std::complex<double>> hat(grid_->size());
    fft_forward_raw(f, hat.data());
    for (int n = 0; n < grid_->size(); ++n) hat[n] *= table[n];
    return fft_backward_raw(hat.data(), false);
}

std::pair<Field, Field> SpectralWorkspace::gradient(const Field& f) {
    const int nx = grid_->nx(), ny = grid_->ny();
    std::vector<std::complex<double>> hat(grid_->size());
    fft_forward_raw(f, hat.data());
    std::vector<std::complex<double>> dx(grid_->size()), dy(grid_->size());
    for (int i = 0; i < nx; ++i) {
        // Odd-derivative symbol: the Nyquist wavenumber is zeroed.
        double kx = (i == nx / 2) ? 0.0 : grid_->kx(i);
        for (int j = 0; j < ny; ++j) {
            double ky = (j == ny / 2) ? 0.0 : grid_->ky(j);
            std::complex<double> c = hat[i * ny + j];
            dx[i * ny + j] = std::complex<double>(-kx * c.imag(), kx * c.real());
            dy[i * ny + j] = std::complex<double>(-ky * c.imag(), ky * c.real());
        }
    }
    Field gx = fft_backward_raw(dx.data(), false);
    Field gy = fft_backward_raw(dy.data(), false);
    return {std::move(gx), std::move(gy)};
}

Field SpectralWorkspace::divergence(const Field& fx, const Field& fy) {
    if (!fx.grid()->same_as(*fy.grid()))
        throw std::invalid_argument("divergence: fields live on different grids");
    const int nx = grid_->nx(), ny = grid_->ny();
    std::vector<std::complex<double>> hx(grid_->size()), hy(grid_->size());
    fft_forward_raw(fx, hx.data());
    fft_forward_raw(fy, hy.data());
    for (int i = 0; i < nx; ++i) {
        double kx = (i == nx / 2) ? 0.0 : grid_->kx(i);
        for (int j = 0; j < ny; ++j) {
            double ky = (j == ny / 2) ? 0.0 : grid_->ky(j);
            std::complex<double> a = hx[i * ny + j];
            std::complex<double> b = hy[i * ny + j];
            hx[i * ny + j] = std::complex<double>(-kx * a.imag() - ky * b.imag(),
                                                  kx * a.real() + ky * b.real());
        }
    }
    return fft_backward_raw(hx.data(), false);
}

Field SpectralWorkspace::laplacian(const Field& f) {
    return apply_symbol_to_field(f, [](double kx, double ky) { return -(kx * kx + ky * ky); });
}

}  // namespace gfrk
